//! Optimal six-valve placement for `fig1`.

use isovalve::netmodel::fig1;
use isovalve::solver::{solve, SolverOptions};

fn main() {
    let net = fig1();
    let sol = solve(&net, 6, &SolverOptions::default()).expect("six valves are enough");
    println!(
        "worst case {} l/s at {} ({:?})",
        sol.ud,
        net.edge_label(sol.argmax),
        sol.status
    );
    println!("valves: {}", sol.placement.labels(&net).join(" "));
    println!("{:#?}", sol.stats);
}
