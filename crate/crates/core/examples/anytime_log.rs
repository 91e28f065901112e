//! Incumbent history on a generated 14-pipe network, as CSV.
//!
//! `cargo run --example anytime_log > anytime.csv`

use isovalve::generate::{generate, GenParams};
use isovalve::solver::{anytime_csv, solve, SolverOptions};

fn main() {
    let net = generate(GenParams {
        nodes: 9,
        edges: 14,
        seed: 5,
    })
    .unwrap();
    let sol = solve(&net, 6, &SolverOptions::default()).unwrap();
    print!("{}", anytime_csv(&sol.anytime));
    eprintln!("optimum {} after {} nodes", sol.ud, sol.stats.nodes);
}
