//! Valve count against worst-case damage on `fig2`.

use isovalve::netmodel::fig2;
use isovalve::pareto::{frontier_csv, sweep};
use isovalve::solver::SolverOptions;

fn main() {
    let net = fig2();
    let s = sweep(&net, 1..=12, &SolverOptions::default()).unwrap();
    for note in &s.notes {
        eprintln!("note: {note}");
    }
    print!("{}", frontier_csv(&s));
    for p in &s.frontier {
        eprintln!("{:>2}: {}", p.nv, p.placement.labels(&net).join(" "));
    }
}
