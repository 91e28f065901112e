//! Continuing versus restarting after each new incumbent.

use isovalve::generate::corpus;
use isovalve::solver::{solve, RestartMode, SolverOptions};

fn main() {
    let cont = SolverOptions::default();
    let rest = SolverOptions {
        restart_mode: RestartMode::Restarting,
        ..cont.clone()
    };
    let (mut a, mut b) = (0, 0);
    for net in corpus(30, 1) {
        for nv in 3..=5 {
            if let (Ok(x), Ok(y)) = (solve(&net, nv, &cont), solve(&net, nv, &rest)) {
                assert_eq!(x.ud, y.ud);
                a += x.stats.nodes;
                b += y.stats.nodes;
            }
        }
    }
    println!(
        "nodes: continuing {a}, restarting {b} ({:.2}x)",
        b as f64 / a as f64
    );
}
