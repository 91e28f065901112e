//! Search effort with each pruning family switched off in turn.

use isovalve::netmodel::{fig1, fig2};
use isovalve::solver::{solve, SolverOptions};

fn main() {
    let all = SolverOptions::default();
    let variants = [
        ("all rules", all.clone()),
        (
            "no faces",
            SolverOptions {
                face_constraints: false,
                ..all.clone()
            },
        ),
        (
            "no symmetry",
            SolverOptions {
                symmetry: false,
                ..all.clone()
            },
        ),
        (
            "no bound",
            SolverOptions {
                lb_prune: false,
                ..all.clone()
            },
        ),
        (
            "no reduced cost",
            SolverOptions {
                reduced_cost: false,
                ..all.clone()
            },
        ),
        ("none", SolverOptions::unpruned()),
    ];
    for (name, net, nv) in [("fig1", fig1(), 6), ("fig2", fig2(), 8)] {
        println!("{name}, {nv} valves");
        for (label, opts) in &variants {
            let s = solve(&net, nv, opts).unwrap();
            println!(
                "  {label:<16} ud {:>4}  nodes {:>7}  leaves {:>7}",
                s.ud, s.stats.nodes, s.stats.leaves
            );
        }
    }
}
