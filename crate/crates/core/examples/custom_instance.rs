//! Building a network in code, then saving and solving it.

use isovalve::netmodel::Network;
use isovalve::solver::{solve, SolverOptions};

fn main() {
    let net = Network::builder()
        .name("two-loops")
        .nodes(["A", "B", "C", "D", "E"])
        .source("A")
        .edge("ab", "A", "B", 4.0)
        .edge("bc", "B", "C", 2.5)
        .edge("cd", "C", "D", 6.0)
        .edge("da", "D", "A", 3.0)
        .edge("be", "B", "E", 1.0)
        .edge("ce", "C", "E", 2.0)
        .coord("A", 0.0, 0.0)
        .coord("B", 1.0, 0.0)
        .coord("C", 1.0, 1.0)
        .coord("D", 0.0, 1.0)
        .coord("E", 2.0, 0.5)
        .build()
        .unwrap();
    println!("{}", net.to_document());
    for nv in 2..=6 {
        match solve(&net, nv, &SolverOptions::default()) {
            Ok(s) => println!(
                "{nv} valves: {} l/s  [{}]",
                s.ud,
                s.placement.labels(&net).join(" ")
            ),
            Err(e) => println!("{nv} valves: {e}"),
        }
    }
}
