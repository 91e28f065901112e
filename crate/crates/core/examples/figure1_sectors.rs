//! Sectors, closed valves and per-break damage for the six-valve drawing of
//! the bundled `fig1` network.

use isovalve::isolation::Evaluator;
use isovalve::netmodel::{fig1, Placement};

fn main() {
    let net = fig1();
    let p = Placement::parse(&net, "e12:1 e23:2 e23:3 e45:5 e56:5 e16:1").unwrap();
    let mut ev = Evaluator::new(&net);
    let (part, outcomes) = ev.evaluate_all(&p);

    for (i, s) in part.sectors.iter().enumerate() {
        let pipes: Vec<_> = s.edges.iter().map(|&e| net.edge_label(e)).collect();
        let valves: Vec<_> = s.boundary.iter().map(|&v| net.slot_label(v)).collect();
        println!(
            "sector {i}: pipes {pipes:?}, demand {}, closes {valves:?}",
            s.demand
        );
    }
    for o in &outcomes {
        println!(
            "break {} -> {} l/s undelivered",
            net.edge_label(o.broken),
            o.undelivered
        );
    }
    let w = ev.worst_case_ud(&p);
    println!("worst case {} l/s at {}", w.ud, net.edge_label(w.edge));
}
