//! Faces recovered from node coordinates.

use isovalve::generate::{generate, GenParams};
use isovalve::netmodel::{fig1, fig2};

fn main() {
    let random = generate(GenParams {
        nodes: 10,
        edges: 16,
        seed: 2,
    })
    .unwrap();
    for net in [fig1(), fig2(), random] {
        println!("{} ({:?}):", net.name().unwrap_or("?"), net.face_origin());
        for f in net.faces() {
            let cycle: Vec<_> = f.iter().map(|&n| net.node_label(n)).collect();
            println!("  {}", cycle.join(" - "));
        }
    }
}
