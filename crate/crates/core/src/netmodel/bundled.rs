//! Instances shipped with the crate.

use super::Network;

const FIG1: &str = include_str!("../../instances/fig1.json");
const FIG2: &str = include_str!("../../instances/fig2.json");

pub const BUNDLED_NAMES: &[&str] = &["fig1", "fig2"];

/// Six nodes, seven pipes, source at node 1; total demand 47 l/s.
pub fn fig1() -> Network {
    Network::parse(FIG1).expect("bundled fig1 is valid")
}

/// Ladder-shaped network with two degree-2 nodes (7 and 8) and unit demands.
pub fn fig2() -> Network {
    Network::parse(FIG2).expect("bundled fig2 is valid")
}

pub fn bundled(name: &str) -> Option<Network> {
    match name {
        "fig1" => Some(fig1()),
        "fig2" => Some(fig2()),
        _ => None,
    }
}
