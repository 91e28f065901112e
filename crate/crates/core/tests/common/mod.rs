#![allow(dead_code)]

use isovalve::netmodel::{Demand, EdgeId, Network, NodeId, Placement, SlotId};
use petgraph::graph::{NodeIndex, UnGraph};
use petgraph::visit::{Bfs, Walker};

pub const PAPER_PLACEMENT: &str = "e12:1 e23:2 e23:3 e45:5 e56:5 e16:1";

/// Optimal worst case on fig1 for 2..=14 valves, from exhaustive enumeration.
pub const FIG1_OPTIMA: [u64; 13] = [47, 36, 24, 17, 15, 15, 15, 15, 15, 15, 15, 15, 15];

pub fn slot(net: &Network, label: &str) -> SlotId {
    let (e, n) = label.split_once(':').unwrap();
    let e = net.edge_by_label(e).unwrap();
    net.slot_at(e, net.node_by_label(n).unwrap()).unwrap()
}

pub fn edge(net: &Network, label: &str) -> EdgeId {
    net.edge_by_label(label).unwrap()
}

pub fn labels(net: &Network, slots: &[SlotId]) -> Vec<String> {
    let mut v: Vec<String> = slots.iter().map(|&s| net.slot_label(s)).collect();
    v.sort();
    v
}

/// Node/pipe incidence graph: vertices `0..n` are nodes, `n + e` is pipe e.
fn incidence(net: &Network, keep: impl Fn(SlotId) -> bool) -> UnGraph<(), ()> {
    let n = net.node_count();
    let mut g = UnGraph::<(), ()>::with_capacity(n + net.edge_count(), net.slot_count());
    for _ in 0..n + net.edge_count() {
        g.add_node(());
    }
    for s in net.slots() {
        if keep(s) {
            let v = net.slot_node(s).index();
            g.add_edge(NodeIndex::new(v), NodeIndex::new(n + s.edge().index()), ());
        }
    }
    g
}

/// Worst-case damage of breaking `broken`, computed by deleting the sector
/// from the network and looking at what stays attached to a source.
/// `None` when the broken pipe's sector holds a source.
pub fn deletion_ud(net: &Network, p: &Placement, broken: EdgeId) -> Option<Demand> {
    let n = net.node_count();
    // sectors: components once every valved incidence is cut
    let g = incidence(net, |s| !p.has_valve(s));
    let reached: Vec<usize> = Bfs::new(&g, NodeIndex::new(n + broken.index()))
        .iter(&g)
        .map(|v| v.index())
        .collect();
    let in_sector = |v: usize| reached.contains(&v);
    if net.sources().iter().any(|s| in_sector(s.index())) {
        return None;
    }
    // delete the sector's pipes and nodes; every other incidence stays
    let rest = incidence(net, |s| {
        !in_sector(n + s.edge().index()) && !in_sector(net.slot_node(s).index())
    });
    let mut fed = vec![false; n + net.edge_count()];
    for &s in net.sources() {
        for v in Bfs::new(&rest, NodeIndex::new(s.index())).iter(&rest) {
            fed[v.index()] = true;
        }
    }
    let delivered: Demand = net
        .edge_ids()
        .filter(|e| fed[n + e.index()])
        .map(|e| net.demand(e))
        .sum();
    Some(net.total_demand() - delivered)
}

pub fn deletion_worst(net: &Network, p: &Placement) -> Demand {
    net.edge_ids()
        .map(|e| deletion_ud(net, p, e).unwrap_or(Demand::INFINITE))
        .max()
        .unwrap_or(Demand::ZERO)
}

/// Every placement of `net`, as masks over the slots.
pub fn all_placements(net: &Network) -> impl Iterator<Item = Placement> + '_ {
    let k = net.slot_count();
    (0u64..1 << k)
        .map(move |bits| Placement::from_mask((0..k).map(|i| bits >> i & 1 == 1).collect()))
}

pub fn nodes_of(net: &Network, labels: &[&str]) -> Vec<NodeId> {
    labels
        .iter()
        .map(|l| net.node_by_label(l).unwrap())
        .collect()
}
