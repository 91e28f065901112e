//! What happens when a pipe breaks: which valves get closed, which pipes
//! lose water, and how much demand goes undelivered.
//!
//! All traversals run on the node/pipe incidence structure. Passing
//! between a pipe and one of its end nodes goes through that end's slot;
//! the slot blocks when it carries a valve (sector discovery) or when its
//! valve is closed (delivery after isolation). Open valves pass water.

use serde::Serialize;

use crate::netmodel::{Demand, EdgeId, Network, NodeId, Placement, SlotId};

/// One sector: the pipes reachable from each other without crossing a valve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sector {
    pub edges: Vec<EdgeId>,
    /// Nodes reached while traversing the sector.
    pub nodes: Vec<NodeId>,
    /// Valves met by the traversal: the set closed when any of its pipes breaks.
    pub boundary: Vec<SlotId>,
    pub demand: Demand,
    pub contains_source: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorPartition {
    /// Sector index of every edge.
    pub edge_sector: Vec<usize>,
    /// Sectors ordered by their lowest edge id.
    pub sectors: Vec<Sector>,
}

impl SectorPartition {
    pub fn sector_of_edge(&self, e: EdgeId) -> &Sector {
        &self.sectors[self.edge_sector[e.index()]]
    }
}

/// Consequences of repairing one broken pipe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsolationOutcome {
    pub broken: EdgeId,
    pub closed: Vec<SlotId>,
    /// Pipes left without a path from any source.
    pub dewatered: Vec<EdgeId>,
    pub undelivered: Demand,
    /// False when the broken pipe keeps receiving water (a source sits
    /// inside its sector).
    pub feasible: bool,
}

/// Worst single-pipe failure of a placement.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WorstCase {
    /// [`Demand::INFINITE`] when some pipe cannot be isolated.
    pub ud: Demand,
    /// Lowest-id pipe attaining `ud` (or the lowest non-isolable pipe).
    pub edge: EdgeId,
    pub feasible: bool,
}

/// Reusable scratch space for repeated evaluations on one network.
pub struct Evaluator<'n> {
    net: &'n Network,
    total: Demand,
    edge_mark: Vec<u32>,
    node_mark: Vec<u32>,
    slot_mark: Vec<u32>,
    closed: Vec<u32>,
    stamp: u32,
    stack: Vec<Item>,
}

#[derive(Copy, Clone)]
enum Item {
    Edge(EdgeId),
    Node(NodeId),
}

impl<'n> Evaluator<'n> {
    pub fn new(net: &'n Network) -> Self {
        Evaluator {
            net,
            total: net.total_demand(),
            edge_mark: vec![0; net.edge_count()],
            node_mark: vec![0; net.node_count()],
            slot_mark: vec![0; net.slot_count()],
            closed: vec![0; net.slot_count()],
            stamp: 0,
            stack: Vec::new(),
        }
    }

    fn next_stamp(&mut self) -> u32 {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.edge_mark.fill(0);
            self.node_mark.fill(0);
            self.slot_mark.fill(0);
            self.closed.fill(0);
            self.stamp = 1;
        }
        self.stamp
    }

    /// Sector containing `e` under placement `p`.
    pub fn sector_of(&mut self, p: &Placement, e: EdgeId) -> Sector {
        let net = self.net;
        let stamp = self.next_stamp();
        let mut sector = Sector {
            edges: vec![e],
            nodes: Vec::new(),
            boundary: Vec::new(),
            demand: Demand::ZERO,
            contains_source: false,
        };
        self.edge_mark[e.index()] = stamp;
        self.stack.clear();
        self.stack.push(Item::Edge(e));
        while let Some(item) = self.stack.pop() {
            match item {
                Item::Edge(x) => {
                    for (side, &k) in net.edge(x).ends.iter().enumerate() {
                        let slot = x.slot(side);
                        if p.has_valve(slot) {
                            if self.slot_mark[slot.index()] != stamp {
                                self.slot_mark[slot.index()] = stamp;
                                sector.boundary.push(slot);
                            }
                        } else if self.node_mark[k.index()] != stamp {
                            self.node_mark[k.index()] = stamp;
                            sector.nodes.push(k);
                            self.stack.push(Item::Node(k));
                        }
                    }
                }
                Item::Node(k) => {
                    for &y in net.incident(k) {
                        let slot = net.slot_at(y, k).unwrap();
                        if p.has_valve(slot) {
                            if self.slot_mark[slot.index()] != stamp {
                                self.slot_mark[slot.index()] = stamp;
                                sector.boundary.push(slot);
                            }
                        } else if self.edge_mark[y.index()] != stamp {
                            self.edge_mark[y.index()] = stamp;
                            sector.edges.push(y);
                            self.stack.push(Item::Edge(y));
                        }
                    }
                }
            }
        }
        sector.edges.sort();
        sector.nodes.sort();
        sector.boundary.sort();
        sector.demand = sector.edges.iter().map(|&x| net.demand(x)).sum();
        sector.contains_source = sector.nodes.iter().any(|&n| net.is_source(n));
        sector
    }

    pub fn sectors(&mut self, p: &Placement) -> SectorPartition {
        let mut edge_sector = vec![usize::MAX; self.net.edge_count()];
        let mut sectors = Vec::new();
        for e in self.net.edge_ids() {
            if edge_sector[e.index()] != usize::MAX {
                continue;
            }
            let s = self.sector_of(p, e);
            for &x in &s.edges {
                edge_sector[x.index()] = sectors.len();
            }
            sectors.push(s);
        }
        SectorPartition {
            edge_sector,
            sectors,
        }
    }

    /// Marks every pipe still reachable from a source once `closed` valves
    /// are shut; returns the delivered demand. Marks use the returned stamp.
    fn deliver(&mut self, closed: &[SlotId]) -> (Demand, u32) {
        let net = self.net;
        let stamp = self.next_stamp();
        for &s in closed {
            self.closed[s.index()] = stamp;
        }
        let mut delivered = Demand::ZERO;
        self.stack.clear();
        for &s in net.sources() {
            if self.node_mark[s.index()] != stamp {
                self.node_mark[s.index()] = stamp;
                self.stack.push(Item::Node(s));
            }
        }
        while let Some(item) = self.stack.pop() {
            match item {
                Item::Edge(x) => {
                    for (side, &k) in net.edge(x).ends.iter().enumerate() {
                        if self.closed[x.slot(side).index()] != stamp
                            && self.node_mark[k.index()] != stamp
                        {
                            self.node_mark[k.index()] = stamp;
                            self.stack.push(Item::Node(k));
                        }
                    }
                }
                Item::Node(k) => {
                    for &y in net.incident(k) {
                        let slot = net.slot_at(y, k).unwrap();
                        if self.closed[slot.index()] != stamp && self.edge_mark[y.index()] != stamp
                        {
                            self.edge_mark[y.index()] = stamp;
                            delivered += net.demand(y);
                            self.stack.push(Item::Edge(y));
                        }
                    }
                }
            }
        }
        (delivered, stamp)
    }

    /// Outcome of breaking `e`, given its sector.
    fn outcome_for(&mut self, sector: &Sector, e: EdgeId) -> IsolationOutcome {
        let (delivered, stamp) = self.deliver(&sector.boundary);
        let dewatered: Vec<EdgeId> = self
            .net
            .edge_ids()
            .filter(|x| self.edge_mark[x.index()] != stamp)
            .collect();
        let feasible = self.edge_mark[e.index()] != stamp;
        IsolationOutcome {
            broken: e,
            closed: sector.boundary.clone(),
            dewatered,
            undelivered: self.total - delivered,
            feasible,
        }
    }

    pub fn evaluate_break(&mut self, p: &Placement, e: EdgeId) -> IsolationOutcome {
        let sector = self.sector_of(p, e);
        self.outcome_for(&sector, e)
    }

    /// Outcomes for every pipe, sharing one evaluation per sector.
    pub fn evaluate_all(&mut self, p: &Placement) -> (SectorPartition, Vec<IsolationOutcome>) {
        let part = self.sectors(p);
        let per_sector: Vec<IsolationOutcome> = part
            .sectors
            .iter()
            .map(|s| self.outcome_for(s, s.edges[0]))
            .collect();
        let outcomes = self
            .net
            .edge_ids()
            .map(|e| {
                let mut o = per_sector[part.edge_sector[e.index()]].clone();
                o.broken = e;
                o
            })
            .collect();
        (part, outcomes)
    }

    pub fn worst_case_ud(&mut self, p: &Placement) -> WorstCase {
        let part = self.sectors(p);
        if let Some(s) = part.sectors.iter().find(|s| s.contains_source) {
            return WorstCase {
                ud: Demand::INFINITE,
                edge: s.edges[0],
                feasible: false,
            };
        }
        let mut worst: Option<WorstCase> = None;
        for s in &part.sectors {
            let (delivered, _) = self.deliver(&s.boundary);
            let ud = self.total - delivered;
            let better = match worst {
                None => true,
                Some(w) => ud > w.ud || (ud == w.ud && s.edges[0] < w.edge),
            };
            if better {
                worst = Some(WorstCase {
                    ud,
                    edge: s.edges[0],
                    feasible: true,
                });
            }
        }
        worst.unwrap_or(WorstCase {
            ud: Demand::ZERO,
            edge: EdgeId(0),
            feasible: true,
        })
    }
}

pub fn sector_of(net: &Network, p: &Placement, e: EdgeId) -> Sector {
    Evaluator::new(net).sector_of(p, e)
}

pub fn sectors(net: &Network, p: &Placement) -> SectorPartition {
    Evaluator::new(net).sectors(p)
}

pub fn evaluate_break(net: &Network, p: &Placement, e: EdgeId) -> IsolationOutcome {
    Evaluator::new(net).evaluate_break(p, e)
}

pub fn worst_case_ud(net: &Network, p: &Placement) -> WorstCase {
    Evaluator::new(net).worst_case_ud(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netmodel::fig1;

    fn paper_placement(net: &Network) -> Placement {
        Placement::parse(net, "e12:1 e23:2 e23:3 e45:5 e56:5 e16:1").unwrap()
    }

    fn edge(net: &Network, label: &str) -> EdgeId {
        net.edge_by_label(label).unwrap()
    }

    fn slot_labels(net: &Network, slots: &[SlotId]) -> Vec<String> {
        slots.iter().map(|&s| net.slot_label(s)).collect()
    }

    fn edge_labels(net: &Network, edges: &[EdgeId]) -> Vec<String> {
        edges
            .iter()
            .map(|&e| net.edge_label(e).to_string())
            .collect()
    }

    #[test]
    fn sector_of_e34() {
        let net = fig1();
        let s = sector_of(&net, &paper_placement(&net), edge(&net, "e34"));
        assert_eq!(edge_labels(&net, &s.edges), ["e34", "e45"]);
        assert_eq!(slot_labels(&net, &s.boundary), ["e23:3", "e45:5"]);
    }

    #[test]
    fn sector_of_e25() {
        let net = fig1();
        let s = sector_of(&net, &paper_placement(&net), edge(&net, "e25"));
        assert_eq!(edge_labels(&net, &s.edges), ["e12", "e25"]);
        assert_eq!(
            slot_labels(&net, &s.boundary),
            ["e12:1", "e23:2", "e45:5", "e56:5"]
        );
    }

    #[test]
    fn doubly_valved_pipe_is_its_own_sector() {
        let net = fig1();
        let e = edge(&net, "e34");
        let p = Placement::from_slots(&net, e.slots());
        let s = sector_of(&net, &p, e);
        assert_eq!(s.edges, [e]);
        assert_eq!(s.boundary, e.slots());
    }

    #[test]
    fn four_sectors_in_paper_placement() {
        let net = fig1();
        let part = sectors(&net, &paper_placement(&net));
        let groups: Vec<Vec<String>> = part
            .sectors
            .iter()
            .map(|s| edge_labels(&net, &s.edges))
            .collect();
        assert_eq!(
            groups,
            vec![
                vec!["e12", "e25"],
                vec!["e16", "e56"],
                vec!["e23"],
                vec!["e34", "e45"]
            ]
        );
        let total: Demand = part.sectors.iter().map(|s| s.demand).sum();
        assert_eq!(total, net.total_demand());
    }

    #[test]
    fn extreme_placements_partition() {
        let net = fig1();
        let none = sectors(&net, &Placement::empty(&net));
        assert_eq!(none.sectors.len(), 1);
        assert_eq!(none.sectors[0].edges.len(), 7);
        let all = sectors(&net, &Placement::full(&net));
        assert_eq!(all.sectors.len(), 7);
        assert!(all
            .sectors
            .iter()
            .all(|s| s.edges.len() == 1 && s.nodes.is_empty()));
    }

    #[test]
    fn per_break_undelivered_demand() {
        let net = fig1();
        let p = paper_placement(&net);
        for (label, ud) in [
            ("e23", 3),
            ("e34", 13),
            ("e45", 13),
            ("e16", 11),
            ("e56", 11),
            ("e12", 36),
            ("e25", 36),
        ] {
            let o = evaluate_break(&net, &p, edge(&net, label));
            assert!(o.feasible, "{label}");
            assert_eq!(o.undelivered, Demand::from_lps(ud), "{label}");
        }
        let o = evaluate_break(&net, &p, edge(&net, "e34"));
        assert_eq!(edge_labels(&net, &o.dewatered), ["e34", "e45"]);
        let o = evaluate_break(&net, &p, edge(&net, "e25"));
        assert_eq!(
            edge_labels(&net, &o.dewatered),
            ["e12", "e23", "e25", "e34", "e45"]
        );
    }

    #[test]
    fn worst_case_of_paper_placement() {
        let net = fig1();
        let w = worst_case_ud(&net, &paper_placement(&net));
        assert_eq!(w.ud, Demand::from_lps(36));
        assert_eq!(net.edge_label(w.edge), "e12");
        assert!(w.feasible);
    }

    #[test]
    fn no_valves_is_infeasible() {
        let net = fig1();
        let w = worst_case_ud(&net, &Placement::empty(&net));
        assert!(!w.feasible);
        assert!(w.ud.is_infinite());
        let o = evaluate_break(&net, &Placement::empty(&net), EdgeId(0));
        assert!(!o.feasible);
        assert!(o.dewatered.is_empty());
    }

    #[test]
    fn all_valves_worst_case() {
        // every pipe is its own sector; the heaviest pipe e25 dominates
        let net = fig1();
        let w = worst_case_ud(&net, &Placement::full(&net));
        assert_eq!(w.ud, Demand::from_lps(15));
        assert_eq!(net.edge_label(w.edge), "e25");
    }

    #[test]
    fn evaluate_all_matches_single_breaks() {
        let net = fig1();
        let p = paper_placement(&net);
        let mut ev = Evaluator::new(&net);
        let (_, all) = ev.evaluate_all(&p);
        for o in all {
            assert_eq!(o, ev.evaluate_break(&p, o.broken));
        }
    }
}
