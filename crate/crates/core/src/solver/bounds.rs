//! Incremental sector lower bounds.
//!
//! Nodes known to share a sector are kept in a union-find. Each class
//! carries the summed demand of the pipes attached to it, where a pipe is
//! attached as soon as one of its slots is known to be valve-free. That
//! sum can only grow as the assignment is completed, so it bounds the
//! damage of breaking any pipe in the class from below.
//!
//! Every mutation is trailed; [`SectorBoundState::rollback`] undoes back to
//! a previous [`SectorBoundState::mark`]. No path compression, union by size.

use crate::netmodel::{Demand, EdgeId, Network, NodeId, SlotId};

#[derive(Clone, Debug)]
enum Undo {
    Attach {
        edge: EdgeId,
        root: u32,
        weight: Demand,
    },
    Union {
        child: u32,
        root: u32,
        lb: Demand,
        source: bool,
        size: u32,
    },
}

#[derive(Clone, Debug)]
pub struct SectorBoundState {
    parent: Vec<u32>,
    size: Vec<u32>,
    lb: Vec<Demand>,
    source: Vec<bool>,
    attached: Vec<bool>,
    trail: Vec<Undo>,
}

/// Representation-independent view of a [`SectorBoundState`], for equality
/// checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSnapshot {
    /// Smallest node index of each node's class.
    pub class_of: Vec<u32>,
    /// Lower bound of each node's class.
    pub lb: Vec<Demand>,
    pub source: Vec<bool>,
    pub attached: Vec<bool>,
}

impl SectorBoundState {
    pub fn new(net: &Network) -> Self {
        let n = net.node_count();
        SectorBoundState {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            lb: vec![Demand::ZERO; n],
            source: net.nodes().map(|v| net.is_source(v)).collect(),
            attached: vec![false; net.edge_count()],
            trail: Vec::new(),
        }
    }

    fn root(&self, mut v: u32) -> u32 {
        while self.parent[v as usize] != v {
            v = self.parent[v as usize];
        }
        v
    }

    pub fn find(&self, n: NodeId) -> NodeId {
        NodeId(self.root(n.0))
    }

    pub fn lower_bound(&self, n: NodeId) -> Demand {
        self.lb[self.root(n.0) as usize]
    }

    pub fn contains_source(&self, n: NodeId) -> bool {
        self.source[self.root(n.0) as usize]
    }

    pub fn is_attached(&self, e: EdgeId) -> bool {
        self.attached[e.index()]
    }

    /// Records that `slot` holds no valve. The pipe joins the class of the
    /// slot's node (counted once, whichever slot comes first); when
    /// `opposite_free` the two end classes merge. Returns the class root.
    pub fn open_slot(&mut self, net: &Network, slot: SlotId, opposite_free: bool) -> NodeId {
        let e = slot.edge();
        let node = net.slot_node(slot);
        let mut r = self.root(node.0);
        if !self.attached[e.index()] {
            let weight = net.demand(e);
            self.attached[e.index()] = true;
            self.lb[r as usize] += weight;
            self.trail.push(Undo::Attach {
                edge: e,
                root: r,
                weight,
            });
        }
        if opposite_free {
            let other = net.slot_node(slot.opposite());
            r = self.union(r, self.root(other.0));
        }
        NodeId(r)
    }

    fn union(&mut self, a: u32, b: u32) -> u32 {
        if a == b {
            return a;
        }
        let (root, child) = if self.size[a as usize] >= self.size[b as usize] {
            (a, b)
        } else {
            (b, a)
        };
        let (r, c) = (root as usize, child as usize);
        self.trail.push(Undo::Union {
            child,
            root,
            lb: self.lb[r],
            source: self.source[r],
            size: self.size[r],
        });
        self.parent[c] = root;
        self.size[r] += self.size[c];
        self.lb[r] = self.lb[r] + self.lb[c];
        self.source[r] |= self.source[c];
        root
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn rollback(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Undo::Attach { edge, root, weight } => {
                    self.attached[edge.index()] = false;
                    self.lb[root as usize] = self.lb[root as usize] - weight;
                }
                Undo::Union {
                    child,
                    root,
                    lb,
                    source,
                    size,
                } => {
                    self.parent[child as usize] = child;
                    self.lb[root as usize] = lb;
                    self.source[root as usize] = source;
                    self.size[root as usize] = size;
                }
            }
        }
    }

    /// Largest class bound.
    pub fn max_lower_bound(&self) -> Demand {
        (0..self.parent.len())
            .filter(|&v| self.parent[v] == v as u32)
            .map(|v| self.lb[v])
            .max()
            .unwrap_or(Demand::ZERO)
    }

    pub fn snapshot(&self) -> BoundSnapshot {
        let n = self.parent.len();
        let mut min_of_root = vec![u32::MAX; n];
        for v in 0..n as u32 {
            let r = self.root(v) as usize;
            min_of_root[r] = min_of_root[r].min(v);
        }
        let roots: Vec<usize> = (0..n as u32).map(|v| self.root(v) as usize).collect();
        BoundSnapshot {
            class_of: roots.iter().map(|&r| min_of_root[r]).collect(),
            lb: roots.iter().map(|&r| self.lb[r]).collect(),
            source: roots.iter().map(|&r| self.source[r]).collect(),
            attached: self.attached.clone(),
        }
    }
}
