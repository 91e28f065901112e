//! Network data model: pipes, nodes, sources, valve slots and placements.
//!
//! A [`Network`] is immutable once built. Node and edge ids are dense
//! indices assigned in document order; the labels used in the instance
//! document are kept for output.

mod bundled;
mod document;
mod faces;
mod placement;

use std::collections::HashMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub};
use std::path::Path;

use serde::{Serialize, Serializer};
use thiserror::Error;

pub use bundled::{bundled, fig1, fig2, BUNDLED_NAMES};
pub use faces::{compute_faces, FaceError};
pub use placement::{Placement, PlacementError};

/// Dense node index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NodeId(pub u32);

/// Dense edge (pipe) index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeId(pub u32);

/// One of the two valve positions of a pipe.
///
/// Slot `2 * e + side` sits on edge `e` next to its endpoint `ends[side]`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SlotId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn slot(self, side: usize) -> SlotId {
        debug_assert!(side < 2);
        SlotId(self.0 * 2 + side as u32)
    }

    pub fn slots(self) -> [SlotId; 2] {
        [self.slot(0), self.slot(1)]
    }
}

impl SlotId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn edge(self) -> EdgeId {
        EdgeId(self.0 / 2)
    }

    pub fn side(self) -> usize {
        (self.0 % 2) as usize
    }

    /// The other slot of the same pipe.
    pub fn opposite(self) -> SlotId {
        SlotId(self.0 ^ 1)
    }
}

/// A flow in thousandths of a litre per second.
///
/// Integer storage keeps every bound comparison exact. [`Demand::INFINITE`]
/// is the sentinel used for placements that cannot isolate some pipe.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Demand(u64);

impl Demand {
    pub const ZERO: Demand = Demand(0);
    pub const INFINITE: Demand = Demand(u64::MAX);

    pub const fn from_millis(millis: u64) -> Self {
        Demand(millis)
    }

    pub const fn from_lps(lps: u64) -> Self {
        Demand(lps * 1000)
    }

    /// Converts a decimal value in l/s; `None` when negative, non-finite or
    /// carrying more than three fractional digits.
    pub fn from_lps_f64(lps: f64) -> Option<Self> {
        if !lps.is_finite() || lps < 0.0 {
            return None;
        }
        let scaled = lps * 1000.0;
        let rounded = scaled.round();
        if (scaled - rounded).abs() > 1e-6 * rounded.max(1.0) || rounded >= u64::MAX as f64 {
            return None;
        }
        Some(Demand(rounded as u64))
    }

    pub const fn millis(self) -> u64 {
        self.0
    }

    pub fn as_lps(self) -> f64 {
        if self.is_infinite() {
            f64::INFINITY
        } else {
            self.0 as f64 / 1000.0
        }
    }

    pub const fn is_infinite(self) -> bool {
        self.0 == u64::MAX
    }
}

impl Add for Demand {
    type Output = Demand;
    fn add(self, rhs: Demand) -> Demand {
        Demand(self.0.saturating_add(rhs.0))
    }
}

impl AddAssign for Demand {
    fn add_assign(&mut self, rhs: Demand) {
        *self = *self + rhs;
    }
}

impl Sub for Demand {
    type Output = Demand;
    fn sub(self, rhs: Demand) -> Demand {
        if self.is_infinite() {
            return self;
        }
        Demand(self.0 - rhs.0)
    }
}

impl Sum for Demand {
    fn sum<I: Iterator<Item = Demand>>(iter: I) -> Demand {
        iter.fold(Demand::ZERO, |acc, d| acc + d)
    }
}

impl fmt::Display for Demand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            return f.write_str("inf");
        }
        let whole = self.0 / 1000;
        let frac = self.0 % 1000;
        if frac == 0 {
            write!(f, "{whole}")
        } else {
            let digits = format!("{frac:03}");
            write!(f, "{whole}.{}", digits.trim_end_matches('0'))
        }
    }
}

impl Serialize for Demand {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_infinite() {
            serializer.serialize_none()
        } else if self.0.is_multiple_of(1000) {
            serializer.serialize_u64(self.0 / 1000)
        } else {
            serializer.serialize_f64(self.as_lps())
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub label: String,
    pub ends: [NodeId; 2],
    pub demand: Demand,
}

impl Edge {
    /// Endpoint on the far side of `node`.
    pub fn other(&self, node: NodeId) -> NodeId {
        if self.ends[0] == node {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }
}

/// Where the face cycles of a network come from.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceOrigin {
    Declared,
    Computed,
    None,
}

#[derive(Debug, Error, PartialEq)]
pub enum NetworkError {
    #[error("instance document line {line}, column {column}: {message}")]
    Document {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` references unknown node `{node}`")]
    UnknownNode { edge: String, node: String },
    #[error("edge `{0}` is a self-loop")]
    SelfLoop(String),
    #[error("edges `{0}` and `{1}` join the same pair of nodes")]
    ParallelEdge(String, String),
    #[error("edge `{edge}` has invalid demand {value} (must be finite, >= 0, at most 3 decimals)")]
    InvalidDemand { edge: String, value: f64 },
    #[error("network has no source node")]
    NoSources,
    #[error("unknown source node `{0}`")]
    UnknownSource(String),
    #[error("face {index}: {message}")]
    InvalidFace { index: usize, message: String },
    #[error("coordinates missing for node `{0}`")]
    MissingCoords(String),
    #[error("edge `{0}` is not reachable from any source")]
    Disconnected(String),
}

/// A water distribution network: undirected pipes with demands and a set
/// of source nodes.
#[derive(Clone, Debug)]
pub struct Network {
    name: Option<String>,
    node_labels: Vec<String>,
    edges: Vec<Edge>,
    sources: Vec<NodeId>,
    is_source: Vec<bool>,
    incident: Vec<Vec<EdgeId>>,
    pair_index: HashMap<(NodeId, NodeId), EdgeId>,
    coords: Option<Vec<[f64; 2]>>,
    faces: Vec<Vec<NodeId>>,
    face_origin: FaceOrigin,
}

impl Network {
    pub fn builder() -> NetworkBuilder {
        NetworkBuilder::default()
    }

    /// Parses and validates an instance document.
    pub fn parse(text: &str) -> Result<Network, NetworkError> {
        document::parse(text)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Network, NetworkError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| NetworkError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    /// Canonical instance document for this network.
    pub fn to_document(&self) -> String {
        document::serialize(self)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn node_count(&self) -> usize {
        self.node_labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn slot_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_labels.len() as u32).map(NodeId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn slots(&self) -> impl Iterator<Item = SlotId> + '_ {
        (0..self.slot_count() as u32).map(SlotId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub fn demand(&self, e: EdgeId) -> Demand {
        self.edges[e.index()].demand
    }

    pub fn sources(&self) -> &[NodeId] {
        &self.sources
    }

    pub fn is_source(&self, n: NodeId) -> bool {
        self.is_source[n.index()]
    }

    pub fn incident(&self, n: NodeId) -> &[EdgeId] {
        &self.incident[n.index()]
    }

    pub fn degree(&self, n: NodeId) -> usize {
        self.incident[n.index()].len()
    }

    pub fn node_label(&self, n: NodeId) -> &str {
        &self.node_labels[n.index()]
    }

    pub fn edge_label(&self, e: EdgeId) -> &str {
        &self.edges[e.index()].label
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.node_labels
            .iter()
            .position(|l| l == label)
            .map(|i| NodeId(i as u32))
    }

    pub fn edge_by_label(&self, label: &str) -> Option<EdgeId> {
        self.edges
            .iter()
            .position(|e| e.label == label)
            .map(|i| EdgeId(i as u32))
    }

    pub fn edge_between(&self, a: NodeId, b: NodeId) -> Option<EdgeId> {
        self.pair_index.get(&ordered(a, b)).copied()
    }

    /// Node next to which `slot` sits.
    pub fn slot_node(&self, slot: SlotId) -> NodeId {
        self.edges[slot.edge().index()].ends[slot.side()]
    }

    /// Slot on `e` next to `node`, if `node` is an endpoint of `e`.
    pub fn slot_at(&self, e: EdgeId, node: NodeId) -> Option<SlotId> {
        let ends = self.edges[e.index()].ends;
        ends.iter()
            .position(|&n| n == node)
            .map(|side| e.slot(side))
    }

    /// `edge_label:node_label`, the token used in placement files.
    pub fn slot_label(&self, slot: SlotId) -> String {
        format!(
            "{}:{}",
            self.edge_label(slot.edge()),
            self.node_label(self.slot_node(slot))
        )
    }

    /// Sum of all pipe demands.
    pub fn total_demand(&self) -> Demand {
        self.edges.iter().map(|e| e.demand).sum()
    }

    pub fn coords(&self) -> Option<&[[f64; 2]]> {
        self.coords.as_deref()
    }

    /// Face cycles used by the redundant-valve constraint.
    pub fn faces(&self) -> &[Vec<NodeId>] {
        &self.faces
    }

    pub fn face_origin(&self) -> FaceOrigin {
        self.face_origin
    }

    /// Both slots of every pipe along a closed node walk, as a multiset.
    pub fn face_slots(&self, face: &[NodeId]) -> Vec<SlotId> {
        let k = face.len();
        let mut slots = Vec::with_capacity(2 * k);
        for i in 0..k {
            let e = self
                .edge_between(face[i], face[(i + 1) % k])
                .expect("face walks are validated");
            slots.extend(e.slots());
        }
        slots
    }

    /// Slots that must carry a valve for every pipe to be isolable: a
    /// pipe touching a source without a valve at that end can never be
    /// cut off from it.
    pub fn source_slots(&self) -> Vec<SlotId> {
        let mut slots: Vec<SlotId> = self
            .sources
            .iter()
            .flat_map(|&s| {
                self.incident(s)
                    .iter()
                    .map(move |&e| self.slot_at(e, s).unwrap())
            })
            .collect();
        slots.sort();
        slots
    }
}

fn ordered(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Incremental constructor used by the document parser and the instance
/// generator. All validation happens in [`NetworkBuilder::build`].
#[derive(Clone, Debug, Default)]
pub struct NetworkBuilder {
    name: Option<String>,
    nodes: Vec<String>,
    sources: Vec<String>,
    edges: Vec<(String, String, String, f64)>,
    faces: Option<Vec<Vec<String>>>,
    coords: Option<HashMap<String, [f64; 2]>>,
}

impl NetworkBuilder {
    pub fn name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn node(mut self, label: impl ToString) -> Self {
        self.nodes.push(label.to_string());
        self
    }

    pub fn nodes<T: ToString>(mut self, labels: impl IntoIterator<Item = T>) -> Self {
        self.nodes.extend(labels.into_iter().map(|l| l.to_string()));
        self
    }

    pub fn source(mut self, label: impl ToString) -> Self {
        self.sources.push(label.to_string());
        self
    }

    /// Adds a pipe with its demand in l/s.
    pub fn edge(
        mut self,
        id: impl ToString,
        a: impl ToString,
        b: impl ToString,
        demand: f64,
    ) -> Self {
        self.edges
            .push((id.to_string(), a.to_string(), b.to_string(), demand));
        self
    }

    pub fn face<T: ToString>(mut self, cycle: impl IntoIterator<Item = T>) -> Self {
        self.faces
            .get_or_insert_with(Vec::new)
            .push(cycle.into_iter().map(|l| l.to_string()).collect());
        self
    }

    pub fn coord(mut self, label: impl ToString, x: f64, y: f64) -> Self {
        self.coords
            .get_or_insert_with(HashMap::new)
            .insert(label.to_string(), [x, y]);
        self
    }

    pub fn build(self) -> Result<Network, NetworkError> {
        let mut index: HashMap<&str, NodeId> = HashMap::new();
        for (i, label) in self.nodes.iter().enumerate() {
            if index.insert(label.as_str(), NodeId(i as u32)).is_some() {
                return Err(NetworkError::DuplicateNode(label.clone()));
            }
        }
        let lookup = |edge: &str, node: &str| {
            index
                .get(node)
                .copied()
                .ok_or_else(|| NetworkError::UnknownNode {
                    edge: edge.to_string(),
                    node: node.to_string(),
                })
        };

        let mut edges = Vec::with_capacity(self.edges.len());
        let mut pair_index = HashMap::new();
        let mut seen_ids = HashMap::new();
        let mut incident = vec![Vec::new(); self.nodes.len()];
        for (i, (id, a, b, w)) in self.edges.iter().enumerate() {
            if seen_ids.insert(id.as_str(), i).is_some() {
                return Err(NetworkError::DuplicateEdge(id.clone()));
            }
            let (na, nb) = (lookup(id, a)?, lookup(id, b)?);
            if na == nb {
                return Err(NetworkError::SelfLoop(id.clone()));
            }
            let demand = Demand::from_lps_f64(*w).ok_or_else(|| NetworkError::InvalidDemand {
                edge: id.clone(),
                value: *w,
            })?;
            let eid = EdgeId(i as u32);
            if let Some(prev) = pair_index.insert(ordered(na, nb), eid) {
                return Err(NetworkError::ParallelEdge(
                    self.edges[prev.index()].0.clone(),
                    id.clone(),
                ));
            }
            incident[na.index()].push(eid);
            incident[nb.index()].push(eid);
            edges.push(Edge {
                label: id.clone(),
                ends: [na, nb],
                demand,
            });
        }

        if self.sources.is_empty() {
            return Err(NetworkError::NoSources);
        }
        let mut is_source = vec![false; self.nodes.len()];
        let mut sources = Vec::new();
        for s in &self.sources {
            let n = *index
                .get(s.as_str())
                .ok_or_else(|| NetworkError::UnknownSource(s.clone()))?;
            if !is_source[n.index()] {
                is_source[n.index()] = true;
                sources.push(n);
            }
        }
        sources.sort();

        let coords = match &self.coords {
            None => None,
            Some(map) => {
                let mut out = Vec::with_capacity(self.nodes.len());
                for label in &self.nodes {
                    let xy = map
                        .get(label)
                        .ok_or_else(|| NetworkError::MissingCoords(label.clone()))?;
                    out.push(*xy);
                }
                Some(out)
            }
        };

        let mut net = Network {
            name: self.name,
            node_labels: self.nodes,
            edges,
            sources,
            is_source,
            incident,
            pair_index,
            coords,
            faces: Vec::new(),
            face_origin: FaceOrigin::None,
        };
        net.check_reachable()?;

        if let Some(faces) = self.faces {
            let mut cycles = Vec::with_capacity(faces.len());
            for (i, face) in faces.iter().enumerate() {
                let invalid = |message: String| NetworkError::InvalidFace { index: i, message };
                if face.len() < 3 {
                    return Err(invalid("a face needs at least three nodes".into()));
                }
                let mut cycle = Vec::with_capacity(face.len());
                for label in face {
                    let n = net
                        .node_by_label(label)
                        .ok_or_else(|| invalid(format!("unknown node `{label}`")))?;
                    cycle.push(n);
                }
                for k in 0..cycle.len() {
                    let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
                    if net.edge_between(a, b).is_none() {
                        return Err(invalid(format!(
                            "no pipe between `{}` and `{}`",
                            net.node_label(a),
                            net.node_label(b)
                        )));
                    }
                }
                cycles.push(cycle);
            }
            net.faces = cycles;
            net.face_origin = FaceOrigin::Declared;
        } else if net.coords.is_some() {
            match compute_faces(&net) {
                Ok(faces) => {
                    net.faces = faces;
                    net.face_origin = FaceOrigin::Computed;
                }
                Err(err) => {
                    log::warn!("face constraints disabled: {err}");
                }
            }
        }
        Ok(net)
    }
}

impl Network {
    fn check_reachable(&self) -> Result<(), NetworkError> {
        let mut seen_node = vec![false; self.node_count()];
        let mut seen_edge = vec![false; self.edge_count()];
        let mut stack: Vec<NodeId> = self.sources.clone();
        for &s in &self.sources {
            seen_node[s.index()] = true;
        }
        while let Some(n) = stack.pop() {
            for &e in self.incident(n) {
                seen_edge[e.index()] = true;
                let m = self.edge(e).other(n);
                if !seen_node[m.index()] {
                    seen_node[m.index()] = true;
                    stack.push(m);
                }
            }
        }
        match seen_edge.iter().position(|&s| !s) {
            Some(i) => Err(NetworkError::Disconnected(self.edges[i].label.clone())),
            None => Ok(()),
        }
    }
}
