//! JSON instance documents.
//!
//! ```json
//! {
//!   "name": "fig1",
//!   "nodes": [1, 2, 3],
//!   "sources": [1],
//!   "edges": [["e12", 1, 2, 5], ["e23", 2, 3, 3.5]],
//!   "faces": [[1, 2, 3]],
//!   "coords": {"1": [0, 0], "2": [1, 0], "3": [1, 1]}
//! }
//! ```
//!
//! Ids may be integers or strings. Demands are in l/s with at most three
//! fractional digits. `faces` and `coords` are optional.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FaceOrigin, Network, NetworkError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum Label {
    Int(u64),
    Str(String),
}

impl Label {
    fn from_text(text: &str) -> Label {
        match text.parse::<u64>() {
            Ok(v) if v.to_string() == text => Label::Int(v),
            _ => Label::Str(text.to_string()),
        }
    }

    fn into_text(self) -> String {
        match self {
            Label::Int(v) => v.to_string(),
            Label::Str(s) => s,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    nodes: Vec<Label>,
    sources: Vec<Label>,
    edges: Vec<(Label, Label, Label, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    faces: Option<Vec<Vec<Label>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<BTreeMap<String, [f64; 2]>>,
}

pub(super) fn parse(text: &str) -> Result<Network, NetworkError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| NetworkError::Document {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let mut b = Network::builder().nodes(doc.nodes.into_iter().map(Label::into_text));
    if let Some(name) = doc.name {
        b = b.name(name);
    }
    for s in doc.sources {
        b = b.source(s.into_text());
    }
    for (id, i, j, w) in doc.edges {
        b = b.edge(id.into_text(), i.into_text(), j.into_text(), w);
    }
    for face in doc.faces.into_iter().flatten() {
        b = b.face(face.into_iter().map(Label::into_text));
    }
    for (label, [x, y]) in doc.coords.into_iter().flatten() {
        b = b.coord(label, x, y);
    }
    b.build()
}

pub(super) fn serialize(net: &Network) -> String {
    let faces = (net.face_origin() == FaceOrigin::Declared).then(|| {
        net.faces()
            .iter()
            .map(|f| {
                f.iter()
                    .map(|&n| Label::from_text(net.node_label(n)))
                    .collect()
            })
            .collect()
    });
    let doc = Document {
        name: net.name().map(str::to_string),
        nodes: net
            .nodes()
            .map(|n| Label::from_text(net.node_label(n)))
            .collect(),
        sources: net
            .sources()
            .iter()
            .map(|&s| Label::from_text(net.node_label(s)))
            .collect(),
        edges: net
            .edges()
            .iter()
            .map(|e| {
                (
                    Label::from_text(&e.label),
                    Label::from_text(net.node_label(e.ends[0])),
                    Label::from_text(net.node_label(e.ends[1])),
                    e.demand.as_lps(),
                )
            })
            .collect(),
        faces,
        coords: net.coords().map(|xy| {
            net.nodes()
                .map(|n| (net.node_label(n).to_string(), xy[n.index()]))
                .collect()
        }),
    };
    serde_json::to_string_pretty(&doc).expect("documents always serialize")
}
