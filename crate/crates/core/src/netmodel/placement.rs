use thiserror::Error;

use super::{Network, SlotId};

#[derive(Debug, Error, PartialEq)]
pub enum PlacementError {
    #[error("malformed valve token `{0}` (expected edge:node)")]
    Malformed(String),
    #[error("unknown pipe `{0}`")]
    UnknownEdge(String),
    #[error("node `{node}` is not an endpoint of pipe `{edge}`")]
    NotEndpoint { edge: String, node: String },
    #[error("valve `{0}` listed twice")]
    Duplicate(String),
}

/// A complete valuation of the valve slots: `true` where a valve sits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Placement {
    valves: Vec<bool>,
}

impl Placement {
    pub fn empty(net: &Network) -> Self {
        Placement {
            valves: vec![false; net.slot_count()],
        }
    }

    /// Valves on every slot.
    pub fn full(net: &Network) -> Self {
        Placement {
            valves: vec![true; net.slot_count()],
        }
    }

    pub fn from_slots(net: &Network, slots: impl IntoIterator<Item = SlotId>) -> Self {
        let mut p = Self::empty(net);
        for s in slots {
            p.valves[s.index()] = true;
        }
        p
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        Placement { valves: mask }
    }

    pub fn has_valve(&self, slot: SlotId) -> bool {
        self.valves[slot.index()]
    }

    pub fn set(&mut self, slot: SlotId, valve: bool) {
        self.valves[slot.index()] = valve;
    }

    pub fn count(&self) -> usize {
        self.valves.iter().filter(|&&v| v).count()
    }

    pub fn slot_count(&self) -> usize {
        self.valves.len()
    }

    pub fn slots(&self) -> impl Iterator<Item = SlotId> + '_ {
        self.valves
            .iter()
            .enumerate()
            .filter(|(_, &v)| v)
            .map(|(i, _)| SlotId(i as u32))
    }

    pub fn as_mask(&self) -> &[bool] {
        &self.valves
    }

    /// Parses whitespace-separated `edge:node` tokens. `#` starts a comment.
    pub fn parse(net: &Network, text: &str) -> Result<Self, PlacementError> {
        let mut p = Self::empty(net);
        let tokens = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace);
        for tok in tokens {
            let (edge, node) = tok
                .rsplit_once(':')
                .ok_or_else(|| PlacementError::Malformed(tok.to_string()))?;
            let e = net
                .edge_by_label(edge)
                .ok_or_else(|| PlacementError::UnknownEdge(edge.to_string()))?;
            let slot = net
                .node_by_label(node)
                .and_then(|n| net.slot_at(e, n))
                .ok_or_else(|| PlacementError::NotEndpoint {
                    edge: edge.to_string(),
                    node: node.to_string(),
                })?;
            if p.has_valve(slot) {
                return Err(PlacementError::Duplicate(tok.to_string()));
            }
            p.set(slot, true);
        }
        Ok(p)
    }

    /// One `edge:node` token per line, in slot order.
    pub fn to_text(&self, net: &Network) -> String {
        let mut out = String::new();
        for s in self.slots() {
            out.push_str(&net.slot_label(s));
            out.push('\n');
        }
        out
    }

    pub fn labels(&self, net: &Network) -> Vec<String> {
        self.slots().map(|s| net.slot_label(s)).collect()
    }
}
