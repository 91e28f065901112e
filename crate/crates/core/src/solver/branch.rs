//! Variable and value ordering.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::netmodel::{Demand, SlotId};

use super::state::{SearchState, SlotValue};

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchHeuristic {
    /// Slot next to the class with the largest bound; ties go to the
    /// heaviest pipe, then the lowest slot index.
    #[default]
    LargestSector,
    /// Lowest undecided slot index.
    Lex,
    /// Slot on the heaviest pipe, lowest index first.
    HeaviestEdge,
    /// Fixed pseudo-random slot order drawn from the seed.
    Random,
}

impl FromStr for BranchHeuristic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "largest-sector" => Ok(Self::LargestSector),
            "lex" => Ok(Self::Lex),
            "heaviest-edge" => Ok(Self::HeaviestEdge),
            "random" => Ok(Self::Random),
            other => Err(format!(
                "unknown heuristic `{other}` (largest-sector, lex, heaviest-edge, random)"
            )),
        }
    }
}

pub struct Brancher {
    heuristic: BranchHeuristic,
    first: SlotValue,
    rank: Vec<u32>,
}

impl Brancher {
    pub fn new(heuristic: BranchHeuristic, present_first: bool, slots: usize, seed: u64) -> Self {
        let mut order: Vec<u32> = (0..slots as u32).collect();
        if heuristic == BranchHeuristic::Random {
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
        let mut rank = vec![0; slots];
        for (r, &s) in order.iter().enumerate() {
            rank[s as usize] = r as u32;
        }
        Brancher {
            heuristic,
            first: if present_first {
                SlotValue::Present
            } else {
                SlotValue::Absent
            },
            rank,
        }
    }

    /// Next slot to branch on and the value to try first; `None` at leaves.
    pub fn choose(&self, state: &SearchState<'_>) -> Option<(SlotId, SlotValue)> {
        let net = state.network();
        let slot = match self.heuristic {
            BranchHeuristic::Lex => state.undecided().next(),
            BranchHeuristic::Random => state.undecided().min_by_key(|s| self.rank[s.index()]),
            BranchHeuristic::HeaviestEdge => {
                best_by(state.undecided(), |s| (Demand::ZERO, net.demand(s.edge())))
            }
            BranchHeuristic::LargestSector => best_by(state.undecided(), |s| {
                (state.class_bound(net.slot_node(s)), net.demand(s.edge()))
            }),
        }?;
        Some((slot, self.first))
    }
}

/// Maximum key, lowest slot index among ties.
fn best_by(
    slots: impl Iterator<Item = SlotId>,
    key: impl Fn(SlotId) -> (Demand, Demand),
) -> Option<SlotId> {
    let mut best: Option<(SlotId, (Demand, Demand))> = None;
    for s in slots {
        let k = key(s);
        if best.is_none_or(|(_, bk)| k > bk) {
            best = Some((s, k));
        }
    }
    best.map(|(s, _)| s)
}
