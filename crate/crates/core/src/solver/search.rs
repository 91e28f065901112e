//! Depth-first branch and bound over the slot assignment.

use std::time::{Duration, Instant};

use crate::isolation::{Evaluator, WorstCase};
use crate::netmodel::{Demand, Placement, SlotId};

use super::branch::Brancher;
use super::state::{BudgetMode, Prune, SearchState, SlotValue};
use super::stats::{AnytimeEntry, SearchStats};
use super::IncumbentWatch;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(super) enum Flow {
    Done,
    Limit,
    Restart,
}

pub(super) struct Incumbent {
    pub placement: Placement,
    pub worst: WorstCase,
}

pub(super) struct Search<'n> {
    pub state: SearchState<'n>,
    pub brancher: Brancher,
    pub evaluator: Evaluator<'n>,
    pub best: Option<Incumbent>,
    pub stats: SearchStats,
    pub anytime: Vec<AnytimeEntry>,
    pub start: Instant,
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    pub restart: bool,
    pub watch: Option<IncumbentWatch>,
}

impl<'n> Search<'n> {
    fn out_of_budget(&self) -> bool {
        if self.node_limit.is_some_and(|n| self.stats.nodes > n) {
            return true;
        }
        match self.time_limit {
            Some(t) if self.stats.nodes.is_multiple_of(128) => self.start.elapsed() >= t,
            _ => false,
        }
    }

    fn count_prune(&mut self, p: Prune) {
        let c = &mut self.stats.prunes;
        match p {
            Prune::Conflict => c.conflict += 1,
            Prune::Counter => c.counter += 1,
            Prune::Face => c.face += 1,
            Prune::Bound => c.bound += 1,
        }
    }

    /// Applies root decisions under a fresh frame and explores. The frame
    /// is popped before returning.
    pub fn run_from_root(&mut self, root: &[(SlotId, SlotValue)]) -> Flow {
        self.state.push_frame();
        let flow = match self.state.assign_all(root) {
            Ok(()) => self.dfs(),
            Err(p) => {
                self.count_prune(p);
                Flow::Done
            }
        };
        self.state.pop_frame();
        flow
    }

    fn dfs(&mut self) -> Flow {
        self.stats.nodes += 1;
        if self.out_of_budget() {
            return Flow::Limit;
        }
        if self.state.bound_exceeded() {
            self.stats.prunes.bound += 1;
            return Flow::Done;
        }
        let Some((slot, first)) = self.brancher.choose(&self.state) else {
            return if self.leaf() && self.restart {
                Flow::Restart
            } else {
                Flow::Done
            };
        };
        for value in [first, first.flip()] {
            self.state.push_frame();
            let flow = match self.state.decide(slot, value) {
                Ok(()) => self.dfs(),
                Err(p) => {
                    self.count_prune(p);
                    Flow::Done
                }
            };
            self.state.pop_frame();
            if flow != Flow::Done {
                return flow;
            }
        }
        Flow::Done
    }

    /// Evaluates a complete assignment. Returns true on a new incumbent.
    fn leaf(&mut self) -> bool {
        self.stats.leaves += 1;
        let mut p = self.state.placement();
        if self.state.mode() == BudgetMode::AtMost {
            pad(
                &mut p,
                self.state.network().source_slots(),
                self.state.budget(),
            );
        }
        let worst = self.evaluator.worst_case_ud(&p);
        if !worst.feasible {
            self.stats.infeasible_leaves += 1;
            return false;
        }
        self.offer(p, worst)
    }

    /// Installs `worst` as incumbent if it strictly improves.
    pub fn offer(&mut self, placement: Placement, worst: WorstCase) -> bool {
        if !worst.feasible || self.best.as_ref().is_some_and(|b| worst.ud >= b.worst.ud) {
            return false;
        }
        self.stats.incumbents += 1;
        self.anytime.push(AnytimeEntry {
            elapsed: self.start.elapsed(),
            ud: worst.ud,
        });
        if let Some(w) = &self.watch {
            w.publish(worst.ud);
        }
        self.state.set_incumbent(Some(worst.ud));
        log::debug!("incumbent {} after {} nodes", worst.ud, self.stats.nodes);
        self.best = Some(Incumbent { placement, worst });
        true
    }
}

/// Adds valves up to `budget`: source slots first, then the lowest free
/// slots.
pub(super) fn pad(p: &mut Placement, source_slots: Vec<SlotId>, budget: usize) {
    let rest = (0..p.slot_count() as u32).map(SlotId);
    for s in source_slots.into_iter().chain(rest) {
        if p.count() >= budget {
            break;
        }
        if !p.has_valve(s) {
            p.set(s, true);
        }
    }
}

impl Incumbent {
    pub fn ud(&self) -> Demand {
        self.worst.ud
    }
}
