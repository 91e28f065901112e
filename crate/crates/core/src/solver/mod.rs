//! Minimax branch and bound.
//!
//! The search assigns every valve slot present or absent. Complete
//! assignments are scored exactly by [`crate::isolation`]; partial ones are
//! cut by three families of rules:
//!
//! - structural: no plane face may carry exactly one valve, and of the two
//!   slots meeting at a pass-through node only one is kept;
//! - bounding: a class of nodes already known to share a sector has a
//!   demand lower bound, and a branch dies once that reaches the incumbent;
//! - reduced cost: a slot whose emptiness would push a bound to the
//!   incumbent gets a valve.
//!
//! The structural rules only discard placements that contain redundant
//! valves. Adding a valve never makes the worst case worse, so when either
//! of them is on the search ranges over placements with at most `N_v`
//! valves and pads each leaf up to `N_v` before scoring it.

mod bounds;
mod branch;
mod search;
mod state;
mod stats;

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::isolation::Evaluator;
use crate::netmodel::{Demand, EdgeId, Network, Placement, SlotId};

pub use bounds::{BoundSnapshot, SectorBoundState};
pub use branch::{BranchHeuristic, Brancher};
pub use state::{BudgetMode, Prune, Rules, SearchState, SlotValue};
pub use stats::{anytime_csv, AnytimeEntry, FixCounts, PruneCounts, SearchStats};

use search::{Flow, Search};

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RestartMode {
    /// Keep exploring after each new incumbent, with the tighter bound.
    #[default]
    Continuing,
    /// Go back to the root after each new incumbent.
    Restarting,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolverOptions {
    pub face_constraints: bool,
    pub symmetry: bool,
    pub lb_prune: bool,
    pub reduced_cost: bool,
    /// Put a valve on every slot at a source node from the start. Every
    /// feasible placement has them.
    pub source_valves: bool,
    pub restart_mode: RestartMode,
    pub branch_heuristic: BranchHeuristic,
    /// Try `present` before `absent`.
    pub present_first: bool,
    #[serde(skip)]
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            face_constraints: true,
            symmetry: true,
            lb_prune: true,
            reduced_cost: true,
            source_valves: true,
            restart_mode: RestartMode::Continuing,
            branch_heuristic: BranchHeuristic::LargestSector,
            present_first: true,
            time_limit: None,
            node_limit: None,
            seed: 0,
        }
    }
}

impl SolverOptions {
    /// Plain enumeration: only the valve counter is active.
    pub fn unpruned() -> Self {
        SolverOptions {
            face_constraints: false,
            symmetry: false,
            lb_prune: false,
            reduced_cost: false,
            source_valves: false,
            ..Self::default()
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProofStatus {
    Optimal,
    BestFound,
}

#[derive(Clone, Debug, Serialize)]
pub struct Solution {
    pub budget: usize,
    #[serde(skip)]
    pub placement: Placement,
    pub ud: Demand,
    /// Lowest-id pipe whose failure costs `ud`.
    pub argmax: EdgeId,
    pub status: ProofStatus,
    pub stats: SearchStats,
    pub anytime: Vec<AnytimeEntry>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("budget {budget} outside 1..={max}")]
    BudgetOutOfRange { budget: usize, max: usize },
    #[error("no placement of {budget} valves isolates every pipe (pipe index {witness} cannot be cut off from its source)", witness = .witness.0)]
    InfeasibleBudget { budget: usize, witness: EdgeId },
    #[error("limit reached before any feasible placement was found")]
    LimitReached,
    #[error("search finished without a feasible placement")]
    Exhausted,
}

/// Latest incumbent value, readable from other threads while a solve runs.
#[derive(Clone, Debug)]
pub struct IncumbentWatch(Arc<AtomicU64>);

impl IncumbentWatch {
    fn new() -> Self {
        IncumbentWatch(Arc::new(AtomicU64::new(u64::MAX)))
    }

    fn publish(&self, ud: Demand) {
        self.0.store(ud.millis(), Ordering::Release);
    }

    /// `None` until the first incumbent.
    pub fn get(&self) -> Option<Demand> {
        match self.0.load(Ordering::Acquire) {
            u64::MAX => None,
            m => Some(Demand::from_millis(m)),
        }
    }
}

/// Adds valves to `p` until it holds `budget`: first at source nodes, then
/// on the lowest free slots.
pub fn pad(net: &Network, p: &mut Placement, budget: usize) {
    search::pad(p, net.source_slots(), budget);
}

/// Slots forced absent at pass-through nodes: at every non-source node with
/// exactly two pipes, the slot on the higher-id pipe.
pub fn preprocess(net: &Network) -> Vec<(SlotId, SlotValue)> {
    net.nodes()
        .filter(|&v| !net.is_source(v) && net.degree(v) == 2)
        .filter_map(|v| {
            let inc = net.incident(v);
            let hi = inc[0].max(inc[1]);
            net.slot_at(hi, v).map(|s| (s, SlotValue::Absent))
        })
        .collect()
}

pub struct Solver<'n> {
    net: &'n Network,
    budget: usize,
    opts: SolverOptions,
    initial: Option<Placement>,
    watch: Option<IncumbentWatch>,
}

impl<'n> Solver<'n> {
    pub fn new(net: &'n Network, budget: usize, opts: &SolverOptions) -> Self {
        Solver {
            net,
            budget,
            opts: opts.clone(),
            initial: None,
            watch: None,
        }
    }

    /// Seeds the incumbent with a known placement of `budget` valves.
    /// Ignored if it has another valve count or is infeasible.
    pub fn with_initial_incumbent(mut self, p: Placement) -> Self {
        self.initial = Some(p);
        self
    }

    /// Handle for polling the incumbent during [`Solver::run`].
    pub fn watch(&mut self) -> IncumbentWatch {
        self.watch.get_or_insert_with(IncumbentWatch::new).clone()
    }

    pub fn budget_mode(&self) -> BudgetMode {
        let faces = self.opts.face_constraints && !self.net.faces().is_empty();
        if faces || self.opts.symmetry {
            BudgetMode::AtMost
        } else {
            BudgetMode::Exact
        }
    }

    pub fn run(self) -> Result<Solution, SolveError> {
        let net = self.net;
        let opts = &self.opts;
        let max = net.slot_count();
        if self.budget == 0 || self.budget > max {
            return Err(SolveError::BudgetOutOfRange {
                budget: self.budget,
                max,
            });
        }
        let source_slots = net.source_slots();
        if self.budget < source_slots.len() {
            return Err(SolveError::InfeasibleBudget {
                budget: self.budget,
                witness: source_slots.iter().map(|s| s.edge()).min().unwrap(),
            });
        }

        let rules = Rules {
            faces: opts.face_constraints,
            lb_prune: opts.lb_prune,
            reduced_cost: opts.reduced_cost,
        };
        let mode = self.budget_mode();
        let mut search = Search {
            state: SearchState::new(net, self.budget, mode, rules),
            brancher: Brancher::new(opts.branch_heuristic, opts.present_first, max, opts.seed),
            evaluator: Evaluator::new(net),
            best: None,
            stats: SearchStats::default(),
            anytime: Vec::new(),
            start: Instant::now(),
            time_limit: opts.time_limit,
            node_limit: opts.node_limit,
            restart: opts.restart_mode == RestartMode::Restarting,
            watch: self.watch.clone(),
        };

        if let Some(p) = self.initial {
            if p.count() == self.budget && p.slot_count() == max {
                let worst = search.evaluator.worst_case_ud(&p);
                search.offer(p, worst);
            }
        }

        let mut root = Vec::new();
        if opts.symmetry {
            root.extend(preprocess(net));
            search.state.fixings.symmetry = root.len() as u64;
        }
        if opts.source_valves {
            root.extend(source_slots.iter().map(|&s| (s, SlotValue::Present)));
            search.state.fixings.source = source_slots.len() as u64;
        }

        let flow = loop {
            match search.run_from_root(&root) {
                Flow::Restart => search.stats.restarts += 1,
                other => break other,
            }
        };

        let mut stats = search.stats;
        stats.fixings = search.state.fixings.clone();
        stats.elapsed = search.start.elapsed();
        let status = match flow {
            Flow::Limit => ProofStatus::BestFound,
            _ => ProofStatus::Optimal,
        };
        match search.best {
            Some(best) => Ok(Solution {
                budget: self.budget,
                ud: best.ud(),
                argmax: best.worst.edge,
                placement: best.placement,
                status,
                stats,
                anytime: search.anytime,
            }),
            None if status == ProofStatus::BestFound => Err(SolveError::LimitReached),
            None => Err(SolveError::Exhausted),
        }
    }
}

/// Optimal placement of `budget` valves.
pub fn solve(net: &Network, budget: usize, opts: &SolverOptions) -> Result<Solution, SolveError> {
    Solver::new(net, budget, opts).run()
}
