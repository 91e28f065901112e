//! Valve count against worst-case damage, one exact solve per count.

use std::ops::RangeInclusive;
use std::time::Duration;

use serde::Serialize;

use crate::netmodel::{Demand, Network, Placement};
use crate::solver::{self, ProofStatus, SolveError, Solver, SolverOptions};

#[derive(Clone, Debug, Serialize)]
pub struct ParetoPoint {
    pub nv: usize,
    pub ud: Demand,
    #[serde(skip)]
    pub placement: Placement,
    pub status: ProofStatus,
    pub nodes: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Sweep {
    /// Every solved count, in increasing order.
    pub points: Vec<ParetoPoint>,
    /// Non-dominated subset of `points`.
    pub frontier: Vec<ParetoPoint>,
    pub notes: Vec<String>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SweepError {
    #[error("valve range {lo}..={hi} is empty or outside 1..={max}")]
    BadRange { lo: usize, hi: usize, max: usize },
    #[error("{nv} valves: {source}")]
    Solve { nv: usize, source: SolveError },
}

/// `a` dominates `b`: no worse in both counts and better in one.
pub fn dominates(a: &ParetoPoint, b: &ParetoPoint) -> bool {
    a.nv <= b.nv && a.ud <= b.ud && (a.nv < b.nv || a.ud < b.ud)
}

pub fn frontier(points: &[ParetoPoint]) -> Vec<ParetoPoint> {
    points
        .iter()
        .filter(|p| !points.iter().any(|q| dominates(q, p)))
        .cloned()
        .collect()
}

pub fn sweep(
    net: &Network,
    range: RangeInclusive<usize>,
    opts: &SolverOptions,
) -> Result<Sweep, SweepError> {
    let (lo, hi) = (*range.start(), *range.end());
    let max = net.slot_count();
    if lo == 0 || lo > hi || hi > max {
        return Err(SweepError::BadRange { lo, hi, max });
    }
    let mut out = Sweep::default();
    let mut prev: Option<ParetoPoint> = None;
    for nv in range {
        let mut solver = Solver::new(net, nv, opts);
        if let Some(p) = &prev {
            let mut warm = p.placement.clone();
            solver::pad(net, &mut warm, nv);
            solver = solver.with_initial_incumbent(warm);
        }
        let sol = match solver.run() {
            Ok(s) => s,
            Err(SolveError::InfeasibleBudget { .. }) => {
                out.notes
                    .push(format!("{nv} valves: no feasible placement, omitted"));
                continue;
            }
            Err(source) => return Err(SweepError::Solve { nv, source }),
        };
        let point = ParetoPoint {
            nv,
            ud: sol.ud,
            placement: sol.placement,
            status: sol.status,
            nodes: sol.stats.nodes,
            elapsed: sol.stats.elapsed,
        };
        if let Some(p) = &prev {
            if point.ud > p.ud {
                let msg = format!(
                    "worst case rises from {} to {} going from {} to {} valves",
                    p.ud, point.ud, p.nv, nv
                );
                log::warn!("{msg}");
                out.notes.push(msg);
            }
        }
        prev = Some(point.clone());
        out.points.push(point);
    }
    out.frontier = frontier(&out.points);
    Ok(out)
}

/// `nv,ud,proof,elapsed_ms` for the frontier points.
pub fn frontier_csv(sweep: &Sweep) -> String {
    let mut out = String::from("nv,ud,proof,elapsed_ms\n");
    for p in &sweep.frontier {
        let proof = match p.status {
            ProofStatus::Optimal => "optimal",
            ProofStatus::BestFound => "best-found",
        };
        out.push_str(&format!(
            "{},{},{},{:.3}\n",
            p.nv,
            p.ud,
            proof,
            p.elapsed.as_secs_f64() * 1000.0
        ));
    }
    out
}
