use std::fmt::Write;
use std::time::Duration;

use serde::Serialize;

use crate::netmodel::Demand;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PruneCounts {
    pub face: u64,
    pub bound: u64,
    pub counter: u64,
    pub conflict: u64,
}

/// Slots decided by propagation rather than branching.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FixCounts {
    pub symmetry: u64,
    pub source: u64,
    pub face: u64,
    pub reduced_cost: u64,
    pub counter: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
    pub infeasible_leaves: u64,
    pub incumbents: u64,
    pub restarts: u64,
    pub prunes: PruneCounts,
    pub fixings: FixCounts,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Incumbent value at the moment it was found.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnytimeEntry {
    #[serde(serialize_with = "as_millis")]
    pub elapsed: Duration,
    pub ud: Demand,
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1000.0)
}

/// `elapsed_ms,incumbent_ud` lines with a header.
pub fn anytime_csv(log: &[AnytimeEntry]) -> String {
    let mut out = String::from("elapsed_ms,incumbent_ud\n");
    for e in log {
        let _ = writeln!(out, "{:.3},{}", e.elapsed.as_secs_f64() * 1000.0, e.ud);
    }
    out
}
