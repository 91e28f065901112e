//! Exhaustive enumeration of placements, for checking the solver on small
//! networks.

use serde::Serialize;

use crate::isolation::{Evaluator, WorstCase};
use crate::netmodel::{Demand, Network, Placement, SlotId};

pub const DEFAULT_CAP: u64 = 5_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub budget: usize,
    pub ud: Demand,
    /// Every placement attaining `ud`, in enumeration order.
    #[serde(skip)]
    pub optimal: Vec<Placement>,
    /// Number of placements evaluated.
    pub count: u64,
    #[serde(skip)]
    pub table: Option<Vec<(Placement, WorstCase)>>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{count} placements exceed the cap of {cap}")]
    CapExceeded { count: u64, cap: u64 },
    #[error("budget {budget} outside 0..={max}")]
    BudgetOutOfRange { budget: usize, max: usize },
    #[error("none of the {count} placements of {budget} valves isolates every pipe")]
    AllInfeasible { budget: usize, count: u64 },
}

/// `n choose k`, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Lexicographic `k`-subsets of `0..n`.
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    started: bool,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            started: false,
            done: k > n,
        }
    }

    /// Advances and returns the next subset.
    pub fn next_subset(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.idx);
        }
        let k = self.idx.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some(&self.idx);
            }
        }
        self.done = true;
        None
    }
}

pub fn brute_force(net: &Network, budget: usize, cap: u64) -> Result<OracleResult, OracleError> {
    run(net, budget, cap, false)
}

/// Like [`brute_force`], also keeping every evaluation.
pub fn brute_force_table(
    net: &Network,
    budget: usize,
    cap: u64,
) -> Result<OracleResult, OracleError> {
    run(net, budget, cap, true)
}

fn run(net: &Network, budget: usize, cap: u64, keep: bool) -> Result<OracleResult, OracleError> {
    let slots = net.slot_count();
    if budget > slots {
        return Err(OracleError::BudgetOutOfRange { budget, max: slots });
    }
    let total = binomial(slots as u64, budget as u64);
    if total > cap {
        return Err(OracleError::CapExceeded { count: total, cap });
    }
    let mut eval = Evaluator::new(net);
    let mut combos = Combinations::new(slots, budget);
    let mut best = Demand::INFINITE;
    let mut optimal = Vec::new();
    let mut table = keep.then(Vec::new);
    let mut count = 0;
    while let Some(subset) = combos.next_subset() {
        count += 1;
        let p = Placement::from_slots(net, subset.iter().map(|&i| SlotId(i as u32)));
        let w = eval.worst_case_ud(&p);
        if w.feasible {
            if w.ud < best {
                best = w.ud;
                optimal.clear();
            }
            if w.ud == best {
                optimal.push(p.clone());
            }
        }
        if let Some(t) = table.as_mut() {
            t.push((p, w));
        }
    }
    if optimal.is_empty() {
        return Err(OracleError::AllInfeasible { budget, count });
    }
    Ok(OracleResult {
        budget,
        ud: best,
        optimal,
        count,
        table,
    })
}

/// True when no face of `net` carries exactly one valve of `p`.
pub fn respects_faces(net: &Network, p: &Placement) -> bool {
    net.faces().iter().all(|f| {
        net.face_slots(f)
            .iter()
            .filter(|&&s| p.has_valve(s))
            .count()
            != 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isolation::worst_case_ud;
    use crate::netmodel::fig1;

    #[test]
    fn binomials() {
        assert_eq!(binomial(14, 6), 3003);
        assert_eq!(binomial(14, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(66, 13), 20_448_884_000_160);
        assert_eq!(binomial(200, 100), u64::MAX);
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut c = Combinations::new(4, 2);
        let mut all = Vec::new();
        while let Some(s) = c.next_subset() {
            all.push(s.to_vec());
        }
        assert_eq!(
            all,
            [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]].map(|a| a.to_vec())
        );
        let mut empty = Combinations::new(3, 0);
        assert_eq!(empty.next_subset(), Some(&[][..]));
        assert_eq!(empty.next_subset(), None);
    }

    #[test]
    fn fig1_six_valves() {
        let net = fig1();
        let r = brute_force(&net, 6, DEFAULT_CAP).unwrap();
        assert_eq!(r.count, 3003);
        for p in &r.optimal {
            assert_eq!(worst_case_ud(&net, p).ud, r.ud);
        }
        let paper = Placement::parse(&net, "e12:1 e23:2 e23:3 e45:5 e56:5 e16:1").unwrap();
        assert!(r.ud <= worst_case_ud(&net, &paper).ud);
    }

    #[test]
    fn triangle_all_slots() {
        let net = Network::builder()
            .nodes([1, 2, 3])
            .source(1)
            .edge("a", 1, 2, 4.0)
            .edge("b", 2, 3, 2.0)
            .edge("c", 3, 1, 3.0)
            .build()
            .unwrap();
        let r = brute_force_table(&net, 6, DEFAULT_CAP).unwrap();
        assert_eq!(r.count, 1);
        // every pipe is its own sector; only the broken pipe is lost
        assert_eq!(r.ud, Demand::from_lps(4));
        assert_eq!(r.table.unwrap().len(), 1);
        assert_eq!(
            brute_force(&net, 1, DEFAULT_CAP).unwrap_err(),
            OracleError::AllInfeasible {
                budget: 1,
                count: 6
            }
        );
    }

    #[test]
    fn cap() {
        let net = fig1();
        assert_eq!(
            brute_force(&net, 7, 3000).unwrap_err(),
            OracleError::CapExceeded {
                count: 3432,
                cap: 3000
            }
        );
    }
}
