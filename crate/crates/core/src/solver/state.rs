//! Partial assignments of the valve slots and the propagators acting on them.

use crate::netmodel::{Demand, Network, NodeId, Placement, SlotId};

use super::bounds::{BoundSnapshot, SectorBoundState};
use super::stats::FixCounts;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum SlotValue {
    Undecided,
    Present,
    Absent,
}

impl SlotValue {
    pub fn flip(self) -> SlotValue {
        match self {
            SlotValue::Present => SlotValue::Absent,
            SlotValue::Absent => SlotValue::Present,
            SlotValue::Undecided => SlotValue::Undecided,
        }
    }
}

/// How the valve count constrains leaves.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BudgetMode {
    /// Exactly `budget` valves.
    Exact,
    /// At most `budget` valves; leaves are padded up to the budget before
    /// evaluation.
    AtMost,
}

/// Why a branch was cut.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Prune {
    /// A slot was asked to take both values.
    Conflict,
    /// The valve count cannot be met.
    Counter,
    /// A face would hold exactly one valve.
    Face,
    /// A sector's lower bound reached the incumbent.
    Bound,
}

/// Which propagators run.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Rules {
    pub faces: bool,
    pub lb_prune: bool,
    pub reduced_cost: bool,
}

/// Trailed partial assignment plus sector bounds.
pub struct SearchState<'n> {
    net: &'n Network,
    budget: usize,
    mode: BudgetMode,
    rules: Rules,
    faces: Vec<Vec<SlotId>>,
    slot_faces: Vec<Vec<u32>>,
    values: Vec<SlotValue>,
    n_present: usize,
    n_absent: usize,
    bounds: SectorBoundState,
    trail: Vec<SlotId>,
    frames: Vec<(usize, usize)>,
    queue: Vec<SlotId>,
    incumbent: Option<Demand>,
    pub fixings: FixCounts,
}

impl<'n> SearchState<'n> {
    pub fn new(net: &'n Network, budget: usize, mode: BudgetMode, rules: Rules) -> Self {
        let faces: Vec<Vec<SlotId>> = if rules.faces {
            net.faces().iter().map(|f| net.face_slots(f)).collect()
        } else {
            Vec::new()
        };
        let mut slot_faces = vec![Vec::new(); net.slot_count()];
        for (i, f) in faces.iter().enumerate() {
            for s in f {
                let list: &mut Vec<u32> = &mut slot_faces[s.index()];
                if !list.contains(&(i as u32)) {
                    list.push(i as u32);
                }
            }
        }
        SearchState {
            net,
            budget,
            mode,
            rules,
            faces,
            slot_faces,
            values: vec![SlotValue::Undecided; net.slot_count()],
            n_present: 0,
            n_absent: 0,
            bounds: SectorBoundState::new(net),
            trail: Vec::new(),
            frames: Vec::new(),
            queue: Vec::new(),
            incumbent: None,
            fixings: FixCounts::default(),
        }
    }

    pub fn network(&self) -> &'n Network {
        self.net
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn mode(&self) -> BudgetMode {
        self.mode
    }

    /// Strict upper bound on acceptable worst-case damage.
    pub fn set_incumbent(&mut self, ud: Option<Demand>) {
        self.incumbent = ud;
    }

    pub fn incumbent(&self) -> Option<Demand> {
        self.incumbent
    }

    pub fn value(&self, slot: SlotId) -> SlotValue {
        self.values[slot.index()]
    }

    pub fn present_count(&self) -> usize {
        self.n_present
    }

    pub fn absent_count(&self) -> usize {
        self.n_absent
    }

    pub fn undecided_count(&self) -> usize {
        self.values.len() - self.n_present - self.n_absent
    }

    pub fn is_complete(&self) -> bool {
        self.undecided_count() == 0
    }

    pub fn undecided(&self) -> impl Iterator<Item = SlotId> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == SlotValue::Undecided)
            .map(|(i, _)| SlotId(i as u32))
    }

    pub fn bounds(&self) -> &SectorBoundState {
        &self.bounds
    }

    /// Lower bound of the class containing `node`.
    pub fn class_bound(&self, node: NodeId) -> Demand {
        self.bounds.lower_bound(node)
    }

    /// Present slots as a placement (undecided slots count as empty).
    pub fn placement(&self) -> Placement {
        Placement::from_mask(
            self.values
                .iter()
                .map(|&v| v == SlotValue::Present)
                .collect(),
        )
    }

    pub fn snapshot(&self) -> (Vec<SlotValue>, BoundSnapshot) {
        (self.values.clone(), self.bounds.snapshot())
    }

    pub fn push_frame(&mut self) {
        self.frames.push((self.trail.len(), self.bounds.mark()));
    }

    pub fn pop_frame(&mut self) {
        let (len, mark) = self.frames.pop().expect("unbalanced frames");
        while self.trail.len() > len {
            let s = self.trail.pop().unwrap();
            match self.values[s.index()] {
                SlotValue::Present => self.n_present -= 1,
                SlotValue::Absent => self.n_absent -= 1,
                SlotValue::Undecided => unreachable!(),
            }
            self.values[s.index()] = SlotValue::Undecided;
        }
        self.bounds.rollback(mark);
        self.queue.clear();
    }

    /// True when some class bound already reaches the incumbent.
    pub fn bound_exceeded(&self) -> bool {
        match self.incumbent {
            Some(ud) if self.rules.lb_prune => self.bounds.max_lower_bound() >= ud,
            _ => false,
        }
    }

    /// Assigns `slot` and propagates to a fixpoint.
    pub fn decide(&mut self, slot: SlotId, value: SlotValue) -> Result<(), Prune> {
        self.assign_all(&[(slot, value)])
    }

    /// Assigns several slots, then propagates.
    pub fn assign_all(&mut self, decisions: &[(SlotId, SlotValue)]) -> Result<(), Prune> {
        let res = decisions
            .iter()
            .try_for_each(|&(s, v)| self.assign(s, v))
            .and_then(|_| self.propagate());
        if res.is_err() {
            self.queue.clear();
        }
        res
    }

    fn assign(&mut self, slot: SlotId, value: SlotValue) -> Result<(), Prune> {
        debug_assert_ne!(value, SlotValue::Undecided);
        match self.values[slot.index()] {
            SlotValue::Undecided => {}
            v if v == value => return Ok(()),
            _ => return Err(Prune::Conflict),
        }
        self.values[slot.index()] = value;
        self.trail.push(slot);
        self.queue.push(slot);
        if value == SlotValue::Present {
            self.n_present += 1;
            if self.n_present > self.budget {
                return Err(Prune::Counter);
            }
        } else {
            self.n_absent += 1;
        }
        Ok(())
    }

    fn propagate(&mut self) -> Result<(), Prune> {
        loop {
            while let Some(slot) = self.queue.pop() {
                if self.values[slot.index()] == SlotValue::Absent {
                    let opposite_free = self.values[slot.opposite().index()] == SlotValue::Absent;
                    let root = self.bounds.open_slot(self.net, slot, opposite_free);
                    if self.rules.lb_prune {
                        if let Some(ud) = self.incumbent {
                            if self.bounds.lower_bound(root) >= ud {
                                return Err(Prune::Bound);
                            }
                        }
                    }
                }
                for i in 0..self.slot_faces[slot.index()].len() {
                    let f = self.slot_faces[slot.index()][i] as usize;
                    self.propagate_face(f)?;
                }
            }

            if self.propagate_counter()? {
                continue;
            }
            if self.propagate_reduced_cost()? {
                continue;
            }
            return Ok(());
        }
    }

    /// A closed walk must not carry exactly one valve.
    fn propagate_face(&mut self, f: usize) -> Result<(), Prune> {
        let mut present = 0;
        let mut open = 0;
        let mut last_open = None;
        for &s in &self.faces[f] {
            match self.values[s.index()] {
                SlotValue::Present => present += 1,
                SlotValue::Undecided => {
                    open += 1;
                    last_open = Some(s);
                }
                SlotValue::Absent => {}
            }
        }
        match (open, present) {
            (0, 1) => Err(Prune::Face),
            (1, 0) => {
                self.fixings.face += 1;
                self.assign(last_open.unwrap(), SlotValue::Absent)
            }
            (1, 1) => {
                self.fixings.face += 1;
                self.assign(last_open.unwrap(), SlotValue::Present)
            }
            _ => Ok(()),
        }
    }

    /// Returns true when it assigned something.
    fn propagate_counter(&mut self) -> Result<bool, Prune> {
        let open = self.undecided_count();
        if open == 0 {
            return Ok(false);
        }
        let fill = if self.n_present == self.budget {
            SlotValue::Absent
        } else if self.mode == BudgetMode::Exact {
            if self.n_present + open < self.budget {
                return Err(Prune::Counter);
            }
            if self.n_present + open > self.budget {
                return Ok(false);
            }
            SlotValue::Present
        } else {
            return Ok(false);
        };
        let slots: Vec<SlotId> = self.undecided().collect();
        self.fixings.counter += slots.len() as u64;
        for s in slots {
            self.assign(s, fill)?;
        }
        Ok(true)
    }

    /// Forces a valve wherever leaving the slot empty would grow a sector
    /// up to the incumbent. Returns true when it assigned something.
    fn propagate_reduced_cost(&mut self) -> Result<bool, Prune> {
        let ud = match self.incumbent {
            Some(ud) if self.rules.reduced_cost => ud,
            _ => return Ok(false),
        };
        let mut forced = Vec::new();
        for s in self.undecided() {
            let e = s.edge();
            let here = self.bounds.find(self.net.slot_node(s));
            let joined = if !self.bounds.is_attached(e) {
                self.bounds.lower_bound(here) + self.net.demand(e)
            } else {
                let there = self.bounds.find(self.net.slot_node(s.opposite()));
                if there == here {
                    self.bounds.lower_bound(here)
                } else {
                    self.bounds.lower_bound(here) + self.bounds.lower_bound(there)
                }
            };
            if joined >= ud {
                forced.push(s);
            }
        }
        if forced.is_empty() {
            return Ok(false);
        }
        self.fixings.reduced_cost += forced.len() as u64;
        for s in forced {
            self.assign(s, SlotValue::Present)?;
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netmodel::{fig1, fig2};

    const ALL: Rules = Rules {
        faces: true,
        lb_prune: true,
        reduced_cost: true,
    };
    const NONE: Rules = Rules {
        faces: false,
        lb_prune: false,
        reduced_cost: false,
    };

    fn slot(net: &Network, label: &str) -> SlotId {
        let (e, n) = label.split_once(':').unwrap();
        let e = net.edge_by_label(e).unwrap();
        net.slot_at(e, net.node_by_label(n).unwrap()).unwrap()
    }

    /// Face (1,2,5,6) of fig1 with one slot left open.
    fn face_slots_fig1(net: &Network) -> Vec<SlotId> {
        [
            "e12:1", "e12:2", "e25:2", "e25:5", "e56:5", "e56:6", "e16:6", "e16:1",
        ]
        .iter()
        .map(|l| slot(net, l))
        .collect()
    }

    #[test]
    fn face_with_one_open_slot_and_no_valve_forces_absent() {
        let net = fig1();
        let mut st = SearchState::new(&net, 14, BudgetMode::AtMost, ALL);
        let face = face_slots_fig1(&net);
        let decisions: Vec<_> = face[..7].iter().map(|&s| (s, SlotValue::Absent)).collect();
        st.assign_all(&decisions).unwrap();
        assert_eq!(st.value(face[7]), SlotValue::Absent);
    }

    #[test]
    fn face_with_one_valve_and_one_open_slot_forces_present() {
        let net = fig1();
        let mut st = SearchState::new(&net, 14, BudgetMode::AtMost, ALL);
        let face = face_slots_fig1(&net);
        let mut decisions: Vec<_> = face[1..7].iter().map(|&s| (s, SlotValue::Absent)).collect();
        decisions.push((face[0], SlotValue::Present));
        st.assign_all(&decisions).unwrap();
        assert_eq!(st.value(face[7]), SlotValue::Present);
    }

    #[test]
    fn face_forced_present_respects_budget() {
        let net = fig1();
        let mut st = SearchState::new(&net, 1, BudgetMode::AtMost, ALL);
        let face = face_slots_fig1(&net);
        let mut decisions: Vec<_> = face[1..7].iter().map(|&s| (s, SlotValue::Absent)).collect();
        decisions.push((face[0], SlotValue::Present));
        assert_eq!(st.assign_all(&decisions), Err(Prune::Counter));
    }

    #[test]
    fn face_with_exactly_one_valve_fails() {
        let net = fig1();
        let mut st = SearchState::new(&net, 14, BudgetMode::AtMost, ALL);
        let face = face_slots_fig1(&net);
        st.assign_all(
            &face[1..6]
                .iter()
                .map(|&s| (s, SlotValue::Absent))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        st.decide(face[0], SlotValue::Present).unwrap();
        assert_eq!(
            st.assign_all(&[(face[6], SlotValue::Absent), (face[7], SlotValue::Absent)]),
            Err(Prune::Face)
        );
    }

    #[test]
    fn face_with_two_valves_is_entailed() {
        let net = fig1();
        let mut st = SearchState::new(&net, 14, BudgetMode::AtMost, ALL);
        let face = face_slots_fig1(&net);
        st.decide(face[0], SlotValue::Present).unwrap();
        st.decide(face[3], SlotValue::Present).unwrap();
        let before = st.undecided_count();
        st.assign_all(
            &face[4..7]
                .iter()
                .map(|&s| (s, SlotValue::Absent))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(st.undecided_count(), before - 3);
    }

    #[test]
    fn class_bound_reaching_incumbent_prunes() {
        let net = fig1();
        let mut st = SearchState::new(&net, 6, BudgetMode::AtMost, ALL);
        st.set_incumbent(Some(Demand::from_lps(15)));
        // e25 is 15 l/s on its own
        assert_eq!(
            st.decide(slot(&net, "e25:2"), SlotValue::Absent),
            Err(Prune::Bound)
        );

        let mut st = SearchState::new(&net, 6, BudgetMode::AtMost, NONE);
        st.set_incumbent(Some(Demand::from_lps(15)));
        st.decide(slot(&net, "e25:2"), SlotValue::Absent).unwrap();
        st.decide(slot(&net, "e23:2"), SlotValue::Absent).unwrap();
        assert_eq!(
            st.class_bound(net.node_by_label("2").unwrap()),
            Demand::from_lps(18)
        );
    }

    #[test]
    fn reduced_cost_forces_separating_valve() {
        // unit demands: sector {e78, e67} costs 2; adding e28 would reach 3
        let net = fig2();
        let rules = Rules {
            faces: false,
            lb_prune: true,
            reduced_cost: true,
        };
        let mut st = SearchState::new(&net, 20, BudgetMode::AtMost, rules);
        st.set_incumbent(Some(Demand::from_lps(3)));
        let decisions: Vec<_> = ["e78:8", "e78:7", "e67:7", "e67:6"]
            .iter()
            .map(|l| (slot(&net, l), SlotValue::Absent))
            .collect();
        st.assign_all(&decisions).unwrap();
        assert_eq!(
            st.class_bound(net.node_by_label("8").unwrap()),
            Demand::from_lps(2)
        );
        assert_eq!(st.value(slot(&net, "e28:8")), SlotValue::Present);
        // the other exits of the sector are closed the same way
        assert_eq!(st.value(slot(&net, "e46:6")), SlotValue::Present);
        assert_eq!(st.value(slot(&net, "e56:6")), SlotValue::Present);
        assert_eq!(st.value(slot(&net, "e28:2")), SlotValue::Undecided);
    }

    #[test]
    fn exact_counter_fills_and_fails() {
        let net = fig1();
        let mut st = SearchState::new(&net, 13, BudgetMode::Exact, NONE);
        st.decide(SlotId(0), SlotValue::Absent).unwrap();
        assert!(st.is_complete());
        assert_eq!(st.present_count(), 13);

        let mut st = SearchState::new(&net, 13, BudgetMode::Exact, NONE);
        st.push_frame();
        assert_eq!(
            st.assign_all(&[
                (SlotId(0), SlotValue::Absent),
                (SlotId(1), SlotValue::Absent)
            ]),
            Err(Prune::Counter)
        );
        st.pop_frame();
        assert_eq!(st.undecided_count(), 14);
    }

    #[test]
    fn at_most_counter_closes_remaining_slots() {
        let net = fig1();
        let mut st = SearchState::new(&net, 1, BudgetMode::AtMost, NONE);
        st.decide(SlotId(3), SlotValue::Present).unwrap();
        assert!(st.is_complete());
        assert_eq!(st.absent_count(), 13);
        assert_eq!(st.bounds().max_lower_bound(), Demand::from_lps(47));
    }

    #[test]
    fn frames_restore_state() {
        let net = fig2();
        let mut st = SearchState::new(&net, 6, BudgetMode::AtMost, ALL);
        st.set_incumbent(Some(Demand::from_lps(4)));
        let before = st.snapshot();
        st.push_frame();
        let _ = st.decide(SlotId(4), SlotValue::Absent);
        let _ = st.decide(SlotId(6), SlotValue::Absent);
        st.pop_frame();
        assert_eq!(st.snapshot(), before);
    }
}
