use std::collections::BTreeSet;

use super::{Fsa, LabelId, Labeling, StateId};

impl Fsa {
    /// States reachable from `from` through events invisible under `labeling`.
    pub fn epsilon_closure(&self, labeling: &Labeling, from: &BTreeSet<StateId>) -> BTreeSet<StateId> {
        let mut closed = from.clone();
        let mut stack: Vec<StateId> = from.iter().copied().collect();
        while let Some(x) = stack.pop() {
            for &(e, y) in self.successors(x) {
                if !labeling.is_visible(e) && closed.insert(y) {
                    stack.push(y);
                }
            }
        }
        closed
    }

    /// One observation step followed by closure.
    pub fn observe(&self, labeling: &Labeling, from: &BTreeSet<StateId>, output: LabelId) -> BTreeSet<StateId> {
        let mut next = BTreeSet::new();
        for &x in from {
            for &(e, y) in self.successors(x) {
                if labeling.label(e) == Some(output) {
                    next.insert(y);
                }
            }
        }
        self.epsilon_closure(labeling, &next)
    }

    /// Current-state estimate `M(S, σ)` under `labeling`.
    pub fn current_state_estimate(&self, labeling: &Labeling, sigma: &[LabelId]) -> BTreeSet<StateId> {
        let init: BTreeSet<StateId> = self.initial().iter().copied().collect();
        let mut current = self.epsilon_closure(labeling, &init);
        for &o in sigma {
            if current.is_empty() {
                break;
            }
            current = self.observe(labeling, &current, o);
        }
        current
    }

    /// Estimate for an observation given by label names; unknown labels give `∅`.
    pub fn estimate_by_names(&self, labeling: &Labeling, sigma: &[&str]) -> BTreeSet<StateId> {
        let ids: Option<Vec<LabelId>> = sigma.iter().map(|s| self.label_id(s)).collect();
        match ids {
            Some(ids) => self.current_state_estimate(labeling, &ids),
            None => BTreeSet::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn names(s: &Fsa, xs: &BTreeSet<StateId>) -> Vec<String> {
        s.state_names(xs.iter().copied())
    }

    #[test]
    fn branching_estimates() {
        let inst = catalog::branching();
        let s = &inst.fsa;
        let obs = inst.observers().unwrap();
        let o1 = obs.labeling(s, 1).unwrap();
        let o2 = obs.labeling(s, 2).unwrap();
        assert_eq!(names(s, &s.estimate_by_names(&o2, &["a"])), ["x1", "x2", "x3", "x4"]);
        assert_eq!(names(s, &s.estimate_by_names(&o1, &["a", "b"])), ["x1", "x2"]);
        assert_eq!(names(s, &s.estimate_by_names(&o1, &[])), ["x0"]);
    }

    #[test]
    fn empty_observation_is_closure_of_initial() {
        let s = catalog::late_fault().fsa;
        let lab = Labeling::global(&s);
        assert_eq!(names(&s, &s.estimate_by_names(&lab, &[])), ["x0"]);
        let ab = s.estimate_by_names(&lab, &["a", "b"]);
        assert_eq!(names(&s, &ab), ["x3", "x4", "x5"]);
    }

    #[test]
    fn unobservable_output_gives_empty() {
        let s = catalog::branching().fsa;
        let lab = Labeling::global(&s);
        assert!(s.estimate_by_names(&lab, &["d"]).is_empty());
        assert!(s.estimate_by_names(&lab, &["nope"]).is_empty());
    }
}
