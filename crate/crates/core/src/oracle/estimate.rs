use std::collections::{BTreeMap, BTreeSet};

use super::BudgetExceeded;
use crate::fsa::{Fsa, LabelId, Labeling, StateId};

/// Current-state estimates for every observation of length at most `bound`,
/// tabulated by enumerating runs.
///
/// Unobservable stretches are cut at `|X| - 1` steps; any longer stretch
/// revisits a state and can be shortened without changing its projection.
pub fn exhaustive_estimate(
    s: &Fsa,
    labeling: &Labeling,
    bound: usize,
    max_runs: usize,
) -> Result<BTreeMap<Vec<LabelId>, BTreeSet<StateId>>, BudgetExceeded> {
    let silent_cap = s.num_states().saturating_sub(1);
    let mut table: BTreeMap<Vec<LabelId>, BTreeSet<StateId>> = BTreeMap::new();
    // (state, observation so far, current unobservable stretch)
    let mut stack: Vec<(StateId, Vec<LabelId>, usize)> = s.initial().iter().map(|&x| (x, Vec::new(), 0)).collect();
    let mut runs = 0usize;
    while let Some((x, obs, silent)) = stack.pop() {
        runs += 1;
        if runs > max_runs {
            return Err(BudgetExceeded::Runs(max_runs));
        }
        table.entry(obs.clone()).or_default().insert(x);
        for &(e, y) in s.successors(x) {
            match labeling.label(e) {
                None if silent < silent_cap => stack.push((y, obs.clone(), silent + 1)),
                None => {}
                Some(l) if obs.len() < bound => {
                    let mut o = obs.clone();
                    o.push(l);
                    stack.push((y, o, 0));
                }
                Some(_) => {}
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn key(s: &Fsa, w: &[&str]) -> Vec<LabelId> {
        w.iter().map(|n| s.label_id(n).unwrap()).collect()
    }

    #[test]
    fn branching_tables() {
        let inst = catalog::branching();
        let s = &inst.fsa;
        let obs = inst.observers().unwrap();
        let o2 = obs.labeling(s, 2).unwrap();
        let t = exhaustive_estimate(s, &o2, 3, 100_000).unwrap();
        assert_eq!(s.state_names(t[&key(s, &["a"])].iter().copied()), ["x1", "x2", "x3", "x4"]);
        let o1 = obs.labeling(s, 1).unwrap();
        let t = exhaustive_estimate(s, &o1, 3, 100_000).unwrap();
        assert_eq!(s.state_names(t[&key(s, &["a", "b"])].iter().copied()), ["x1", "x2"]);
    }

    #[test]
    fn zero_bound_is_the_initial_closure() {
        let s = catalog::late_fault().fsa;
        let t = exhaustive_estimate(&s, &Labeling::global(&s), 0, 1000).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(s.state_names(t[&vec![]].iter().copied()), ["x0"]);
    }

    #[test]
    fn agrees_with_subset_propagation() {
        let inst = catalog::late_fault();
        let s = &inst.fsa;
        for lab in inst.observers().unwrap().labelings(s).into_iter().chain([Labeling::global(s)]) {
            for (sigma, est) in exhaustive_estimate(s, &lab, 3, 100_000).unwrap() {
                assert_eq!(est, s.current_state_estimate(&lab, &sigma));
            }
        }
    }
}
