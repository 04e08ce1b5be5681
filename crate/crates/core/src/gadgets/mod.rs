//! Instances with known verdicts, built from DFA families and digraphs.

mod normalize;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

pub use normalize::{normalize_acyclic_dfas, normalize_complete_dfas};

use crate::fsa::{Dfa, Instance, RawDfa, RawEvent, RawInstance, RawObserver};
use crate::oracle::{brute_force_dfa_intersection, dfa_product_nonempty};
use crate::random::Digraph;
use crate::verify::Property;
use normalize::{common_alphabet, fresh};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GadgetError {
    #[error("no source automata")]
    NoDfas,
    #[error("at least two DFAs are needed, got {0}")]
    TooFew(usize),
    #[error("DFA {0} has a different alphabet from DFA 0")]
    AlphabetMismatch(usize),
    #[error("DFA {0} is cyclic")]
    Cyclic(usize),
    #[error("DFA {0} is not complete")]
    Incomplete(usize),
    #[error("DFA 0 must have exactly one accepting state, found {0}")]
    AcceptingCount(usize),
    #[error("the accepting state of DFA 0 must have no outgoing transitions")]
    AcceptingNotDeadlocked,
    #[error("DFA {0} must accept in every state")]
    NotAllAccepting(usize),
    #[error("DFA {0} has a state without outgoing transitions")]
    Deadlock(usize),
    #[error("vertex `{0}` is not in the graph")]
    UnknownVertex(String),
}

/// Where a generated instance came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Source {
    Dfas { dfas: Vec<RawDfa> },
    Graph { graph: Digraph, s: String, t: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub reduction: String,
    pub source: Source,
    /// Sources before normalization, when a normalization step was applied.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalized_from: Option<Vec<RawDfa>>,
    /// A word accepted by every source DFA, if one was found.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub common_word: Option<Vec<String>>,
}

/// A generated instance together with the verdict its construction guarantees.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub instance: Instance,
    pub property: Property,
    /// `None` when the source was too large to decide by brute force.
    pub expected_holds: Option<bool>,
    pub provenance: Provenance,
}

/// Largest product state space searched when computing ground truth for complete DFAs.
const PRODUCT_LIMIT: usize = 1 << 20;

fn check_family(dfas: &[Dfa]) -> Result<Vec<String>, GadgetError> {
    if dfas.len() < 2 {
        return Err(GadgetError::TooFew(dfas.len()));
    }
    common_alphabet(dfas)
}

/// Shared skeleton: `⋄0` branches by `a_i` into copy `i` of each DFA over `Σ_i`.
struct Skeleton {
    raw: RawInstance,
    a: String,
    state_of: Vec<Vec<String>>,
}

fn skeleton(dfas: &[Dfa], sigma: &[String], extra_states: &[&str], extra_events: &[&str]) -> Skeleton {
    let state_of: Vec<Vec<String>> =
        dfas.iter().enumerate().map(|(i, d)| d.states().iter().map(|q| format!("A{i}.{q}")).collect()).collect();
    let mut state_names: HashSet<String> = state_of.iter().flatten().cloned().collect();
    let mut fresh_state = |base: &str| {
        let n = fresh(base, &state_names);
        state_names.insert(n.clone());
        n
    };
    let root = fresh_state("⋄0");
    let extra: Vec<String> = extra_states.iter().map(|b| fresh_state(b)).collect();

    let letter = |i: usize, a: &str| format!("{a}@{i}");
    let mut event_names: HashSet<String> =
        (0..dfas.len()).flat_map(|i| sigma.iter().map(move |a| letter(i, a))).collect();
    let mut fresh_event = |base: &str| {
        let n = fresh(base, &event_names);
        event_names.insert(n.clone());
        n
    };
    let a = fresh_event("a");
    let branch: Vec<String> = (0..dfas.len()).map(|i| fresh_event(&format!("a{i}"))).collect();
    let extra_ev: Vec<String> = extra_events.iter().map(|b| fresh_event(b)).collect();

    let mut raw = RawInstance { initial: vec![root.clone()], ..RawInstance::default() };
    raw.states.push(root.clone());
    for names in &state_of {
        raw.states.extend(names.iter().cloned());
    }
    raw.states.extend(extra);
    for (i, d) in dfas.iter().enumerate() {
        for x in sigma {
            raw.events.push(RawEvent { name: letter(i, x), label: Some(x.clone()) });
        }
        raw.transitions.push((root.clone(), branch[i].clone(), state_of[i][d.initial()].clone()));
        for q in 0..d.num_states() {
            for x in sigma {
                if let Some(r) = d.letter(x).and_then(|l| d.next(q, l)) {
                    raw.transitions.push((state_of[i][q].clone(), letter(i, x), state_of[i][r].clone()));
                }
            }
        }
    }
    raw.events.push(RawEvent { name: a.clone(), label: Some(a.clone()) });
    for b in &branch {
        raw.events.push(RawEvent { name: b.clone(), label: Some(a.clone()) });
    }
    for e in extra_ev {
        raw.events.push(RawEvent { name: e, label: None });
    }
    // Observer i sees Σ_0, Σ_i, a and every a_j.
    for i in 1..dfas.len() {
        let mut observes: Vec<String> = sigma.iter().map(|x| letter(0, x)).collect();
        observes.extend(sigma.iter().map(|x| letter(i, x)));
        observes.push(a.clone());
        observes.extend(branch.iter().cloned());
        raw.observers.push(RawObserver { name: format!("O{i}"), observes });
    }
    Skeleton { raw, a, state_of }
}

fn raw_dfas(dfas: &[Dfa]) -> Vec<RawDfa> {
    dfas.iter().map(Dfa::to_raw).collect()
}

/// Acyclic `A_0, …, A_n` with `A_0` single-accepting and the rest accepting everywhere,
/// to an instance that is co-detectable iff the family has no common word.
pub fn reduce_to_codetectability(dfas: &[Dfa]) -> Result<ReductionInstance, GadgetError> {
    let sigma = check_family(dfas)?;
    if let Some(i) = dfas.iter().position(|d| !d.is_acyclic()) {
        return Err(GadgetError::Cyclic(i));
    }
    let acc = dfas[0].accepting_states();
    if acc.len() != 1 {
        return Err(GadgetError::AcceptingCount(acc.len()));
    }
    if let Some(i) = (1..dfas.len()).find(|&i| dfas[i].accepting_states().len() != dfas[i].num_states()) {
        return Err(GadgetError::NotAllAccepting(i));
    }
    let Skeleton { mut raw, a, state_of } = skeleton(dfas, &sigma, &["⋄1", "⋄2"], &[]);
    let n = raw.states.len();
    let (good, bad) = (raw.states[n - 2].clone(), raw.states[n - 1].clone());
    for sink in [&good, &bad] {
        raw.transitions.push((sink.clone(), a.clone(), sink.clone()));
    }
    for (i, names) in state_of.iter().enumerate() {
        for (q, name) in names.iter().enumerate() {
            let to = if i == 0 && q == acc[0] { &good } else { &bad };
            raw.transitions.push((name.clone(), a.clone(), to.clone()));
        }
    }
    let instance = raw.validate().expect("reduction output is valid");
    let bound: usize = dfas.iter().map(Dfa::num_states).sum();
    let common = brute_force_dfa_intersection(dfas, bound);
    Ok(ReductionInstance {
        instance,
        property: Property::CoDetectability,
        expected_holds: Some(common.is_none()),
        provenance: Provenance {
            reduction: "codet".into(),
            source: Source::Dfas { dfas: raw_dfas(dfas) },
            normalized_from: None,
            common_word: common,
        },
    })
}

/// `A_0` with a single deadlocked accepting state and deadlock-free, all-accepting
/// `A_1, …, A_n`, to an instance that is co-predictable iff the family has no common word.
pub fn reduce_to_copredictability(dfas: &[Dfa]) -> Result<ReductionInstance, GadgetError> {
    let sigma = check_family(dfas)?;
    let acc = dfas[0].accepting_states();
    if acc.len() != 1 {
        return Err(GadgetError::AcceptingCount(acc.len()));
    }
    let letters = dfas[0].alphabet().len();
    if (0..letters).any(|l| dfas[0].next(acc[0], l).is_some()) {
        return Err(GadgetError::AcceptingNotDeadlocked);
    }
    for (i, d) in dfas.iter().enumerate().skip(1) {
        if d.accepting_states().len() != d.num_states() {
            return Err(GadgetError::NotAllAccepting(i));
        }
        if (0..d.num_states()).any(|q| (0..d.alphabet().len()).all(|l| d.next(q, l).is_none())) {
            return Err(GadgetError::Deadlock(i));
        }
    }
    let Skeleton { mut raw, a, state_of } = skeleton(dfas, &sigma, &["⋄1"], &["F"]);
    let sink = raw.states.last().expect("sink state").clone();
    let fault = raw.events.last().expect("fault event").name.clone();
    raw.transitions.push((sink.clone(), a, sink.clone()));
    raw.transitions.push((state_of[0][acc[0]].clone(), fault.clone(), sink));
    raw.faulty.push(fault);
    let instance = raw.validate().expect("reduction output is valid");
    let size: usize = dfas.iter().map(Dfa::num_states).try_fold(1usize, |p, n| p.checked_mul(n)).unwrap_or(usize::MAX);
    let common = (size <= PRODUCT_LIMIT).then(|| dfa_product_nonempty(dfas));
    Ok(ReductionInstance {
        instance,
        property: Property::CoPredictability,
        expected_holds: common.as_ref().map(Option::is_none),
        provenance: Provenance {
            reduction: "copred".into(),
            source: Source::Dfas { dfas: raw_dfas(dfas) },
            normalized_from: None,
            common_word: common.flatten(),
        },
    })
}

/// Graph `G` with vertices `s`, `t`, to an instance that is predictable iff
/// `t` is not reachable from `s`.
pub fn reduce_path_to_predictability(g: &Digraph, s: &str, t: &str) -> Result<ReductionInstance, GadgetError> {
    for v in [s, t] {
        if !g.vertices.iter().any(|x| x == v) {
            return Err(GadgetError::UnknownVertex(v.to_string()));
        }
    }
    let taken: HashSet<String> = g.vertices.iter().cloned().collect();
    let vf = fresh("vf", &taken);
    let mut raw = RawInstance {
        states: g.vertices.iter().cloned().chain([vf.clone()]).collect(),
        initial: vec![s.to_string()],
        events: vec![
            RawEvent { name: "a".into(), label: Some("a".into()) },
            RawEvent { name: "f".into(), label: None },
            RawEvent { name: "u".into(), label: None },
        ],
        faulty: vec!["f".into()],
        ..RawInstance::default()
    };
    for (v, w) in &g.edges {
        raw.transitions.push((v.clone(), "a".into(), w.clone()));
        raw.transitions.push((v.clone(), "a".into(), vf.clone()));
    }
    raw.transitions.push((t.into(), "f".into(), vf.clone()));
    raw.transitions.push((t.into(), "u".into(), vf.clone()));
    raw.transitions.push((vf.clone(), "a".into(), vf));
    let instance = raw.validate().expect("reduction output is valid");
    Ok(ReductionInstance {
        instance,
        property: Property::Predictability,
        expected_holds: Some(!g.reaches(s, t)),
        provenance: Provenance {
            reduction: "path".into(),
            source: Source::Graph { graph: g.clone(), s: s.into(), t: t.into() },
            normalized_from: None,
            common_word: None,
        },
    })
}

/// Normalize an acyclic family, then reduce.
pub fn codetectability_from_acyclic(dfas: &[Dfa]) -> Result<ReductionInstance, GadgetError> {
    let mut r = reduce_to_codetectability(&normalize_acyclic_dfas(dfas)?)?;
    r.provenance.normalized_from = Some(raw_dfas(dfas));
    Ok(r)
}

/// Normalize a complete family, then reduce.
pub fn copredictability_from_complete(dfas: &[Dfa]) -> Result<ReductionInstance, GadgetError> {
    let mut r = reduce_to_copredictability(&normalize_complete_dfas(dfas)?)?;
    r.provenance.normalized_from = Some(raw_dfas(dfas));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_acyclic_dfa, random_complete_dfa, random_digraph, rng};
    use crate::verify::verify;

    fn only_ab() -> Dfa {
        Dfa::from_raw(&RawDfa {
            states: vec!["p".into(), "q".into(), "r".into()],
            alphabet: vec!["a".into(), "b".into()],
            initial: "p".into(),
            accepting: vec!["r".into()],
            transitions: vec![("p".into(), "a".into(), "q".into()), ("q".into(), "b".into(), "r".into())],
        })
        .unwrap()
    }

    fn check(r: &ReductionInstance) -> bool {
        let v = verify(r.property, &r.instance.fsa, r.instance.observers().ok()).unwrap();
        Some(v.holds) == r.expected_holds
    }

    #[test]
    fn common_word_breaks_co_detectability() {
        let r = codetectability_from_acyclic(&[only_ab(), only_ab()]).unwrap();
        assert_eq!(r.expected_holds, Some(false));
        assert_eq!(r.provenance.common_word.as_deref(), Some(&["a".to_string(), "b".into(), "#λ".into()][..]));
        assert!(check(&r));
        let sources: usize = 2 * 4;
        assert_eq!(r.instance.fsa.num_states(), sources + 3);
    }

    #[test]
    fn estimate_after_common_word_is_both_sinks() {
        let r = codetectability_from_acyclic(&[only_ab(), only_ab()]).unwrap();
        let s = &r.instance.fsa;
        let lab = r.instance.observers().unwrap().labeling(s, 1).unwrap();
        let est = s.estimate_by_names(&lab, &["#a", "a", "b", "#λ", "#a", "#a"]);
        assert_eq!(s.state_names(est.iter().copied()), ["#⋄1", "#⋄2"]);
    }

    #[test]
    fn reductions_match_ground_truth() {
        let mut r = rng(5);
        for _ in 0..40 {
            let fam: Vec<Dfa> = (0..2).map(|_| random_acyclic_dfa(&mut r, 3, 2)).collect();
            assert!(check(&codetectability_from_acyclic(&fam).unwrap()));
            let fam: Vec<Dfa> = (0..2).map(|_| random_complete_dfa(&mut r, 2, 2)).collect();
            assert!(check(&copredictability_from_complete(&fam).unwrap()));
            let g = random_digraph(&mut r, 4, 0.25);
            assert!(check(&reduce_path_to_predictability(&g, "v0", "v3").unwrap()));
        }
    }

    #[test]
    fn path_reduction_edge_cases() {
        let g = Digraph { vertices: vec!["s".into(), "t".into()], edges: vec![] };
        assert_eq!(reduce_path_to_predictability(&g, "s", "t").unwrap().expected_holds, Some(true));
        assert_eq!(reduce_path_to_predictability(&g, "s", "s").unwrap().expected_holds, Some(false));
        assert!(check(&reduce_path_to_predictability(&g, "s", "s").unwrap()));
        assert!(reduce_path_to_predictability(&g, "s", "z").is_err());
    }

    #[test]
    fn generated_instances_are_deterministic() {
        let r = codetectability_from_acyclic(&[only_ab(), only_ab()]).unwrap();
        let s = &r.instance.fsa;
        assert_eq!(s.initial().len(), 1);
        for x in s.state_ids() {
            let succ = s.successors(x);
            for w in succ.windows(2) {
                assert_ne!(w[0].0, w[1].0);
            }
        }
        let r = copredictability_from_complete(&[
            random_complete_dfa(&mut rng(2), 3, 2),
            random_complete_dfa(&mut rng(3), 2, 2),
        ])
        .unwrap();
        assert!(r.instance.fsa.check_assumptions().deadlock_free);
    }
}
