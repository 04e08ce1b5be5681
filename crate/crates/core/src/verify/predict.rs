use super::certificate::Witness;
use super::search::{dfs, lasso, to_path};
use super::{twin, Property, Verdict};
use crate::composition::{observer_composition, Composition};
use crate::fsa::{Fsa, Labeling, ObserverSet};

/// Co-predictability over `CC(Sⁿ; S1ⁿ, …, SLⁿ)`.
pub fn verify_co_predictability(s: &Fsa, observers: &ObserverSet) -> Verdict {
    let normal = s.normal_subautomaton();
    let c = observer_composition(&normal, &normal, &observers.labelings(s));
    let rc = normal.reaches_cycle();
    let bad = (0..c.num_states() as u32)
        .any(|v| fault_enabled(s, &c, v) && c.state(v)[1..].iter().all(|e| e.state().is_some_and(|x| rc[x.index()])));
    if !bad {
        return Verdict::holds(Property::CoPredictability);
    }
    let w = prediction_witness(s, &c).expect("violation has a witness");
    Verdict::violated(Property::CoPredictability, w)
}

/// Predictability under the global labeling, decided on a twin product.
pub fn verify_predictability(s: &Fsa) -> Verdict {
    if twin::predictable(s) {
        return Verdict::holds(Property::Predictability);
    }
    let normal = s.normal_subautomaton();
    let c = observer_composition(&normal, &normal, &[Labeling::global(s)]);
    let w = prediction_witness(s, &c).expect("twin product and composition disagree");
    Verdict::violated(Property::Predictability, w)
}

fn fault_enabled(s: &Fsa, c: &Composition, v: u32) -> bool {
    s.successors(c.lead(v)).iter().any(|&(e, _)| s.is_faulty(e))
}

/// First state, in depth-first order, where a fault is enabled and every tracked
/// entry can run forever in `Sⁿ`; entries already on a cycle are preferred.
pub(crate) fn prediction_witness(s: &Fsa, c: &Composition) -> Option<Witness> {
    let normal = s.normal_subautomaton();
    let on_cycle = normal.on_cycle();
    let rc = normal.reaches_cycle();
    let starts: Vec<(u32, u64)> = c.initial().iter().map(|&v| (v, 0)).collect();
    let search = |good: &[bool]| {
        dfs(
            c,
            &starts,
            |_, tag, _| Some(tag),
            |v, _| fault_enabled(s, c, v) && c.state(v)[1..].iter().all(|e| e.state().is_some_and(|x| good[x.index()])),
        )
    };
    let walk = search(&on_cycle).or_else(|| search(&rc))?;
    let end = walk.end(c);
    let x = c.lead(end);
    let &(f, y) = s.successors(x).iter().find(|&&(e, _)| s.is_faulty(e)).expect("fault enabled");
    let lassos = c.state(end)[1..]
        .iter()
        .map(|e| lasso(s, e.state().expect("plain composition"), |t| !s.is_faulty(t)).expect("entry reaches a cycle"))
        .collect();
    Some(Witness::Prediction { prefix: to_path(c, walk.start, &walk.edges), fault: (x, f, y), lassos })
}
