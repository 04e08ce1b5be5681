use super::certificate::{Step, Witness};
use super::search::{dfs, shortest_good_cycle, to_path};
use super::{twin, Property, Verdict};
use crate::composition::{observer_composition, Composition, Move};
use crate::fsa::{Fsa, Labeling, ObserverSet};
use crate::graph::{forward_closure, tarjan};

/// Co-diagnosability over `CC(S; S1ⁿ, …, SLⁿ)`.
pub fn verify_co_diagnosability(s: &Fsa, observers: &ObserverSet) -> Verdict {
    let labelings = observers.labelings(s);
    let c = observer_composition(s, &s.normal_subautomaton(), &labelings);
    if !violated(s, &c) {
        return Verdict::holds(Property::CoDiagnosability);
    }
    let w = diagnosis_witness(s, &c).expect("violation has a witness");
    Verdict::violated(Property::CoDiagnosability, w)
}

/// Diagnosability under the global labeling, decided on a twin product.
pub fn verify_diagnosability(s: &Fsa) -> Verdict {
    if twin::diagnosable(s) {
        return Verdict::holds(Property::Diagnosability);
    }
    let c = observer_composition(s, &s.normal_subautomaton(), &[Labeling::global(s)]);
    let w = diagnosis_witness(s, &c).expect("twin product and composition disagree");
    Verdict::violated(Property::Diagnosability, w)
}

fn is_fault(s: &Fsa, m: Move) -> bool {
    m.event().is_some_and(|e| s.is_faulty(e))
}

/// SCCs with an internal transition on which entry 0 takes an event.
fn moving_sccs(c: &Composition) -> (Vec<usize>, Vec<bool>) {
    let sccs = tarjan(c.num_states(), |v| c.successors(v as u32).collect::<Vec<_>>().into_iter());
    let mut good = vec![false; sccs.count];
    for u in 0..c.num_states() as u32 {
        let cu = sccs.component[u as usize];
        if c.edges(u).any(|e| sccs.component[e.target as usize] == cu && e.moves[0].event().is_some()) {
            good[cu] = true;
        }
    }
    (sccs.component, good)
}

fn violated(s: &Fsa, c: &Composition) -> bool {
    let n = c.num_states();
    let mut seeds = vec![false; n];
    for u in 0..n as u32 {
        for e in c.edges(u) {
            if is_fault(s, e.moves[0]) {
                seeds[e.target as usize] = true;
            }
        }
    }
    let after = forward_closure(n, &seeds, |v| c.successors(v as u32).collect::<Vec<_>>());
    let (component, good) = moving_sccs(c);
    (0..n).any(|v| after[v] && good[component[v]])
}

/// Prefix, fault, middle path and a cycle on which entry 0 moves.
///
/// A first pass only fires the fault where every tracked entry lies on a
/// cycle of `Sⁿ`; the unrestricted search is the fallback.
pub(crate) fn diagnosis_witness(s: &Fsa, c: &Composition) -> Option<Witness> {
    let (component, good) = moving_sccs(c);
    let on_cycle = s.normal_subautomaton().on_cycle();
    let settled = |v: u32| c.state(v)[1..].iter().all(|e| e.state().is_some_and(|x| on_cycle[x.index()]));
    let starts: Vec<(u32, u64)> = c.initial().iter().map(|&v| (v, 0)).collect();
    let accept = |v: u32, tag: u64| tag == 1 && good[component[v as usize]];
    let search = |prefer: bool| {
        dfs(
            c,
            &starts,
            |src, tag, e| {
                if tag == 0 && is_fault(s, e.moves[0]) {
                    (!prefer || settled(src)).then_some(1)
                } else {
                    Some(tag)
                }
            },
            accept,
        )
    };
    let walk = search(true).or_else(|| search(false))?;
    let i = walk.tags.iter().position(|&t| t == 1).expect("accepted walk carries a fault") - 1;
    let (src, edge) = walk.edges[i];
    let e = c.edge(edge);
    let fault = Step { source: c.state(src).to_vec(), moves: e.moves.to_vec(), target: c.state(e.target).to_vec() };
    let prefix = to_path(c, walk.start, &walk.edges[..i]);
    let middle = to_path(c, e.target, &walk.edges[i + 1..]);
    let end = walk.end(c);
    let comp = component[end as usize];
    let cycle = shortest_good_cycle(c, end, |w| component[w as usize] == comp, |_, e| e.moves[0].event().is_some())
        .expect("good SCC has a moving cycle");
    Some(Witness::Diagnosis { prefix, fault, middle, cycle: to_path(c, end, &cycle) })
}
