//! Centralized deciders on the twin product of an automaton with a copy of itself.
//!
//! These intentionally avoid the general composition code so that the
//! decentralized verifiers with a single global observer can be checked
//! against them.

use rustc_hash::FxHashMap;

use crate::fsa::{EventId, Fsa, StateId};
use crate::graph::{backward_closure, tarjan};

/// Explicit graph with interned nodes.
struct Product<N> {
    nodes: Vec<N>,
    succ: Vec<Vec<(usize, bool)>>,
}

impl<N: Copy + Eq + std::hash::Hash> Product<N> {
    /// Reachable part from `init`; `step` lists `(target, flagged)` pairs.
    fn explore(init: Vec<N>, step: impl Fn(N) -> Vec<(N, bool)>) -> Self {
        let mut ids: FxHashMap<N, usize> = FxHashMap::default();
        let mut nodes = Vec::new();
        for n in init {
            if let std::collections::hash_map::Entry::Vacant(slot) = ids.entry(n) {
                slot.insert(nodes.len());
                nodes.push(n);
            }
        }
        let mut succ = Vec::new();
        let mut i = 0;
        while i < nodes.len() {
            let mut out = Vec::new();
            for (m, flag) in step(nodes[i]) {
                let id = *ids.entry(m).or_insert_with(|| {
                    nodes.push(m);
                    nodes.len() - 1
                });
                out.push((id, flag));
            }
            succ.push(out);
            i += 1;
        }
        Product { nodes, succ }
    }

    /// Nodes lying on a cycle that uses a flagged edge.
    fn on_flagged_cycle(&self) -> Vec<bool> {
        let n = self.nodes.len();
        let sccs = tarjan(n, |v| self.succ[v].iter().map(|&(w, _)| w).collect::<Vec<_>>().into_iter());
        let mut good = vec![false; sccs.count];
        for v in 0..n {
            for &(w, flag) in &self.succ[v] {
                if flag && sccs.component[v] == sccs.component[w] {
                    good[sccs.component[v]] = true;
                }
            }
        }
        (0..n).map(|v| good[sccs.component[v]]).collect()
    }
}

/// Synchronized moves of `(x, y)` under the global labeling of `a` and `b`:
/// asynchronous unobservable moves of either side, or a joint move on equal labels.
/// The flag marks moves where the first component takes an event.
fn twin_moves(a: &Fsa, b: &Fsa, x: StateId, y: StateId) -> Vec<(Option<EventId>, StateId, StateId)> {
    let mut out = Vec::new();
    for &(e, x2) in a.successors(x) {
        match a.label(e) {
            None => out.push((Some(e), x2, y)),
            Some(l) => {
                for &(f, y2) in b.successors(y) {
                    if b.label(f).map(|m| b.label_name(m)) == Some(a.label_name(l)) {
                        out.push((Some(e), x2, y2));
                    }
                }
            }
        }
    }
    for &(f, y2) in b.successors(y) {
        if b.label(f).is_none() {
            out.push((None, x, y2));
        }
    }
    out
}

fn init_pairs(a: &Fsa, b: &Fsa) -> Vec<(StateId, StateId)> {
    let mut v = Vec::new();
    for &x in a.initial() {
        for &y in b.initial() {
            v.push((x, y));
        }
    }
    v
}

/// Strong detectability: no cycle with an observable move and both copies
/// alive can lead to a split copy whose true state still reaches a cycle.
pub(crate) fn strongly_detectable(s: &Fsa) -> bool {
    type Node = (StateId, Option<StateId>);
    let init: Vec<Node> = init_pairs(s, s).into_iter().map(|(x, y)| (x, Some(y))).collect();
    let product = Product::explore(init, |(x, y): Node| match y {
        Some(y) => {
            let mut out: Vec<(Node, bool)> = twin_moves(s, s, x, y)
                .into_iter()
                .map(|(e, x2, y2)| ((x2, Some(y2)), e.is_some_and(|e| s.is_observable(e))))
                .collect();
            if x != y {
                out.push(((x, None), false));
                out.extend(s.successors(x).iter().map(|&(_, x2)| ((x2, None), false)));
            }
            out
        }
        None => s.successors(x).iter().map(|&(_, x2)| ((x2, None), false)).collect(),
    });
    let rc = s.reaches_cycle();
    let n = product.nodes.len();
    let targets: Vec<bool> = product.nodes.iter().map(|&(x, y)| y.is_none() && rc[x.index()]).collect();
    let can_finish = backward_closure(n, &targets, |v| product.succ[v].iter().map(|&(w, _)| w).collect::<Vec<_>>());
    let positive = product.on_flagged_cycle();
    !(0..n).any(|v| positive[v] && product.nodes[v].1.is_some() && can_finish[v])
}

/// Diagnosability: no reachable post-fault cycle on which the faulty copy keeps moving
/// while the normal copy matches its observations.
pub(crate) fn diagnosable(s: &Fsa) -> bool {
    let normal = s.normal_subautomaton();
    type Node = (StateId, StateId, bool);
    let init: Vec<Node> = init_pairs(s, &normal).into_iter().map(|(x, y)| (x, y, false)).collect();
    let product = Product::explore(init, |(x, y, faulted): Node| {
        twin_moves(s, &normal, x, y)
            .into_iter()
            .map(|(e, x2, y2)| {
                let f = faulted || e.is_some_and(|e| s.is_faulty(e));
                ((x2, y2, f), e.is_some())
            })
            .collect()
    });
    let cyc = product.on_flagged_cycle();
    !(0..product.nodes.len()).any(|v| product.nodes[v].2 && cyc[v])
}

/// Predictability: no normal pair where the true copy can fail next while the
/// matching normal copy can still run forever.
pub(crate) fn predictable(s: &Fsa) -> bool {
    let normal = s.normal_subautomaton();
    let product = Product::explore(init_pairs(&normal, &normal), |(x, y)| {
        twin_moves(&normal, &normal, x, y).into_iter().map(|(_, x2, y2)| ((x2, y2), false)).collect()
    });
    let rc = normal.reaches_cycle();
    !product.nodes.iter().any(|&(x, y)| s.successors(x).iter().any(|&(e, _)| s.is_faulty(e)) && rc[y.index()])
}
