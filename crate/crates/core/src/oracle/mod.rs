//! Brute-force counterparts of the verifiers, used as ground truth in tests.
//!
//! Everything here is deliberately slow: compositions are built by trying
//! every event vector, cycle conditions are decided by bounded breadth-first
//! search over explicit graphs, and observer orders are enumerated as
//! permutations.

mod check;
mod dfa;
mod estimate;
mod naive;

use std::collections::VecDeque;

pub use check::{check_certificate, check_evidence, CheckReport, MalformedCertificate};
pub use dfa::{brute_force_dfa_intersection, dfa_product_nonempty};
pub use estimate::exhaustive_estimate;
pub use naive::{naive_composition, NaiveComposition};

use crate::composition::Move;
use crate::fsa::{Fsa, Labeling, ObserverSet};
use crate::verify::{Property, VerifyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Longest path considered by each search; `None` uses the searched graph's size plus one.
    pub path_bound: Option<usize>,
    /// Largest composition the oracle will build.
    pub max_states: usize,
    /// Largest number of runs or words enumerated.
    pub max_runs: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { path_bound: None, max_states: 20_000, max_runs: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BudgetExceeded {
    #[error("more than {0} composition states")]
    States(usize),
    #[error("search did not settle within {0} steps")]
    PathBound(usize),
    #[error("more than {0} runs enumerated")]
    Runs(usize),
    #[error("{0} observers give too many orders to enumerate")]
    Observers(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

/// Verdict of the brute-force procedure; no certificate is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleVerdict {
    pub property: Property,
    pub holds: bool,
    /// Size of the composition that was searched.
    pub states: usize,
}

/// Whether some node satisfying `goal` is reachable from `starts`.
fn bounded_reach(
    n: usize,
    starts: &[usize],
    succ: impl Fn(usize) -> Vec<usize>,
    goal: impl Fn(usize) -> bool,
    bound: Option<usize>,
) -> Result<bool, BudgetExceeded> {
    let bound = bound.unwrap_or(n + 1);
    let mut seen = vec![false; n];
    let mut layer: Vec<usize> = Vec::new();
    for &s in starts {
        if !seen[s] {
            seen[s] = true;
            layer.push(s);
        }
    }
    for depth in 0..=bound {
        if layer.iter().any(|&v| goal(v)) {
            return Ok(true);
        }
        if layer.is_empty() {
            return Ok(false);
        }
        if depth == bound {
            break;
        }
        let mut next = Vec::new();
        for &v in &layer {
            for w in succ(v) {
                if !seen[w] {
                    seen[w] = true;
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    Err(BudgetExceeded::PathBound(bound))
}

/// Whether `v` lies on a closed walk using at least one edge accepted by `flag`,
/// searched on the graph doubled by a "flag seen" bit.
fn on_flagged_cycle(
    g: &NaiveComposition,
    v: usize,
    flag: impl Fn(usize) -> bool,
    bound: Option<usize>,
) -> Result<bool, BudgetExceeded> {
    let n = g.states.len();
    let succ = |x: usize| -> Vec<usize> {
        let (node, seen) = (x / 2, x % 2 == 1);
        g.out[node].iter().map(|&e| 2 * g.edges[e].2 + usize::from(seen || flag(e))).collect()
    };
    // Start from the successors of (v, unseen) so that the empty walk does not count.
    let starts: Vec<usize> = succ(2 * v);
    bounded_reach(2 * n, &starts, succ, |x| x == 2 * v + 1, bound)
}

/// Whether some transition cycle of `s` is reachable from `x`.
fn reaches_cycle(s: &Fsa, x: usize, bound: Option<usize>) -> Result<bool, BudgetExceeded> {
    let n = s.num_states();
    let succ = |y: usize| -> Vec<usize> {
        s.successors(crate::fsa::StateId(y as u32)).iter().map(|&(_, z)| z.index()).collect()
    };
    let reach = {
        let mut seen = vec![false; n];
        let mut q = VecDeque::from([x]);
        seen[x] = true;
        while let Some(y) = q.pop_front() {
            for z in succ(y) {
                if !seen[z] {
                    seen[z] = true;
                    q.push_back(z);
                }
            }
        }
        seen
    };
    for y in (0..n).filter(|&y| reach[y]) {
        if bounded_reach(n, &succ(y), succ, |z| z == y, bound)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn reachable(g: &NaiveComposition) -> Vec<bool> {
    let mut seen = vec![false; g.states.len()];
    let mut q: VecDeque<usize> = g.initial.iter().copied().collect();
    for &v in &g.initial {
        seen[v] = true;
    }
    while let Some(v) = q.pop_front() {
        for &e in &g.out[v] {
            let w = g.edges[e].2;
            if !seen[w] {
                seen[w] = true;
                q.push_back(w);
            }
        }
    }
    seen
}

fn successors_of(g: &NaiveComposition) -> impl Fn(usize) -> Vec<usize> + '_ {
    move |v| g.out[v].iter().map(|&e| g.edges[e].2).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Detection pattern for an explicit observer order: each observer in turn gets a
/// reachable cycle visible to it with its entry alive, then everything dies.
fn naive_detection(s: &Fsa, labelings: &[Labeling], cfg: &OracleConfig) -> Result<(bool, usize), BudgetExceeded> {
    let l = labelings.len();
    if l > 6 {
        return Err(BudgetExceeded::Observers(l));
    }
    let comps: Vec<Fsa> = labelings.iter().map(|lab| s.relabeled(lab)).collect();
    let g = naive_composition(s, &comps, true, cfg.max_states)?;
    let n = g.states.len();
    let succ = successors_of(&g);

    let mut anchor = vec![vec![false; n]; l];
    for (j, lab) in labelings.iter().enumerate() {
        for v in 0..n {
            if g.states[v][j + 1].is_dead() {
                continue;
            }
            let flag = |e: usize| g.edges[e].1[0].event().is_some_and(|t| lab.is_visible(t));
            anchor[j][v] = on_flagged_cycle(&g, v, flag, cfg.path_bound)?;
        }
    }
    let mut finish = vec![false; n];
    for v in 0..n {
        if g.states[v][1..].iter().all(|e| e.is_dead()) {
            finish[v] = reaches_cycle(s, g.lead(v).index(), cfg.path_bound)?;
        }
    }

    for order in permutations(l) {
        let mut layer: Vec<usize> = g.initial.clone();
        let mut ok = true;
        for &j in &order {
            let mut next = Vec::new();
            for w in 0..n {
                if anchor[j][w] && bounded_reach(n, &layer, &succ, |x| x == w, cfg.path_bound)? {
                    next.push(w);
                }
            }
            if next.is_empty() {
                ok = false;
                break;
            }
            layer = next;
        }
        if ok && bounded_reach(n, &layer, &succ, |x| finish[x], cfg.path_bound)? {
            return Ok((true, n));
        }
    }
    Ok((false, n))
}

fn naive_diagnosis(s: &Fsa, labelings: &[Labeling], cfg: &OracleConfig) -> Result<(bool, usize), BudgetExceeded> {
    let normal = s.normal_subautomaton();
    let comps: Vec<Fsa> = labelings.iter().map(|lab| normal.relabeled(lab)).collect();
    let g = naive_composition(s, &comps, false, cfg.max_states)?;
    let n = g.states.len();
    let reach = reachable(&g);
    let moving = |e: usize| g.edges[e].1[0] != Move::Eps;
    let mut cyclic = vec![false; n];
    for (v, c) in cyclic.iter_mut().enumerate() {
        *c = on_flagged_cycle(&g, v, moving, cfg.path_bound)?;
    }
    let after: Vec<usize> = g
        .edges
        .iter()
        .filter(|(u, m, _)| reach[*u] && m[0].event().is_some_and(|t| s.is_faulty(t)))
        .map(|&(_, _, w)| w)
        .collect();
    Ok((bounded_reach(n, &after, successors_of(&g), |v| cyclic[v], cfg.path_bound)?, n))
}

fn naive_prediction(s: &Fsa, labelings: &[Labeling], cfg: &OracleConfig) -> Result<(bool, usize), BudgetExceeded> {
    let normal = s.normal_subautomaton();
    let comps: Vec<Fsa> = labelings.iter().map(|lab| normal.relabeled(lab)).collect();
    let g = naive_composition(&normal, &comps, false, cfg.max_states)?;
    let reach = reachable(&g);
    for v in 0..g.states.len() {
        if !reach[v] || !s.successors(g.lead(v)).iter().any(|&(e, _)| s.is_faulty(e)) {
            continue;
        }
        let mut all = true;
        for e in &g.states[v][1..] {
            let x = e.state().expect("plain composition");
            if !reaches_cycle(&normal, x.index(), cfg.path_bound)? {
                all = false;
                break;
            }
        }
        if all {
            return Ok((true, g.states.len()));
        }
    }
    Ok((false, g.states.len()))
}

/// Decide `property` by brute force. Exceeding any budget is reported as an error.
pub fn naive_verify(
    property: Property,
    s: &Fsa,
    observers: Option<&ObserverSet>,
    cfg: &OracleConfig,
) -> Result<OracleVerdict, OracleError> {
    let obs = property.effective_observers(s, observers)?;
    let labelings = obs.labelings(s);
    let (violated, states) = match property {
        Property::StrongDetectability | Property::CoDetectability => naive_detection(s, &labelings, cfg)?,
        Property::Diagnosability | Property::CoDiagnosability => naive_diagnosis(s, &labelings, cfg)?,
        Property::Predictability | Property::CoPredictability => naive_prediction(s, &labelings, cfg)?,
    };
    Ok(OracleVerdict { property, holds: !violated, states })
}
