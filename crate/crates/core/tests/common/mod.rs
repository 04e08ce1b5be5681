#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use cocomp::composition::{Kind, Rule};
use cocomp::fsa::{Instance, RawInstance};
use cocomp::random::{random_instance, rng, Shape};
use cocomp::{Composition, Entry, Fsa, Labeling, Move, StateId};
use rand::Rng;

pub fn corpus(seed: u64, count: usize, shape: &Shape) -> Vec<Instance> {
    let mut r = rng(seed);
    (0..count).map(|_| random_instance(&mut r, shape)).collect()
}

/// Small instances: at most 5 states, at most 2 observers.
pub fn small_shape() -> Shape {
    Shape { max_states: 5, max_events: 5, max_observers: 2, ..Shape::default() }
}

/// `inst` with transition `t` removed.
pub fn without_transition(inst: &Instance, t: (StateId, cocomp::EventId, StateId)) -> Instance {
    let mut raw: RawInstance = inst.to_raw();
    let s = &inst.fsa;
    let named = (s.state_name(t.0).to_string(), s.event_name(t.1).to_string(), s.state_name(t.2).to_string());
    raw.transitions.retain(|x| *x != named);
    raw.validate().expect("removing a transition keeps the instance valid")
}

fn label(lab: &Labeling, m: Move) -> Option<cocomp::fsa::LabelId> {
    m.event().and_then(|e| lab.label(e))
}

/// Per-edge structural checks on a composition of `lead` with copies of `base`
/// relabeled by `labs`. Returns one message per violation.
pub fn composition_violations(lead: &Fsa, base: &Fsa, labs: &[Labeling], c: &Composition) -> Vec<String> {
    let mut out = Vec::new();
    let width = labs.len() + 1;
    let diamond = c.kind() == Kind::Diamond;
    let n = lead.num_states();
    let bound = if diamond {
        n as f64 * ((n + 1) as f64).powi(labs.len() as i32)
    } else {
        n as f64 * (n as f64).powi(labs.len() as i32)
    };
    if c.num_states() as f64 > bound {
        out.push(format!("{} states exceed bound {bound}", c.num_states()));
    }
    for v in 0..c.num_states() as u32 {
        let src = c.state(v);
        if src.len() != width || src[0].is_dead() {
            out.push(format!("malformed vector {}", c.state_label(v)));
            continue;
        }
        let mut degree_bound = 1usize;
        for (j, e) in src.iter().enumerate() {
            let fsa = if j == 0 { lead } else { base };
            degree_bound *= e.state().map_or(1, |x| fsa.successors(x).len() + 1);
        }
        if diamond {
            degree_bound *= 2;
        }
        let mut seen = HashSet::new();
        let mut degree = 0;
        for edge in c.edges(v) {
            degree += 1;
            let tgt = c.state(edge.target);
            let ctx =
                format!("{} -[{}]-> {}", c.state_label(v), c.render_moves(edge.moves), c.state_label(edge.target));
            if !seen.insert((edge.moves.to_vec(), edge.target)) {
                out.push(format!("{ctx}: duplicate edge"));
            }
            for j in 0..width {
                let fsa = if j == 0 { lead } else { base };
                match (src[j], edge.moves[j], tgt[j]) {
                    (Entry::State(x), Move::Event(e), Entry::State(y)) if fsa.has_transition(x, e, y) => {}
                    (a, Move::Eps, b) if a == b => {}
                    (Entry::State(_) | Entry::Dead, Move::Kill, Entry::Dead) if diamond && j > 0 => {}
                    _ => out.push(format!("{ctx}: entry {j} is not a move of its component")),
                }
            }
            if src.iter().zip(tgt).any(|(a, b)| a.is_dead() && !b.is_dead()) {
                out.push(format!("{ctx}: a dead entry came back"));
            }
            // Every live tracked entry that is not killed agrees with entry 0 on its own labeling.
            for j in 1..width {
                if !src[j].is_dead()
                    && edge.moves[j] != Move::Kill
                    && label(&labs[j - 1], edge.moves[j]) != label(&labs[j - 1], edge.moves[0])
                {
                    out.push(format!("{ctx}: entry {j} projects differently from entry 0"));
                }
            }
            let kills = edge.moves.contains(&Move::Kill);
            let movers: Vec<usize> = (0..width).filter(|&j| edge.moves[j].event().is_some()).collect();
            let expected = if kills {
                Rule::Kill
            } else if movers.len() == 1 {
                Rule::Asynchronous
            } else {
                Rule::Synchronous
            };
            let visible_to_tracked = |j: usize| {
                let e = edge.moves[j];
                if j == 0 {
                    (1..width).any(|l| !src[l].is_dead() && label(&labs[l - 1], e).is_some())
                } else {
                    label(&labs[j - 1], e).is_some()
                }
            };
            if edge.rule != expected
                || (expected == Rule::Asynchronous && visible_to_tracked(movers[0]))
                || (expected == Rule::Synchronous && !movers.contains(&0))
            {
                out.push(format!("{ctx}: rule {:?} does not match the event vector", edge.rule));
            }
            if kills && !src.iter().enumerate().skip(1).any(|(j, e)| *e != src[0] && edge.moves[j] == Move::Kill) {
                out.push(format!("{ctx}: kill without a differing entry"));
            }
            if kills && (1..width).any(|j| edge.moves[j] == Move::Kill && src[j] == src[0]) {
                out.push(format!("{ctx}: kill of an entry agreeing with entry 0"));
            }
        }
        if degree > degree_bound {
            out.push(format!("{}: {degree} edges exceed bound {degree_bound}", c.state_label(v)));
        }
    }
    out
}

/// Random runs of `s`, a sub-automaton of every component, from its initial states, each lifted to the diagonal
/// vector: every diagonal state along the run must be reachable in `c`.
pub fn embedding_violations<R: Rng>(s: &Fsa, c: &Composition, rng: &mut R, samples: usize, len: usize) -> Vec<String> {
    let diag = |x: StateId| vec![Entry::State(x); c.width()];
    let reachable_from = |v: u32| {
        let mut seen = BTreeSet::from([v]);
        let mut q = VecDeque::from([v]);
        while let Some(u) = q.pop_front() {
            for e in c.edges(u) {
                if seen.insert(e.target) {
                    q.push_back(e.target);
                }
            }
        }
        seen
    };
    let mut out = Vec::new();
    if s.initial().is_empty() {
        return out;
    }
    for _ in 0..samples {
        let mut x = s.initial()[rng.gen_range(0..s.initial().len())];
        let Some(mut v) = c.find(&diag(x)) else {
            out.push(format!("initial diagonal ({}) missing", s.state_name(x)));
            continue;
        };
        for _ in 0..len {
            let succ = s.successors(x);
            if succ.is_empty() {
                break;
            }
            let (_, y) = succ[rng.gen_range(0..succ.len())];
            match c.find(&diag(y)) {
                Some(w) if reachable_from(v).contains(&w) => {
                    v = w;
                    x = y;
                }
                _ => {
                    out.push(format!("diagonal ({}) not reachable from ({})", s.state_name(y), s.state_name(x)));
                    break;
                }
            }
        }
    }
    out
}
