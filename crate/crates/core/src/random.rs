//! Seeded generators for automata, DFA families and digraphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::fsa::{Dfa, Instance, RawEvent, RawInstance, RawObserver};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size and density parameters of [`random_instance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shape {
    pub min_states: usize,
    pub max_states: usize,
    pub max_events: usize,
    pub max_initial: usize,
    /// Expected number of outgoing transitions per state.
    pub out_degree: f64,
    pub observable: f64,
    pub faulty: f64,
    /// Number of distinct labels observable events draw from.
    pub labels: usize,
    pub max_observers: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            min_states: 1,
            max_states: 5,
            max_events: 5,
            max_initial: 2,
            out_degree: 1.6,
            observable: 0.6,
            faulty: 0.25,
            labels: 3,
            max_observers: 2,
        }
    }
}

/// An instance with between `min_states` and `max_states` states, between 1 and `max_observers`
/// observers, each seeing a random subset of the observable events.
pub fn random_instance<R: Rng>(rng: &mut R, shape: &Shape) -> Instance {
    let n = rng.gen_range(shape.min_states.max(1)..=shape.max_states.max(shape.min_states).max(1));
    let m = rng.gen_range(1..=shape.max_events);
    let states: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let events: Vec<RawEvent> = (0..m)
        .map(|i| RawEvent {
            name: format!("e{i}"),
            label: rng.gen_bool(shape.observable).then(|| format!("l{}", rng.gen_range(0..shape.labels.max(1)))),
        })
        .collect();
    let k = rng.gen_range(1..=shape.max_initial.clamp(1, n));
    let mut initial = states.clone();
    initial.shuffle(rng);
    initial.truncate(k);
    initial.sort();
    let p = (shape.out_degree / m as f64 / n as f64).min(1.0);
    let mut transitions = Vec::new();
    for x in &states {
        for e in &events {
            for y in &states {
                if rng.gen_bool(p) {
                    transitions.push((x.clone(), e.name.clone(), y.clone()));
                }
            }
        }
    }
    let faulty = events.iter().filter(|_| rng.gen_bool(shape.faulty)).map(|e| e.name.clone()).collect();
    let observable: Vec<&RawEvent> = events.iter().filter(|e| e.label.is_some()).collect();
    let l = rng.gen_range(1..=shape.max_observers.max(1));
    let observers = (1..=l)
        .map(|i| RawObserver {
            name: format!("O{i}"),
            observes: observable.iter().filter(|_| rng.gen_bool(0.6)).map(|e| e.name.clone()).collect(),
        })
        .collect();
    RawInstance { states, initial, events, transitions, observers, faulty, controllable: vec![] }
        .validate()
        .expect("generated instance is valid")
}

/// Same instance with its observers replaced by `l` random ones.
pub fn with_random_observers<R: Rng>(rng: &mut R, inst: &Instance, l: usize) -> Instance {
    let mut raw = inst.to_raw();
    let observable: Vec<String> = raw.events.iter().filter(|e| e.label.is_some()).map(|e| e.name.clone()).collect();
    raw.observers = (1..=l)
        .map(|i| RawObserver {
            name: format!("O{i}"),
            observes: observable.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect(),
        })
        .collect();
    raw.validate().expect("generated instance is valid")
}

fn letters(alphabet: usize) -> Vec<String> {
    (0..alphabet).map(|i| char::from(b'a' + (i % 26) as u8).to_string()).collect()
}

fn dfa_states(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("q{i}")).collect()
}

/// Acyclic DFA: transitions only go to higher-numbered states.
pub fn random_acyclic_dfa<R: Rng>(rng: &mut R, states: usize, alphabet: usize) -> Dfa {
    let n = states.max(1);
    let mut delta = vec![vec![None; alphabet]; n];
    for (p, row) in delta.iter_mut().enumerate() {
        for slot in row.iter_mut() {
            if p + 1 < n && rng.gen_bool(0.6) {
                *slot = Some(rng.gen_range(p + 1..n));
            }
        }
    }
    let accepting = (0..n).map(|_| rng.gen_bool(0.4)).collect();
    Dfa::new(dfa_states(n), letters(alphabet), delta, 0, accepting)
}

/// Complete DFA over `alphabet` letters.
pub fn random_complete_dfa<R: Rng>(rng: &mut R, states: usize, alphabet: usize) -> Dfa {
    let n = states.max(1);
    let delta = (0..n).map(|_| (0..alphabet).map(|_| Some(rng.gen_range(0..n))).collect()).collect();
    let accepting = (0..n).map(|_| rng.gen_bool(0.4)).collect();
    Dfa::new(dfa_states(n), letters(alphabet), delta, 0, accepting)
}

/// Directed graph on named vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Digraph {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl Digraph {
    /// Whether `t` is reachable from `s` (including `s = t`).
    pub fn reaches(&self, s: &str, t: &str) -> bool {
        let mut seen = vec![s.to_string()];
        let mut stack = vec![s.to_string()];
        while let Some(v) = stack.pop() {
            if v == t {
                return true;
            }
            for (a, b) in &self.edges {
                if *a == v && !seen.contains(b) {
                    seen.push(b.clone());
                    stack.push(b.clone());
                }
            }
        }
        false
    }
}

pub fn random_digraph<R: Rng>(rng: &mut R, vertices: usize, p: f64) -> Digraph {
    let vs: Vec<String> = (0..vertices).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for a in &vs {
        for b in &vs {
            if rng.gen_bool(p) {
                edges.push((a.clone(), b.clone()));
            }
        }
    }
    Digraph { vertices: vs, edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_reproducible() {
        let a = random_instance(&mut rng(7), &Shape::default());
        let b = random_instance(&mut rng(7), &Shape::default());
        assert_eq!(a.to_raw(), b.to_raw());
    }

    #[test]
    fn dfa_shapes() {
        let mut r = rng(1);
        for _ in 0..50 {
            assert!(random_acyclic_dfa(&mut r, 4, 2).is_acyclic());
            assert!(random_complete_dfa(&mut r, 3, 2).is_complete());
        }
    }

    #[test]
    fn digraph_reachability() {
        let g = Digraph { vertices: vec!["a".into(), "b".into()], edges: vec![("a".into(), "b".into())] };
        assert!(g.reaches("a", "b"));
        assert!(!g.reaches("b", "a"));
        assert!(g.reaches("b", "b"));
    }
}
