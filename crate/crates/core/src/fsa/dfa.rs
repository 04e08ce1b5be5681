use std::collections::HashMap;

use serde::{Deserialize, Serialize};

/// On-disk DFA description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDfa {
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub initial: String,
    pub accepting: Vec<String>,
    pub transitions: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DfaError {
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("duplicate letter `{0}`")]
    DuplicateLetter(String),
    #[error("undeclared state `{0}`")]
    UnknownState(String),
    #[error("undeclared letter `{0}`")]
    UnknownLetter(String),
    #[error("state `{state}` has two `{letter}` transitions")]
    Nondeterministic { state: String, letter: String },
    #[error("DFA has no states")]
    NoStates,
}

/// A deterministic automaton `(Q, Σ, δ, q0, F)` with a partial transition map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    states: Vec<String>,
    alphabet: Vec<String>,
    delta: Vec<Vec<Option<usize>>>,
    initial: usize,
    accepting: Vec<bool>,
    acyclic: bool,
    complete: bool,
}

impl Dfa {
    pub fn from_raw(raw: &RawDfa) -> Result<Dfa, DfaError> {
        let mut sx = HashMap::new();
        for s in &raw.states {
            if sx.insert(s.as_str(), sx.len()).is_some() {
                return Err(DfaError::DuplicateState(s.clone()));
            }
        }
        let mut ax = HashMap::new();
        for a in &raw.alphabet {
            if ax.insert(a.as_str(), ax.len()).is_some() {
                return Err(DfaError::DuplicateLetter(a.clone()));
            }
        }
        if raw.states.is_empty() {
            return Err(DfaError::NoStates);
        }
        let state = |s: &String| sx.get(s.as_str()).copied().ok_or_else(|| DfaError::UnknownState(s.clone()));
        let initial = state(&raw.initial)?;
        let mut accepting = vec![false; raw.states.len()];
        for f in &raw.accepting {
            accepting[state(f)?] = true;
        }
        let mut delta = vec![vec![None; raw.alphabet.len()]; raw.states.len()];
        for (p, a, q) in &raw.transitions {
            let (p_ix, q_ix) = (state(p)?, state(q)?);
            let a_ix = *ax.get(a.as_str()).ok_or_else(|| DfaError::UnknownLetter(a.clone()))?;
            match delta[p_ix][a_ix] {
                Some(old) if old != q_ix => {
                    return Err(DfaError::Nondeterministic { state: p.clone(), letter: a.clone() })
                }
                _ => delta[p_ix][a_ix] = Some(q_ix),
            }
        }
        Ok(Dfa::new(raw.states.clone(), raw.alphabet.clone(), delta, initial, accepting))
    }

    pub(crate) fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        delta: Vec<Vec<Option<usize>>>,
        initial: usize,
        accepting: Vec<bool>,
    ) -> Dfa {
        let complete = delta.iter().all(|row| row.iter().all(Option::is_some));
        let acyclic = is_acyclic(&delta);
        Dfa { states, alphabet, delta, initial, accepting, acyclic, complete }
    }

    pub fn to_raw(&self) -> RawDfa {
        let mut transitions = Vec::new();
        for (p, row) in self.delta.iter().enumerate() {
            for (a, q) in row.iter().enumerate() {
                if let Some(q) = q {
                    transitions.push((self.states[p].clone(), self.alphabet[a].clone(), self.states[*q].clone()));
                }
            }
        }
        RawDfa {
            states: self.states.clone(),
            alphabet: self.alphabet.clone(),
            initial: self.states[self.initial].clone(),
            accepting: (0..self.states.len()).filter(|&q| self.accepting[q]).map(|q| self.states[q].clone()).collect(),
            transitions,
        }
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> Vec<usize> {
        (0..self.states.len()).filter(|&q| self.accepting[q]).collect()
    }

    pub fn next(&self, q: usize, letter: usize) -> Option<usize> {
        self.delta[q][letter]
    }

    pub fn letter(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|a| a == name)
    }

    pub fn is_acyclic(&self) -> bool {
        self.acyclic
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn run(&self, word: &[usize]) -> Option<usize> {
        word.iter().try_fold(self.initial, |q, &a| self.delta[q][a])
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.run(word).is_some_and(|q| self.accepting[q])
    }

    /// Acceptance of a word given by letter names; letters outside the alphabet reject.
    pub fn accepts_names(&self, word: &[&str]) -> bool {
        let ids: Option<Vec<usize>> = word.iter().map(|a| self.letter(a)).collect();
        ids.is_some_and(|w| self.accepts(&w))
    }
}

fn is_acyclic(delta: &[Vec<Option<usize>>]) -> bool {
    let n = delta.len();
    let scc = crate::graph::tarjan(n, |q| delta[q].iter().flatten().copied().collect::<Vec<_>>().into_iter());
    !scc.cyclic_vertices(|q| delta[q].iter().flatten().copied()).into_iter().any(|c| c)
}
