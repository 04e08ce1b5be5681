use std::collections::HashSet;

use super::GadgetError;
use crate::fsa::Dfa;

/// `base` with `#` prepended until it avoids every name in `taken`.
pub(crate) fn fresh(base: &str, taken: &HashSet<String>) -> String {
    let mut name = format!("#{base}");
    while taken.contains(&name) {
        name.insert(0, '#');
    }
    name
}

pub(crate) fn common_alphabet(dfas: &[Dfa]) -> Result<Vec<String>, GadgetError> {
    let first = dfas.first().ok_or(GadgetError::NoDfas)?;
    let mut sigma = first.alphabet().to_vec();
    sigma.sort();
    for (i, d) in dfas.iter().enumerate().skip(1) {
        let mut other = d.alphabet().to_vec();
        other.sort();
        if other != sigma {
            return Err(GadgetError::AlphabetMismatch(i));
        }
    }
    Ok(sigma)
}

/// Add a fresh state behind a fresh letter `λ` at each accepting state.
/// The first DFA keeps only the new state accepting; the others accept everywhere.
/// With `loop_others`, the new state of every other DFA gets a `λ` self-loop.
fn add_lambda(dfas: &[Dfa], loop_others: bool) -> Result<Vec<Dfa>, GadgetError> {
    let sigma = common_alphabet(dfas)?;
    let letters: HashSet<String> = sigma.iter().cloned().collect();
    let lambda = fresh("λ", &letters);
    let mut out = Vec::new();
    for (i, d) in dfas.iter().enumerate() {
        let names: HashSet<String> = d.states().iter().cloned().collect();
        let sink = fresh(&format!("⋄{}", i + 1), &names);
        let n = d.num_states();
        let mut alphabet = sigma.clone();
        alphabet.push(lambda.clone());
        let mut delta: Vec<Vec<Option<usize>>> = (0..n)
            .map(|q| {
                let mut row: Vec<Option<usize>> =
                    sigma.iter().map(|a| d.letter(a).and_then(|x| d.next(q, x))).collect();
                row.push(d.is_accepting(q).then_some(n));
                row
            })
            .collect();
        let mut sink_row = vec![None; alphabet.len()];
        if i > 0 && loop_others {
            sink_row[sigma.len()] = Some(n);
        }
        delta.push(sink_row);
        let mut states = d.states().to_vec();
        states.push(sink);
        let accepting = (0..=n).map(|q| i > 0 || q == n).collect();
        out.push(Dfa::new(states, alphabet, delta, d.initial(), accepting));
    }
    Ok(out)
}

/// Acyclic family to one whose first member has a single accepting state and
/// whose other members accept everywhere; `w` is common iff `wλ` is.
pub fn normalize_acyclic_dfas(dfas: &[Dfa]) -> Result<Vec<Dfa>, GadgetError> {
    if let Some(i) = dfas.iter().position(|d| !d.is_acyclic()) {
        return Err(GadgetError::Cyclic(i));
    }
    add_lambda(dfas, false)
}

/// Complete family to one whose first member has a single, deadlocked accepting
/// state and whose other members are deadlock-free and accept everywhere.
pub fn normalize_complete_dfas(dfas: &[Dfa]) -> Result<Vec<Dfa>, GadgetError> {
    if let Some(i) = dfas.iter().position(|d| !d.is_complete()) {
        return Err(GadgetError::Incomplete(i));
    }
    add_lambda(dfas, true)
}
