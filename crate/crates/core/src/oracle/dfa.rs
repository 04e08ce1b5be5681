use std::collections::{HashMap, VecDeque};

use crate::fsa::Dfa;

fn letters(dfas: &[Dfa]) -> Vec<String> {
    let mut all: Vec<String> = dfas.iter().flat_map(|d| d.alphabet().iter().cloned()).collect();
    all.sort();
    all.dedup();
    all
}

fn step(dfas: &[Dfa], states: &[usize], letter: &str) -> Option<Vec<usize>> {
    dfas.iter().zip(states).map(|(d, &q)| d.letter(letter).and_then(|a| d.next(q, a))).collect()
}

fn accepting(dfas: &[Dfa], states: &[usize]) -> bool {
    dfas.iter().zip(states).all(|(d, &q)| d.is_accepting(q))
}

/// Shortlex-least word of length at most `bound` accepted by every DFA,
/// found by enumerating words length by length.
pub fn brute_force_dfa_intersection(dfas: &[Dfa], bound: usize) -> Option<Vec<String>> {
    let sigma = letters(dfas);
    let init: Vec<usize> = dfas.iter().map(Dfa::initial).collect();
    for len in 0..=bound {
        // Depth-first in letter order, so the first hit is shortlex-least.
        let mut stack: Vec<(Vec<usize>, Vec<usize>)> = vec![(init.clone(), Vec::new())];
        while let Some((states, word)) = stack.pop() {
            if word.len() == len {
                if accepting(dfas, &states) {
                    return Some(word.into_iter().map(|i| sigma[i].clone()).collect());
                }
                continue;
            }
            for i in (0..sigma.len()).rev() {
                if let Some(next) = step(dfas, &states, &sigma[i]) {
                    let mut w = word.clone();
                    w.push(i);
                    stack.push((next, w));
                }
            }
        }
    }
    None
}

/// Shortest word accepted by the product automaton, by breadth-first search.
pub fn dfa_product_nonempty(dfas: &[Dfa]) -> Option<Vec<String>> {
    let sigma = letters(dfas);
    let init: Vec<usize> = dfas.iter().map(Dfa::initial).collect();
    let mut parent: HashMap<Vec<usize>, Option<(Vec<usize>, usize)>> = HashMap::new();
    parent.insert(init.clone(), None);
    let mut queue = VecDeque::from([init]);
    while let Some(q) = queue.pop_front() {
        if accepting(dfas, &q) {
            let mut word = Vec::new();
            let mut cur = q;
            while let Some(Some((p, a))) = parent.get(&cur).cloned() {
                word.push(sigma[a].clone());
                cur = p;
            }
            word.reverse();
            return Some(word);
        }
        for (a, l) in sigma.iter().enumerate() {
            if let Some(r) = step(dfas, &q, l) {
                if !parent.contains_key(&r) {
                    parent.insert(r.clone(), Some((q.clone(), a)));
                    queue.push_back(r);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsa::RawDfa;

    fn dfa(states: &[&str], alphabet: &[&str], accepting: &[&str], delta: &[(&str, &str, &str)]) -> Dfa {
        Dfa::from_raw(&RawDfa {
            states: states.iter().map(|s| s.to_string()).collect(),
            alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
            initial: states[0].to_string(),
            accepting: accepting.iter().map(|s| s.to_string()).collect(),
            transitions: delta.iter().map(|&(p, a, q)| (p.into(), a.into(), q.into())).collect(),
        })
        .unwrap()
    }

    #[test]
    fn forced_word() {
        let d = dfa(&["p", "q", "r"], &["a", "b"], &["r"], &[("p", "a", "q"), ("q", "b", "r")]);
        let w = brute_force_dfa_intersection(&[d.clone(), d.clone()], 3).unwrap();
        assert_eq!(w, ["a", "b"]);
        assert_eq!(dfa_product_nonempty(&[d.clone(), d]).unwrap(), ["a", "b"]);
    }

    #[test]
    fn disjoint_languages() {
        let a = dfa(&["p", "q"], &["a", "b"], &["q"], &[("p", "a", "q")]);
        let b = dfa(&["p", "q"], &["a", "b"], &["q"], &[("p", "b", "q")]);
        assert!(brute_force_dfa_intersection(&[a.clone(), b.clone()], 4).is_none());
        assert!(dfa_product_nonempty(&[a, b]).is_none());
    }
}
