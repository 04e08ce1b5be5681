//! Composition built by enumerating every candidate event vector and testing
//! the formation rules literally.

use std::collections::{HashMap, VecDeque};

use super::BudgetExceeded;
use crate::composition::{Entry, Move};
use crate::fsa::{EventId, Fsa, StateId};

/// Explicit composition graph.
#[derive(Debug, Clone)]
pub struct NaiveComposition {
    pub states: Vec<Vec<Entry>>,
    pub initial: Vec<usize>,
    /// `(source, moves, target)`.
    pub edges: Vec<(usize, Vec<Move>, usize)>,
    pub out: Vec<Vec<usize>>,
}

impl NaiveComposition {
    pub fn find(&self, v: &[Entry]) -> Option<usize> {
        self.states.iter().position(|s| s == v)
    }

    pub fn lead(&self, v: usize) -> StateId {
        self.states[v][0].state().expect("entry 0 alive")
    }
}

struct Rules<'a> {
    lead: &'a Fsa,
    comps: &'a [Fsa],
    diamond: bool,
}

impl Rules<'_> {
    fn fsa(&self, j: usize) -> &Fsa {
        if j == 0 {
            self.lead
        } else {
            &self.comps[j - 1]
        }
    }

    /// Label of component `i`'s event of the given name, `None` for `ε` or absence.
    fn label_of(&self, i: usize, name: &str) -> Option<&str> {
        let c = &self.comps[i - 1];
        let e = c.event_id(name)?;
        c.label(e).map(|l| c.label_name(l))
    }

    /// Plain formation rules with tracked entries restricted to `active`.
    fn plain_ok(&self, m: &[Move], active: &[usize]) -> bool {
        match m[0] {
            Move::Kill => false,
            Move::Eps => {
                let movers: Vec<usize> = active.iter().copied().filter(|&j| m[j] != Move::Eps).collect();
                if movers.len() != 1 {
                    return false;
                }
                let j = movers[0];
                match m[j] {
                    Move::Event(e) => self.comps[j - 1].label(e).is_none(),
                    _ => false,
                }
            }
            Move::Event(t0) => {
                let name = self.lead.event_name(t0);
                let seen: Vec<usize> = active.iter().copied().filter(|&i| self.label_of(i, name).is_some()).collect();
                if seen.is_empty() {
                    return active.iter().all(|&j| m[j] == Move::Eps);
                }
                active.iter().all(|&i| {
                    let want = self.label_of(i, name);
                    match (want, m[i]) {
                        (None, Move::Eps) => true,
                        (Some(l), Move::Event(ti)) => {
                            let c = &self.comps[i - 1];
                            c.label(ti).map(|x| c.label_name(x)) == Some(l)
                        }
                        _ => false,
                    }
                })
            }
        }
    }

    fn valid(&self, v: &[Entry], m: &[Move]) -> bool {
        let w = v.len();
        let alive: Vec<usize> = (1..w).filter(|&j| !v[j].is_dead()).collect();
        let killed: Vec<usize> = (1..w).filter(|&j| m[j] == Move::Kill).collect();
        if killed.is_empty() {
            return (1..w).all(|j| !v[j].is_dead() || m[j] == Move::Eps) && self.plain_ok(m, &alive);
        }
        if !self.diamond {
            return false;
        }
        let differ: Vec<usize> = (1..w).filter(|&j| v[j] != v[0]).collect();
        if killed != differ {
            return false;
        }
        let agree: Vec<usize> = (1..w).filter(|&j| v[j] == v[0]).collect();
        let all_eps = m[0] == Move::Eps && agree.iter().all(|&j| m[j] == Move::Eps);
        let kills_alive = killed.iter().any(|&j| !v[j].is_dead());
        if all_eps {
            return kills_alive;
        }
        self.plain_ok(m, &agree)
    }

    fn targets(&self, v: &[Entry], m: &[Move]) -> Vec<Vec<Entry>> {
        let mut out: Vec<Vec<Entry>> = vec![Vec::new()];
        for (j, (&e, &mv)) in v.iter().zip(m).enumerate() {
            let options: Vec<Entry> = match mv {
                Move::Eps => vec![e],
                Move::Kill => vec![Entry::Dead],
                Move::Event(t) => match e {
                    Entry::Dead => vec![],
                    Entry::State(x) => self
                        .fsa(j)
                        .successors(x)
                        .iter()
                        .filter(|&&(u, _)| u == t)
                        .map(|&(_, y)| Entry::State(y))
                        .collect(),
                },
            };
            out = out
                .into_iter()
                .flat_map(|p| {
                    options.iter().map(move |&o| {
                        let mut p = p.clone();
                        p.push(o);
                        p
                    })
                })
                .collect();
        }
        out
    }
}

fn all_vectors(width: usize, lead_events: usize, comp_events: &[usize]) -> Vec<Vec<Move>> {
    let mut out: Vec<Vec<Move>> = vec![Vec::new()];
    for j in 0..width {
        let mut choices = vec![Move::Eps];
        if j > 0 {
            choices.push(Move::Kill);
        }
        let n = if j == 0 { lead_events } else { comp_events[j - 1] };
        choices.extend((0..n).map(|e| Move::Event(EventId(e as u32))));
        out = out
            .into_iter()
            .flat_map(|p| {
                choices.iter().map(move |&c| {
                    let mut p = p.clone();
                    p.push(c);
                    p
                })
            })
            .collect();
    }
    out
}

/// Accessible part of the composition of `lead` with `comps`, `diamond` enabling kills.
pub fn naive_composition(
    lead: &Fsa,
    comps: &[Fsa],
    diamond: bool,
    max_states: usize,
) -> Result<NaiveComposition, BudgetExceeded> {
    let rules = Rules { lead, comps, diamond };
    let width = comps.len() + 1;
    let vectors = all_vectors(width, lead.num_events(), &comps.iter().map(Fsa::num_events).collect::<Vec<_>>());
    let mut ids: HashMap<Vec<Entry>, usize> = HashMap::new();
    let mut g = NaiveComposition { states: vec![], initial: vec![], edges: vec![], out: vec![] };
    let mut queue = VecDeque::new();

    let mut inits: Vec<Vec<Entry>> = vec![Vec::new()];
    for j in 0..width {
        inits = inits
            .into_iter()
            .flat_map(|p| {
                rules.fsa(j).initial().iter().map(move |&x| {
                    let mut p = p.clone();
                    p.push(Entry::State(x));
                    p
                })
            })
            .collect();
    }
    let mut intern =
        |v: Vec<Entry>, g: &mut NaiveComposition, q: &mut VecDeque<usize>| -> Result<usize, BudgetExceeded> {
            if let Some(&i) = ids.get(&v) {
                return Ok(i);
            }
            if g.states.len() >= max_states {
                return Err(BudgetExceeded::States(max_states));
            }
            let i = g.states.len();
            ids.insert(v.clone(), i);
            g.states.push(v);
            g.out.push(Vec::new());
            q.push_back(i);
            Ok(i)
        };
    for v in inits {
        let i = intern(v, &mut g, &mut queue)?;
        if !g.initial.contains(&i) {
            g.initial.push(i);
        }
    }
    while let Some(u) = queue.pop_front() {
        let v = g.states[u].clone();
        for m in &vectors {
            if !rules.valid(&v, m) {
                continue;
            }
            for t in rules.targets(&v, m) {
                let w = intern(t, &mut g, &mut queue)?;
                g.out[u].push(g.edges.len());
                g.edges.push((u, m.clone(), w));
            }
        }
    }
    Ok(g)
}
