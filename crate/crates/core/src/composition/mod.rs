//! Concurrent composition `CC(S0; S1, …, SL)` and its ⋄-extended variant.

mod export;

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use rustc_hash::FxHashMap;

use crate::fsa::{EventId, Fsa, Labeling, ObserverSet, StateId};

pub use export::{fsa_to_dot, CompositionJson};

/// One entry of a composition state vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Entry {
    State(StateId),
    Dead,
}

impl Entry {
    pub fn state(self) -> Option<StateId> {
        match self {
            Entry::State(x) => Some(x),
            Entry::Dead => None,
        }
    }

    pub fn is_dead(self) -> bool {
        self == Entry::Dead
    }
}

/// One entry of a composition event vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    Event(EventId),
    Eps,
    Kill,
}

impl Move {
    pub fn event(self) -> Option<EventId> {
        match self {
            Move::Event(e) => Some(e),
            _ => None,
        }
    }
}

/// Order on event vectors used for witness selection: entry 0 prefers taking
/// an event, the remaining entries prefer staying put.
pub fn move_order(a: &[Move], b: &[Move]) -> Ordering {
    fn key(i: usize, m: Move) -> (u8, u32) {
        match (i, m) {
            (0, Move::Event(e)) => (0, e.0),
            (0, _) => (1, 0),
            (_, Move::Eps) => (0, 0),
            (_, Move::Event(e)) => (1, e.0),
            (_, Move::Kill) => (2, 0),
        }
    }
    a.iter().enumerate().map(|(i, &m)| key(i, m)).cmp(b.iter().enumerate().map(|(i, &m)| key(i, m)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Plain,
    Diamond,
}

/// Which formation rule produced an event vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Asynchronous,
    Synchronous,
    Kill,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Names {
    title: String,
    states: Vec<String>,
    events: Vec<String>,
}

/// A materialized composition restricted to its accessible part.
///
/// States are numbered in breadth-first discovery order from the sorted
/// initial vectors; successors of each state are sorted by [`move_order`]
/// and then by target vector.
#[derive(Debug, Clone)]
pub struct Composition {
    kind: Kind,
    width: usize,
    entries: Vec<Entry>,
    index: FxHashMap<Box<[Entry]>, u32>,
    initial: Vec<u32>,
    edge_start: Vec<usize>,
    targets: Vec<u32>,
    moves: Vec<Move>,
    rules: Vec<Rule>,
    names: Vec<Names>,
}

/// A borrowed transition of a composition.
#[derive(Debug, Clone, Copy)]
pub struct Edge<'a> {
    pub id: usize,
    pub moves: &'a [Move],
    pub target: u32,
    pub rule: Rule,
}

impl Composition {
    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Vector length `L + 1`.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn num_components(&self) -> usize {
        self.width - 1
    }

    pub fn num_states(&self) -> usize {
        self.edge_start.len() - 1
    }

    pub fn num_transitions(&self) -> usize {
        self.targets.len()
    }

    pub fn state(&self, v: u32) -> &[Entry] {
        let w = self.width;
        &self.entries[v as usize * w..(v as usize + 1) * w]
    }

    pub fn find(&self, entries: &[Entry]) -> Option<u32> {
        self.index.get(entries).copied()
    }

    pub fn initial(&self) -> &[u32] {
        &self.initial
    }

    pub fn is_initial(&self, v: u32) -> bool {
        self.initial.contains(&v)
    }

    pub fn edges(&self, v: u32) -> impl Iterator<Item = Edge<'_>> + '_ {
        let (lo, hi) = (self.edge_start[v as usize], self.edge_start[v as usize + 1]);
        (lo..hi).map(move |id| self.edge(id))
    }

    pub fn edge_range(&self, v: u32) -> std::ops::Range<usize> {
        self.edge_start[v as usize]..self.edge_start[v as usize + 1]
    }

    pub fn edge(&self, id: usize) -> Edge<'_> {
        Edge {
            id,
            moves: &self.moves[id * self.width..(id + 1) * self.width],
            target: self.targets[id],
            rule: self.rules[id],
        }
    }

    pub fn edge_source(&self, id: usize) -> u32 {
        (self.edge_start.partition_point(|&s| s <= id) - 1) as u32
    }

    pub fn successors(&self, v: u32) -> impl Iterator<Item = usize> + '_ {
        let (lo, hi) = (self.edge_start[v as usize], self.edge_start[v as usize + 1]);
        self.targets[lo..hi].iter().map(|&t| t as usize)
    }

    pub fn is_alive(&self, v: u32, j: usize) -> bool {
        !self.state(v)[j].is_dead()
    }

    /// Entry 0 as a state of the lead automaton.
    pub fn lead(&self, v: u32) -> StateId {
        self.state(v)[0].state().expect("entry 0 is never dead")
    }

    pub fn all_dead(&self, v: u32) -> bool {
        self.state(v)[1..].iter().all(|e| e.is_dead())
    }

    /// Title of component `i` (0 is the lead).
    pub fn component_title(&self, i: usize) -> &str {
        &self.names[i].title
    }

    pub fn entry_name(&self, i: usize, e: Entry) -> &str {
        match e {
            Entry::State(x) => &self.names[i].states[x.index()],
            Entry::Dead => crate::fsa::DIAMOND,
        }
    }

    pub fn move_name(&self, i: usize, m: Move) -> &str {
        match m {
            Move::Event(e) => &self.names[i].events[e.index()],
            Move::Eps => crate::fsa::EPSILON,
            Move::Kill => crate::fsa::DIAMOND,
        }
    }

    /// `x3|⋄|⋄` style rendering.
    pub fn state_label(&self, v: u32) -> String {
        self.render_state(self.state(v))
    }

    pub fn render_state(&self, entries: &[Entry]) -> String {
        entries.iter().enumerate().map(|(i, &e)| self.entry_name(i, e)).collect::<Vec<_>>().join("|")
    }

    pub fn render_moves(&self, moves: &[Move]) -> String {
        moves.iter().enumerate().map(|(i, &m)| self.move_name(i, m)).collect::<Vec<_>>().join("|")
    }

    /// Locate a state vector given by entry names (`"⋄"` for dead).
    pub fn find_by_names(&self, names: &[&str]) -> Option<u32> {
        if names.len() != self.width {
            return None;
        }
        let mut entries = Vec::with_capacity(self.width);
        for (i, &n) in names.iter().enumerate() {
            if n == crate::fsa::DIAMOND {
                entries.push(Entry::Dead);
            } else {
                let x = self.names[i].states.iter().position(|s| s == n)?;
                entries.push(Entry::State(StateId(x as u32)));
            }
        }
        self.find(&entries)
    }

    /// Find the edge from `v` with moves given by names (`"ε"`, `"⋄"`) and the given target.
    pub fn find_edge_by_names(&self, v: u32, moves: &[&str], target: u32) -> Option<usize> {
        self.edges(v).find(|e| e.target == target && self.render_moves(e.moves) == moves.join("|")).map(|e| e.id)
    }
}

/// Per-component view used by the generator.
struct Component<'a> {
    fsa: &'a Fsa,
    /// Global label of each own event under this component's labeling.
    own: Vec<Option<u32>>,
    /// `ℓ^i(t0)` for each lead event, `None` when invisible or absent.
    of_lead: Vec<Option<u32>>,
}

struct Generator<'a> {
    lead: &'a Fsa,
    comps: Vec<Component<'a>>,
}

type Successor = (Vec<Move>, Vec<Entry>, Rule);

impl Generator<'_> {
    /// CC moves of the lead plus the components in `active` (bit `l - 1`).
    /// Inactive entries keep their value and take `ε`.
    fn cc_moves(&self, v: &[Entry], active: u64, out: &mut Vec<Successor>) {
        let width = v.len();
        let x0 = v[0].state().expect("entry 0 alive");
        let is_active = |l: usize| active >> (l - 1) & 1 == 1;
        let base_moves = vec![Move::Eps; width];

        for &(e0, y0) in self.lead.successors(x0) {
            let visible: Vec<usize> =
                (1..width).filter(|&l| is_active(l) && self.comps[l - 1].of_lead[e0.index()].is_some()).collect();
            if visible.is_empty() {
                let mut m = base_moves.clone();
                let mut t = v.to_vec();
                m[0] = Move::Event(e0);
                t[0] = Entry::State(y0);
                out.push((m, t, Rule::Asynchronous));
                continue;
            }
            // Rule (b): each visible component picks a label-matching event.
            let mut partial: Vec<(Vec<Move>, Vec<Entry>)> = {
                let mut m = base_moves.clone();
                let mut t = v.to_vec();
                m[0] = Move::Event(e0);
                t[0] = Entry::State(y0);
                vec![(m, t)]
            };
            for &l in &visible {
                let want = self.comps[l - 1].of_lead[e0.index()];
                let xl = v[l].state().expect("active entry alive");
                let options: Vec<(EventId, StateId)> = self.comps[l - 1]
                    .fsa
                    .successors(xl)
                    .iter()
                    .copied()
                    .filter(|&(el, _)| self.comps[l - 1].own[el.index()] == want)
                    .collect();
                let mut next = Vec::with_capacity(partial.len() * options.len());
                for (m, t) in &partial {
                    for &(el, yl) in &options {
                        let mut m = m.clone();
                        let mut t = t.clone();
                        m[l] = Move::Event(el);
                        t[l] = Entry::State(yl);
                        next.push((m, t));
                    }
                }
                partial = next;
                if partial.is_empty() {
                    break;
                }
            }
            out.extend(partial.into_iter().map(|(m, t)| (m, t, Rule::Synchronous)));
        }

        for l in (1..width).filter(|&l| is_active(l)) {
            let c = &self.comps[l - 1];
            let xl = v[l].state().expect("active entry alive");
            for &(el, yl) in c.fsa.successors(xl) {
                if c.own[el.index()].is_none() {
                    let mut m = base_moves.clone();
                    let mut t = v.to_vec();
                    m[l] = Move::Event(el);
                    t[l] = Entry::State(yl);
                    out.push((m, t, Rule::Asynchronous));
                }
            }
        }
    }

    fn alive_mask(v: &[Entry]) -> u64 {
        let mut mask = 0;
        for (l, e) in v.iter().enumerate().skip(1) {
            if !e.is_dead() {
                mask |= 1 << (l - 1);
            }
        }
        mask
    }

    fn plain(&self, v: &[Entry]) -> Vec<Successor> {
        let mut out = Vec::new();
        self.cc_moves(v, Self::alive_mask(v), &mut out);
        out
    }

    fn diamond(&self, v: &[Entry]) -> Vec<Successor> {
        let mut out = Vec::new();
        let alive = Self::alive_mask(v);
        self.cc_moves(v, alive, &mut out);

        // Entries differing from entry 0 (dead ones included) are killed.
        let mut agree = 0u64;
        for l in 1..v.len() {
            if v[l] == v[0] {
                agree |= 1 << (l - 1);
            }
        }
        let differs = (1..v.len()).any(|l| v[l] != v[0]);
        if !differs {
            return out;
        }
        let kill_alive = alive & !agree != 0;
        let mut sub = Vec::new();
        self.cc_moves(v, agree, &mut sub);
        sub.push((vec![Move::Eps; v.len()], v.to_vec(), Rule::Kill));
        for (mut m, mut t, _) in sub {
            for l in 1..v.len() {
                if agree >> (l - 1) & 1 == 0 {
                    m[l] = Move::Kill;
                    t[l] = Entry::Dead;
                }
            }
            let moved = m.iter().any(|x| matches!(x, Move::Event(_)));
            if !kill_alive && !moved {
                continue;
            }
            out.push((m, t, Rule::Kill));
        }
        out
    }
}

#[derive(Default)]
struct LabelInterner {
    ids: HashMap<String, u32>,
}

impl LabelInterner {
    fn id(&mut self, s: &str) -> u32 {
        let n = self.ids.len() as u32;
        *self.ids.entry(s.to_string()).or_insert(n)
    }
}

fn names_of(fsa: &Fsa, title: String) -> Names {
    Names { title, states: fsa.state_names(fsa.state_ids()), events: fsa.event_names(fsa.event_ids()) }
}

fn build(
    kind: Kind,
    lead: &Fsa,
    comps: &[&Fsa],
    titles: Vec<String>,
    limit: Option<usize>,
) -> Result<Composition, CompositionError> {
    let mut labels = LabelInterner::default();
    let components: Vec<Component> = comps
        .iter()
        .map(|c| {
            let own: Vec<Option<u32>> = c.event_ids().map(|e| c.label(e).map(|l| labels.id(c.label_name(l)))).collect();
            let of_lead =
                lead.event_ids().map(|e0| c.event_id(lead.event_name(e0)).and_then(|e| own[e.index()])).collect();
            Component { fsa: c, own, of_lead }
        })
        .collect();
    let gen = Generator { lead, comps: components };
    let width = comps.len() + 1;

    let mut entries: Vec<Entry> = Vec::new();
    let mut index: FxHashMap<Box<[Entry]>, u32> = FxHashMap::default();
    let mut queue = VecDeque::new();
    let mut intern =
        |v: Vec<Entry>, entries: &mut Vec<Entry>, queue: &mut VecDeque<u32>| -> Result<u32, CompositionError> {
            if let Some(&id) = index.get(v.as_slice()) {
                return Ok(id);
            }
            let id = index.len() as u32;
            if limit.is_some_and(|l| id as usize >= l) {
                return Err(CompositionError::TooLarge(limit.unwrap_or(0)));
            }
            entries.extend_from_slice(&v);
            index.insert(v.into_boxed_slice(), id);
            queue.push_back(id);
            Ok(id)
        };

    // Initial vectors in lexicographic order.
    let mut initial = Vec::new();
    let mut inits: Vec<Vec<Entry>> = vec![Vec::new()];
    let all: Vec<&Fsa> = std::iter::once(lead).chain(comps.iter().copied()).collect();
    for f in &all {
        let mut next = Vec::new();
        for prefix in &inits {
            for &x in f.initial() {
                let mut p = prefix.clone();
                p.push(Entry::State(x));
                next.push(p);
            }
        }
        inits = next;
    }
    for v in inits {
        let id = intern(v, &mut entries, &mut queue)?;
        initial.push(id);
    }

    let mut edge_start = vec![0];
    let mut targets = Vec::new();
    let mut moves = Vec::new();
    let mut rules = Vec::new();
    while let Some(v) = queue.pop_front() {
        let state: Vec<Entry> = entries[v as usize * width..(v as usize + 1) * width].to_vec();
        let mut succ = match kind {
            Kind::Plain => gen.plain(&state),
            Kind::Diamond => gen.diamond(&state),
        };
        succ.sort_by(|a, b| move_order(&a.0, &b.0).then_with(|| a.1.cmp(&b.1)));
        succ.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
        for (m, t, r) in succ {
            let id = intern(t, &mut entries, &mut queue)?;
            targets.push(id);
            moves.extend_from_slice(&m);
            rules.push(r);
        }
        edge_start.push(targets.len());
    }

    let names = std::iter::once(lead).chain(comps.iter().copied()).zip(titles).map(|(f, t)| names_of(f, t)).collect();
    Ok(Composition { kind, width, entries, index, initial, edge_start, targets, moves, rules, names })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompositionError {
    #[error("composition exceeds {0} states")]
    TooLarge(usize),
}

/// `CC(S0; S1, …, SL)` over arbitrary component automata.
pub fn concurrent_composition(lead: &Fsa, components: &[&Fsa]) -> Composition {
    let titles = std::iter::once("S0".to_string()).chain((1..=components.len()).map(|i| format!("S{i}"))).collect();
    build(Kind::Plain, lead, components, titles, None).expect("no limit")
}

/// `CC(lead; S1, …, SL)` with each component `S` relabeled by a local observer.
pub fn observer_composition(lead: &Fsa, component_base: &Fsa, labelings: &[Labeling]) -> Composition {
    let comps: Vec<Fsa> = labelings.iter().map(|l| component_base.relabeled(l)).collect();
    let refs: Vec<&Fsa> = comps.iter().collect();
    let titles = std::iter::once("S".to_string()).chain((1..=comps.len()).map(|i| format!("S{i}"))).collect();
    build(Kind::Plain, lead, &refs, titles, None).expect("no limit")
}

/// `CC(S; S1ⁿ, …, SLⁿ)`.
pub fn diagnosis_composition(s: &Fsa, observers: &ObserverSet) -> Composition {
    observer_composition(s, &s.normal_subautomaton(), &observers.labelings(s))
}

/// `CC(Sⁿ; S1ⁿ, …, SLⁿ)`.
pub fn prediction_composition(s: &Fsa, observers: &ObserverSet) -> Composition {
    let n = s.normal_subautomaton();
    observer_composition(&n, &n, &observers.labelings(s))
}

/// `CC^⋄(S; S1, …, SL)`.
pub fn diamond_composition(s: &Fsa, observers: &ObserverSet) -> Composition {
    diamond_with_labelings(s, &observers.labelings(s))
}

pub fn diamond_with_labelings(s: &Fsa, labelings: &[Labeling]) -> Composition {
    try_diamond(s, labelings, None).expect("no limit")
}

/// As [`diamond_with_labelings`], failing once more than `limit` states are interned.
pub fn try_diamond(s: &Fsa, labelings: &[Labeling], limit: Option<usize>) -> Result<Composition, CompositionError> {
    let comps: Vec<Fsa> = labelings.iter().map(|l| s.relabeled(l)).collect();
    let refs: Vec<&Fsa> = comps.iter().collect();
    let titles = std::iter::once("S".to_string()).chain((1..=comps.len()).map(|i| format!("S{i}"))).collect();
    build(Kind::Diamond, s, &refs, titles, limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn edge(c: &Composition, from: &[&str], moves: &[&str], to: &[&str]) -> bool {
        let (Some(v), Some(w)) = (c.find_by_names(from), c.find_by_names(to)) else {
            return false;
        };
        c.find_edge_by_names(v, moves, w).is_some()
    }

    #[test]
    fn diagnosis_composition_synchronizes_on_labels() {
        let inst = catalog::late_fault();
        let c = diagnosis_composition(&inst.fsa, inst.observers().unwrap());
        assert!(edge(&c, &["x0", "x0", "x0"], &["a", "a", "ε"], &["x1", "x2", "x0"]));
        assert!(edge(&c, &["x1", "x2", "x0"], &["ε", "ε", "a"], &["x1", "x2", "x2"]));
        assert!(edge(&c, &["x3", "x4", "x4"], &["f", "ε", "ε"], &["x5", "x4", "x4"]));
        assert!(edge(&c, &["x5", "x4", "x4"], &["u", "ε", "ε"], &["x5", "x4", "x4"]));
    }

    #[test]
    fn empty_product() {
        let s = Fsa::builder().states(["p"]).initial(["p"]).build().unwrap();
        let c = concurrent_composition(&s, &[&s]);
        assert_eq!(c.num_states(), 1);
        assert_eq!(c.num_transitions(), 0);
    }

    #[test]
    fn diamond_contains_kill_steps() {
        let inst = catalog::branching();
        let c = diamond_composition(&inst.fsa, inst.observers().unwrap());
        assert!(edge(&c, &["x3", "x4", "x1"], &["d", "⋄", "⋄"], &["x3", "⋄", "⋄"]));
        assert!(edge(&c, &["x1", "x1", "x3"], &["b", "b", "⋄"], &["x1", "x1", "⋄"]));
        assert!(edge(&c, &["x1", "x1", "x1"], &["b", "b", "b"], &["x1", "x1", "x1"]));
    }

    #[test]
    fn no_kill_from_agreeing_alive_state() {
        let inst = catalog::branching();
        let c = diamond_composition(&inst.fsa, inst.observers().unwrap());
        for v in 0..c.num_states() as u32 {
            let s = c.state(v);
            if s.iter().all(|&e| e == s[0]) {
                assert!(c.edges(v).all(|e| e.rule != Rule::Kill));
            }
        }
    }

    #[test]
    fn ordering_prefers_lead_events_and_idle_components() {
        let e = |i| Move::Event(EventId(i));
        assert_eq!(move_order(&[e(0), e(0), Move::Eps], &[Move::Eps, Move::Eps, e(0)]), Ordering::Less);
        assert_eq!(move_order(&[Move::Eps, Move::Eps, e(0)], &[Move::Eps, e(1), Move::Eps]), Ordering::Less);
        assert_eq!(move_order(&[e(3), Move::Kill], &[Move::Eps, Move::Kill]), Ordering::Less);
    }

    #[test]
    fn successors_are_sorted() {
        let inst = catalog::late_fault();
        let c = diagnosis_composition(&inst.fsa, inst.observers().unwrap());
        for v in 0..c.num_states() as u32 {
            let es: Vec<_> = c.edges(v).collect();
            for w in es.windows(2) {
                let ord =
                    move_order(w[0].moves, w[1].moves).then_with(|| c.state(w[0].target).cmp(c.state(w[1].target)));
                assert_eq!(ord, Ordering::Less);
            }
        }
    }
}
