//! Finite-state automata with partially observable, possibly faulty events.

mod builder;
mod dfa;
mod estimate;
mod instance;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

pub use builder::FsaBuilder;
pub use dfa::{Dfa, DfaError, RawDfa};
pub use instance::{Instance, InstanceError, RawEvent, RawInstance, RawObserver, Violation};

/// Token used for the dead marker in every textual rendering.
pub const DIAMOND: &str = "⋄";
/// Token used for the empty event and the empty output.
pub const EPSILON: &str = "ε";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EventId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl LabelId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An FSA `(X, T, X0, δ, Σ, ℓ)` with fault and controllability markings.
///
/// States and events are interned in declaration order; that order drives
/// every deterministic iteration in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fsa {
    states: Vec<String>,
    events: Vec<String>,
    labels: Vec<String>,
    event_label: Vec<Option<LabelId>>,
    initial: Vec<StateId>,
    out: Vec<Vec<(EventId, StateId)>>,
    faulty: Vec<bool>,
    controllable: Vec<bool>,
    state_index: HashMap<String, StateId>,
    event_index: HashMap<String, EventId>,
}

/// Per-event output assignment over the label table of one [`Fsa`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labeling {
    of: Vec<Option<LabelId>>,
}

impl Labeling {
    /// The global observer `ℓ`.
    pub fn global(fsa: &Fsa) -> Self {
        Labeling { of: fsa.event_label.clone() }
    }

    /// `O_i`: `ℓ(t)` on the observed subset, `ε` elsewhere.
    pub fn of_observer(fsa: &Fsa, observer: &Observer) -> Self {
        let mut of = vec![None; fsa.num_events()];
        for &e in &observer.events {
            of[e.index()] = fsa.event_label[e.index()];
        }
        Labeling { of }
    }

    pub fn label(&self, e: EventId) -> Option<LabelId> {
        self.of[e.index()]
    }

    pub fn is_visible(&self, e: EventId) -> bool {
        self.of[e.index()].is_some()
    }

    /// Projection of an event sequence with `ε` erased.
    pub fn project(&self, events: &[EventId]) -> Vec<LabelId> {
        events.iter().filter_map(|&e| self.label(e)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observer {
    pub name: String,
    /// Observed events, sorted and deduplicated.
    pub events: Vec<EventId>,
}

/// An ordered, nonempty list of local observers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObserverSet {
    observers: Vec<Observer>,
}

/// Maximum number of local observers; observer subsets are tracked as `u64` masks.
pub const MAX_OBSERVERS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ObserverError {
    #[error("an observer set needs at least one observer")]
    Empty,
    #[error("at most {MAX_OBSERVERS} observers are supported, got {0}")]
    TooMany(usize),
    #[error("observer index {index} out of range 1..={len}")]
    OutOfRange { index: usize, len: usize },
}

impl ObserverSet {
    pub fn new(mut observers: Vec<Observer>) -> Result<Self, ObserverError> {
        if observers.is_empty() {
            return Err(ObserverError::Empty);
        }
        if observers.len() > MAX_OBSERVERS {
            return Err(ObserverError::TooMany(observers.len()));
        }
        for o in &mut observers {
            o.events.sort();
            o.events.dedup();
        }
        Ok(ObserverSet { observers })
    }

    /// A single observer that sees every observable event, so `O_1 = ℓ`.
    pub fn global(fsa: &Fsa) -> Self {
        let events = fsa.event_ids().filter(|&e| fsa.is_observable(e)).collect();
        ObserverSet { observers: vec![Observer { name: "global".to_string(), events }] }
    }

    pub fn len(&self) -> usize {
        self.observers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observers.is_empty()
    }

    pub fn observers(&self) -> &[Observer] {
        &self.observers
    }

    /// Labeling of observer `i`, counted from 1.
    pub fn labeling(&self, fsa: &Fsa, i: usize) -> Result<Labeling, ObserverError> {
        let o = self.get(i)?;
        Ok(Labeling::of_observer(fsa, o))
    }

    /// Observer `i`, counted from 1.
    pub fn get(&self, i: usize) -> Result<&Observer, ObserverError> {
        if i == 0 || i > self.observers.len() {
            return Err(ObserverError::OutOfRange { index: i, len: self.observers.len() });
        }
        Ok(&self.observers[i - 1])
    }

    /// All labelings in observer order.
    pub fn labelings(&self, fsa: &Fsa) -> Vec<Labeling> {
        self.observers.iter().map(|o| Labeling::of_observer(fsa, o)).collect()
    }

    pub fn with_observer(&self, observer: Observer) -> Result<Self, ObserverError> {
        let mut observers = self.observers.clone();
        observers.push(observer);
        ObserverSet::new(observers)
    }
}

/// A run `x0 t1 x1 ... tn xn`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Run {
    pub start: StateId,
    pub steps: Vec<(EventId, StateId)>,
}

impl Run {
    pub fn new(start: StateId) -> Self {
        Run { start, steps: Vec::new() }
    }

    pub fn end(&self) -> StateId {
        self.steps.last().map_or(self.start, |&(_, x)| x)
    }

    pub fn events(&self) -> Vec<EventId> {
        self.steps.iter().map(|&(e, _)| e).collect()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Assumptions {
    pub deadlock_free: bool,
    pub prompt: bool,
}

impl Fsa {
    pub fn builder() -> FsaBuilder {
        FsaBuilder::default()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_events(&self) -> usize {
        self.events.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.states.len() as u32).map(StateId)
    }

    pub fn event_ids(&self) -> impl Iterator<Item = EventId> + '_ {
        (0..self.events.len() as u32).map(EventId)
    }

    pub fn state_name(&self, x: StateId) -> &str {
        &self.states[x.index()]
    }

    pub fn event_name(&self, e: EventId) -> &str {
        &self.events[e.index()]
    }

    pub fn label_name(&self, l: LabelId) -> &str {
        &self.labels[l.index()]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    pub fn event_id(&self, name: &str) -> Option<EventId> {
        self.event_index.get(name).copied()
    }

    pub fn label_id(&self, name: &str) -> Option<LabelId> {
        self.labels.iter().position(|l| l == name).map(|i| LabelId(i as u32))
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_initial(&self, x: StateId) -> bool {
        self.initial.binary_search(&x).is_ok()
    }

    /// Outgoing `(event, target)` pairs sorted by event then target.
    pub fn successors(&self, x: StateId) -> &[(EventId, StateId)] {
        &self.out[x.index()]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, EventId, StateId)> + '_ {
        self.state_ids().flat_map(move |x| self.out[x.index()].iter().map(move |&(e, y)| (x, e, y)))
    }

    pub fn has_transition(&self, x: StateId, e: EventId, y: StateId) -> bool {
        self.out[x.index()].binary_search(&(e, y)).is_ok()
    }

    pub fn label(&self, e: EventId) -> Option<LabelId> {
        self.event_label[e.index()]
    }

    pub fn is_observable(&self, e: EventId) -> bool {
        self.event_label[e.index()].is_some()
    }

    pub fn is_faulty(&self, e: EventId) -> bool {
        self.faulty[e.index()]
    }

    pub fn is_controllable(&self, e: EventId) -> bool {
        self.controllable[e.index()]
    }

    pub fn faulty_events(&self) -> impl Iterator<Item = EventId> + '_ {
        self.event_ids().filter(|&e| self.is_faulty(e))
    }

    /// The output alphabet `Σ`: labels carried by some event.
    pub fn alphabet(&self) -> Vec<LabelId> {
        let used: BTreeSet<LabelId> = self.event_label.iter().flatten().copied().collect();
        used.into_iter().collect()
    }

    /// Full label table, including labels only used by other labelings.
    pub fn label_table(&self) -> &[String] {
        &self.labels
    }

    pub fn project(&self, events: &[EventId]) -> Vec<LabelId> {
        Labeling::global(self).project(events)
    }

    /// Label names for a projection, as strings.
    pub fn label_names(&self, labels: &[LabelId]) -> Vec<String> {
        labels.iter().map(|&l| self.label_name(l).to_string()).collect()
    }

    pub fn is_run(&self, run: &Run) -> bool {
        let mut x = run.start;
        for &(e, y) in &run.steps {
            if !self.has_transition(x, e, y) {
                return false;
            }
            x = y;
        }
        run.start.index() < self.num_states()
    }

    /// States reachable from the initial set.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue: VecDeque<StateId> = VecDeque::new();
        for &x in &self.initial {
            if !seen[x.index()] {
                seen[x.index()] = true;
                queue.push_back(x);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &(_, y) in self.successors(x) {
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Restriction to states reachable from initial states.
    pub fn accessible_part(&self) -> Fsa {
        let keep = self.reachable();
        self.restrict_states(&keep)
    }

    fn restrict_states(&self, keep: &[bool]) -> Fsa {
        let mut remap = vec![None; self.num_states()];
        let mut states = Vec::new();
        for x in self.state_ids() {
            if keep[x.index()] {
                remap[x.index()] = Some(StateId(states.len() as u32));
                states.push(self.states[x.index()].clone());
            }
        }
        let mut out = vec![Vec::new(); states.len()];
        for (x, e, y) in self.transitions() {
            if let (Some(nx), Some(ny)) = (remap[x.index()], remap[y.index()]) {
                out[nx.index()].push((e, ny));
            }
        }
        let initial = self.initial.iter().filter_map(|x| remap[x.index()]).collect();
        let state_index = index_of(&states, StateId);
        Fsa {
            states,
            events: self.events.clone(),
            labels: self.labels.clone(),
            event_label: self.event_label.clone(),
            initial,
            out,
            faulty: self.faulty.clone(),
            controllable: self.controllable.clone(),
            state_index,
            event_index: self.event_index.clone(),
        }
    }

    /// Same structure with the labeling replaced.
    pub fn relabeled(&self, labeling: &Labeling) -> Fsa {
        let mut s = self.clone();
        s.event_label = labeling.of.clone();
        s
    }

    /// Local automaton `S_i`: `S` with labeling `O_i` (observer counted from 1).
    pub fn local_automaton(&self, observers: &ObserverSet, i: usize) -> Result<Fsa, ObserverError> {
        Ok(self.relabeled(&observers.labeling(self, i)?))
    }

    /// Normal sub-automaton `Sⁿ`: every faulty transition removed.
    pub fn normal_subautomaton(&self) -> Fsa {
        let mut s = self.clone();
        for succ in &mut s.out {
            succ.retain(|&(e, _)| !self.faulty[e.index()]);
        }
        s
    }

    /// `reaches_cycle[x]`: some transition cycle is reachable from `x` (including at `x`).
    pub fn reaches_cycle(&self) -> Vec<bool> {
        let n = self.num_states();
        let scc =
            crate::graph::tarjan(n, |x| self.out[x].iter().map(|&(_, y)| y.index()).collect::<Vec<_>>().into_iter());
        let on_cycle = scc.cyclic_vertices(|x| self.out[x].iter().map(|&(_, y)| y.index()));
        crate::graph::backward_closure(n, &on_cycle, |x| self.out[x].iter().map(|&(_, y)| y.index()))
    }

    /// `on_cycle[x]`: `x` lies on a transition cycle.
    pub fn on_cycle(&self) -> Vec<bool> {
        let n = self.num_states();
        let scc =
            crate::graph::tarjan(n, |x| self.out[x].iter().map(|&(_, y)| y.index()).collect::<Vec<_>>().into_iter());
        scc.cyclic_vertices(|x| self.out[x].iter().map(|&(_, y)| y.index()))
    }

    /// Deadlock and promptness diagnostics over the reachable part.
    pub fn check_assumptions(&self) -> Assumptions {
        let reach = self.reachable();
        let deadlock_free = self.state_ids().all(|x| !reach[x.index()] || !self.out[x.index()].is_empty());
        let n = self.num_states();
        let unobs = |x: usize| {
            self.out[x].iter().filter(|&&(e, _)| !self.is_observable(e)).map(|&(_, y)| y.index()).collect::<Vec<_>>()
        };
        let scc = crate::graph::tarjan(n, |x| unobs(x).into_iter());
        let cyclic = scc.cyclic_vertices(|x| unobs(x).into_iter());
        let prompt = !(0..n).any(|x| reach[x] && cyclic[x]);
        Assumptions { deadlock_free, prompt }
    }

    /// Whether `L^ω(S)` is nonempty.
    pub fn has_infinite_runs(&self) -> bool {
        let reach = self.reachable();
        let rc = self.reaches_cycle();
        (0..self.num_states()).any(|x| reach[x] && rc[x])
    }

    /// Resolve a run given by state and event names.
    pub fn run_from_names(&self, start: &str, steps: &[(&str, &str)]) -> Option<Run> {
        let mut run = Run::new(self.state_id(start)?);
        for &(e, y) in steps {
            run.steps.push((self.event_id(e)?, self.state_id(y)?));
        }
        Some(run)
    }

    pub fn events_from_names(&self, names: &[&str]) -> Option<Vec<EventId>> {
        names.iter().map(|n| self.event_id(n)).collect()
    }

    pub fn state_names(&self, xs: impl IntoIterator<Item = StateId>) -> Vec<String> {
        xs.into_iter().map(|x| self.state_name(x).to_string()).collect()
    }

    pub fn event_names(&self, es: impl IntoIterator<Item = EventId>) -> Vec<String> {
        es.into_iter().map(|e| self.event_name(e).to_string()).collect()
    }

    pub(crate) fn from_parts(parts: FsaParts) -> Fsa {
        let FsaParts { states, events, labels, event_label, mut initial, mut out, faulty, controllable } = parts;
        initial.sort();
        initial.dedup();
        for succ in &mut out {
            succ.sort();
            succ.dedup();
        }
        let state_index = index_of(&states, StateId);
        let event_index = index_of(&events, EventId);
        Fsa { states, events, labels, event_label, initial, out, faulty, controllable, state_index, event_index }
    }
}

pub(crate) struct FsaParts {
    pub states: Vec<String>,
    pub events: Vec<String>,
    pub labels: Vec<String>,
    pub event_label: Vec<Option<LabelId>>,
    pub initial: Vec<StateId>,
    pub out: Vec<Vec<(EventId, StateId)>>,
    pub faulty: Vec<bool>,
    pub controllable: Vec<bool>,
}

fn index_of<T: Copy>(names: &[String], wrap: impl Fn(u32) -> T) -> HashMap<String, T> {
    names.iter().enumerate().map(|(i, n)| (n.clone(), wrap(i as u32))).collect()
}

impl fmt::Display for Fsa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FSA with {} states, {} events, {} transitions",
            self.num_states(),
            self.num_events(),
            self.num_transitions()
        )
    }
}
