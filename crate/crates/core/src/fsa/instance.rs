use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{EventId, Fsa, FsaParts, LabelId, Observer, ObserverError, ObserverSet, StateId};
use super::{DIAMOND, EPSILON};

/// On-disk instance description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawInstance {
    pub states: Vec<String>,
    pub initial: Vec<String>,
    pub events: Vec<RawEvent>,
    pub transitions: Vec<(String, String, String)>,
    #[serde(default)]
    pub observers: Vec<RawObserver>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub faulty: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub controllable: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawEvent {
    pub name: String,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawObserver {
    pub name: String,
    pub observes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateState(String),
    DuplicateEvent(String),
    DuplicateObserver(String),
    ReservedName(String),
    UnknownInitial(String),
    UnknownTransitionState { transition: usize, state: String },
    UnknownTransitionEvent { transition: usize, event: String },
    UnknownObservedEvent { observer: String, event: String },
    UnknownFaultyEvent(String),
    UnknownControllableEvent(String),
    TooManyObservers(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateState(s) => write!(f, "duplicate state `{s}`"),
            Violation::DuplicateEvent(e) => write!(f, "duplicate event `{e}`"),
            Violation::DuplicateObserver(o) => write!(f, "duplicate observer `{o}`"),
            Violation::ReservedName(n) => write!(f, "`{n}` is a reserved token"),
            Violation::UnknownInitial(s) => write!(f, "initial state `{s}` is not declared"),
            Violation::UnknownTransitionState { transition, state } => {
                write!(f, "transition #{transition} references undeclared state `{state}`")
            }
            Violation::UnknownTransitionEvent { transition, event } => {
                write!(f, "transition #{transition} references undeclared event `{event}`")
            }
            Violation::UnknownObservedEvent { observer, event } => {
                write!(f, "observer `{observer}` observes undeclared event `{event}`")
            }
            Violation::UnknownFaultyEvent(e) => write!(f, "faulty event `{e}` is not declared"),
            Violation::UnknownControllableEvent(e) => {
                write!(f, "controllable event `{e}` is not declared")
            }
            Violation::TooManyObservers(n) => write!(f, "{n} observers exceed the supported maximum"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("malformed instance: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid instance: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("instance declares no observers")]
    NoObservers,
    #[error(transparent)]
    Observer(#[from] ObserverError),
}

fn join(vs: &[Violation]) -> String {
    vs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// A validated FSA plus its observers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub fsa: Fsa,
    pub observers: Option<ObserverSet>,
    /// Non-fatal findings, e.g. observers listing unobservable events.
    pub warnings: Vec<String>,
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Instance, InstanceError> {
        let raw: RawInstance = serde_json::from_str(text)?;
        raw.validate()
    }

    pub fn observers(&self) -> Result<&ObserverSet, InstanceError> {
        self.observers.as_ref().ok_or(InstanceError::NoObservers)
    }

    pub fn to_raw(&self) -> RawInstance {
        RawInstance::from_fsa(&self.fsa, self.observers.as_ref())
    }
}

fn reserved(name: &str) -> bool {
    name == DIAMOND || name == EPSILON
}

impl RawInstance {
    pub fn validate(&self) -> Result<Instance, InstanceError> {
        let mut violations = Vec::new();
        let mut warnings = Vec::new();

        let mut state_ix: HashMap<&str, StateId> = HashMap::new();
        for s in &self.states {
            if reserved(s) {
                violations.push(Violation::ReservedName(s.clone()));
            }
            if state_ix.contains_key(s.as_str()) {
                violations.push(Violation::DuplicateState(s.clone()));
            } else {
                state_ix.insert(s, StateId(state_ix.len() as u32));
            }
        }

        let mut event_ix: HashMap<&str, EventId> = HashMap::new();
        let mut labels: Vec<String> = Vec::new();
        let mut event_label = Vec::new();
        for ev in &self.events {
            if reserved(&ev.name) {
                violations.push(Violation::ReservedName(ev.name.clone()));
            }
            if let Some(l) = &ev.label {
                if reserved(l) {
                    violations.push(Violation::ReservedName(l.clone()));
                }
            }
            if event_ix.contains_key(ev.name.as_str()) {
                violations.push(Violation::DuplicateEvent(ev.name.clone()));
                continue;
            }
            event_ix.insert(&ev.name, EventId(event_ix.len() as u32));
            event_label.push(ev.label.as_ref().map(|l| {
                let i = labels.iter().position(|x| x == l).unwrap_or_else(|| {
                    labels.push(l.clone());
                    labels.len() - 1
                });
                LabelId(i as u32)
            }));
        }

        let mut initial = Vec::new();
        for s in &self.initial {
            match state_ix.get(s.as_str()) {
                Some(&x) => initial.push(x),
                None => violations.push(Violation::UnknownInitial(s.clone())),
            }
        }

        let mut out = vec![Vec::new(); state_ix.len()];
        for (i, (src, ev, dst)) in self.transitions.iter().enumerate() {
            let x = state_ix.get(src.as_str()).copied();
            let e = event_ix.get(ev.as_str()).copied();
            let y = state_ix.get(dst.as_str()).copied();
            for (name, id) in [(src, x), (dst, y)] {
                if id.is_none() {
                    violations.push(Violation::UnknownTransitionState { transition: i, state: name.clone() });
                }
            }
            if e.is_none() {
                violations.push(Violation::UnknownTransitionEvent { transition: i, event: ev.clone() });
            }
            if let (Some(x), Some(e), Some(y)) = (x, e, y) {
                out[x.index()].push((e, y));
            }
        }

        let mut faulty = vec![false; event_ix.len()];
        for f in &self.faulty {
            match event_ix.get(f.as_str()) {
                Some(e) => faulty[e.index()] = true,
                None => violations.push(Violation::UnknownFaultyEvent(f.clone())),
            }
        }
        let mut controllable = vec![false; event_ix.len()];
        for c in &self.controllable {
            match event_ix.get(c.as_str()) {
                Some(e) => controllable[e.index()] = true,
                None => violations.push(Violation::UnknownControllableEvent(c.clone())),
            }
        }

        let mut observers = Vec::new();
        let mut seen_obs = HashSet::new();
        for o in &self.observers {
            if !seen_obs.insert(o.name.as_str()) {
                violations.push(Violation::DuplicateObserver(o.name.clone()));
            }
            let mut events = Vec::new();
            for ev in &o.observes {
                match event_ix.get(ev.as_str()) {
                    Some(&e) => {
                        if event_label[e.index()].is_none() {
                            warnings.push(format!(
                                "observer `{}` lists unobservable event `{ev}`; it stays invisible",
                                o.name
                            ));
                        }
                        events.push(e);
                    }
                    None => {
                        violations.push(Violation::UnknownObservedEvent { observer: o.name.clone(), event: ev.clone() })
                    }
                }
            }
            observers.push(Observer { name: o.name.clone(), events });
        }
        if observers.len() > super::MAX_OBSERVERS {
            violations.push(Violation::TooManyObservers(observers.len()));
        }

        if !violations.is_empty() {
            return Err(InstanceError::Invalid(violations));
        }

        let mut states = vec![String::new(); state_ix.len()];
        for (name, id) in &state_ix {
            states[id.index()] = name.to_string();
        }
        let mut events = vec![String::new(); event_ix.len()];
        for (name, id) in &event_ix {
            events[id.index()] = name.to_string();
        }
        let fsa = Fsa::from_parts(FsaParts { states, events, labels, event_label, initial, out, faulty, controllable });
        let observers = if observers.is_empty() { None } else { Some(ObserverSet::new(observers)?) };
        Ok(Instance { fsa, observers, warnings })
    }

    pub fn from_fsa(fsa: &Fsa, observers: Option<&ObserverSet>) -> RawInstance {
        RawInstance {
            states: fsa.state_ids().map(|x| fsa.state_name(x).to_string()).collect(),
            initial: fsa.state_names(fsa.initial().iter().copied()),
            events: fsa
                .event_ids()
                .map(|e| RawEvent {
                    name: fsa.event_name(e).to_string(),
                    label: fsa.label(e).map(|l| fsa.label_name(l).to_string()),
                })
                .collect(),
            transitions: fsa
                .transitions()
                .map(|(x, e, y)| {
                    (fsa.state_name(x).to_string(), fsa.event_name(e).to_string(), fsa.state_name(y).to_string())
                })
                .collect(),
            observers: observers
                .map(|os| {
                    os.observers()
                        .iter()
                        .map(|o| RawObserver {
                            name: o.name.clone(),
                            observes: fsa.event_names(o.events.iter().copied()),
                        })
                        .collect()
                })
                .unwrap_or_default(),
            faulty: fsa.event_names(fsa.faulty_events()),
            controllable: fsa.event_names(fsa.event_ids().filter(|&e| fsa.is_controllable(e))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = r#"{
        "states": ["x0", "x1", "x2", "x3", "x4"],
        "initial": ["x0"],
        "events": [
            {"name": "a", "label": "a"}, {"name": "b", "label": "b"},
            {"name": "c", "label": "c"}, {"name": "d", "label": "d"}
        ],
        "transitions": [
            ["x0", "a", "x1"], ["x0", "a", "x2"], ["x1", "c", "x3"], ["x1", "c", "x4"],
            ["x1", "b", "x1"], ["x2", "b", "x2"], ["x3", "d", "x3"], ["x4", "d", "x4"]
        ],
        "observers": [
            {"name": "O1", "observes": ["a", "b", "c"]},
            {"name": "O2", "observes": ["a", "b", "d"]}
        ]
    }"#;

    #[test]
    fn parses_branching() {
        let inst = Instance::from_json(FIG1).unwrap();
        assert_eq!(inst.fsa.num_states(), 5);
        assert_eq!(inst.fsa.num_events(), 4);
        assert!(inst.fsa.event_ids().all(|e| inst.fsa.is_observable(e)));
        assert_eq!(inst.observers().unwrap().len(), 2);
        assert!(inst.warnings.is_empty());
        assert_eq!(inst, crate::catalog::branching());
    }

    #[test]
    fn round_trips_through_raw() {
        let inst = Instance::from_json(FIG1).unwrap();
        let again = inst.to_raw().validate().unwrap();
        assert_eq!(inst, again);
    }

    #[test]
    fn dangling_transition_is_reported() {
        let text = r#"{"states": [], "initial": [], "events": [{"name": "a", "label": "a"}],
            "transitions": [["p", "a", "q"]]}"#;
        match Instance::from_json(text) {
            Err(InstanceError::Invalid(vs)) => {
                assert!(vs.iter().any(|v| matches!(v, Violation::UnknownTransitionState { .. })));
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn observer_with_unknown_event_is_named() {
        let text = r#"{"states": ["p"], "initial": ["p"], "events": [{"name": "a", "label": "a"}],
            "transitions": [], "observers": [{"name": "left", "observes": ["zz"]}]}"#;
        let err = Instance::from_json(text).unwrap_err();
        assert!(err.to_string().contains("left"), "{err}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"states": [], "initial": [], "events": [], "transitions": [], "extra": 1}"#;
        assert!(matches!(Instance::from_json(text), Err(InstanceError::Parse(_))));
    }

    #[test]
    fn duplicates_and_reserved_names() {
        let text = r#"{"states": ["p", "p", "⋄"], "initial": [], "events": [{"name": "a", "label": "ε"}],
            "transitions": []}"#;
        let Err(InstanceError::Invalid(vs)) = Instance::from_json(text) else { panic!() };
        assert!(vs.contains(&Violation::DuplicateState("p".into())));
        assert!(vs.contains(&Violation::ReservedName("⋄".into())));
        assert!(vs.contains(&Violation::ReservedName("ε".into())));
    }

    #[test]
    fn unobservable_observed_event_warns() {
        let text = r#"{"states": ["p"], "initial": ["p"], "events": [{"name": "u", "label": null}],
            "transitions": [["p", "u", "p"]], "observers": [{"name": "o", "observes": ["u"]}]}"#;
        let inst = Instance::from_json(text).unwrap();
        assert_eq!(inst.warnings.len(), 1);
        let lab = inst.observers().unwrap().labeling(&inst.fsa, 1).unwrap();
        assert_eq!(lab.label(EventId(0)), None);
    }
}
