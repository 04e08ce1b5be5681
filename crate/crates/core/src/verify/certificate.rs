use serde::{Deserialize, Serialize};

use super::Property;
use crate::composition::{Entry, Move};
use crate::fsa::{EventId, Fsa, Run, StateId, DIAMOND, EPSILON};

/// One composition transition, stated by value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Step {
    pub source: Vec<Entry>,
    pub moves: Vec<Move>,
    pub target: Vec<Entry>,
}

/// A composition path from `start`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub start: Vec<Entry>,
    pub steps: Vec<Step>,
}

impl Path {
    pub fn empty(start: Vec<Entry>) -> Self {
        Path { start, steps: Vec::new() }
    }

    pub fn end(&self) -> &[Entry] {
        self.steps.last().map_or(&self.start, |s| &s.target)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Events taken by entry `j`, skipping `ε` and kills.
    pub fn entry_events(&self, j: usize) -> Vec<EventId> {
        self.steps.iter().filter_map(|s| s.moves[j].event()).collect()
    }
}

/// An `S`-level lasso: a finite tail followed by a nonempty cycle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lasso {
    pub start: StateId,
    pub tail: Vec<(EventId, StateId)>,
    pub cycle: Vec<(EventId, StateId)>,
}

impl Lasso {
    pub fn cycle_start(&self) -> StateId {
        self.tail.last().map_or(self.start, |&(_, x)| x)
    }

    /// Tail followed by `k` passes of the cycle, as a run.
    pub fn unroll(&self, k: usize) -> Run {
        let mut run = Run::new(self.start);
        run.steps.extend(self.tail.iter().copied());
        for _ in 0..k {
            run.steps.extend(self.cycle.iter().copied());
        }
        run
    }
}

/// Cycle assigned to a distinct local observer in a detection witness.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Anchor {
    /// Observer index, counted from 1.
    pub observer: usize,
    /// Path from the previous anchor (or the initial vector) to this anchor.
    pub approach: Path,
    /// Closed walk at the anchor with an entry-0 event visible to the observer.
    pub cycle: Path,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Witness {
    /// Sequential observer cycles in the ⋄-composition, then every tracked entry killed.
    Detection { anchors: Vec<Anchor>, finish: Path, plant: Lasso },
    /// Fault on entry 0, then a cycle on which entry 0 keeps moving.
    Diagnosis { prefix: Path, fault: Step, middle: Path, cycle: Path },
    /// Normal prefix ending where a fault is enabled, with normal lassos for every tracked entry.
    Prediction { prefix: Path, fault: (StateId, EventId, StateId), lassos: Vec<Lasso> },
}

/// A violation witness for one property.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Certificate {
    pub property: Property,
    pub witness: Witness,
}

impl Certificate {
    /// Initial composition vector of the witness.
    pub fn start(&self) -> &[Entry] {
        match &self.witness {
            Witness::Detection { anchors, finish, .. } => anchors.first().map_or(&finish.start, |a| &a.approach.start),
            Witness::Diagnosis { prefix, .. } | Witness::Prediction { prefix, .. } => &prefix.start,
        }
    }

    /// Number of tracked entries `L`.
    pub fn width(&self) -> usize {
        self.start().len()
    }

    /// Every composition step cited, in path order, cycles traversed once.
    pub fn steps(&self) -> Vec<&Step> {
        match &self.witness {
            Witness::Detection { anchors, finish, .. } => anchors
                .iter()
                .flat_map(|a| a.approach.steps.iter().chain(&a.cycle.steps))
                .chain(&finish.steps)
                .collect(),
            Witness::Diagnosis { prefix, fault, middle, cycle } => {
                prefix.steps.iter().chain(std::iter::once(fault)).chain(&middle.steps).chain(&cycle.steps).collect()
            }
            Witness::Prediction { prefix, .. } => prefix.steps.iter().collect(),
        }
    }

    /// Every automaton transition cited, deduplicated in first-use order.
    pub fn cited_transitions(&self) -> Vec<(StateId, EventId, StateId)> {
        let mut out = Vec::new();
        let mut push = |t: (StateId, EventId, StateId)| {
            if !out.contains(&t) {
                out.push(t);
            }
        };
        for s in self.steps() {
            for (j, m) in s.moves.iter().enumerate() {
                if let (Move::Event(e), Entry::State(x), Entry::State(y)) = (m, s.source[j], s.target[j]) {
                    push((x, *e, y));
                }
            }
        }
        let lassos: Vec<&Lasso> = match &self.witness {
            Witness::Detection { plant, .. } => vec![plant],
            Witness::Prediction { fault, lassos, .. } => {
                push(*fault);
                lassos.iter().collect()
            }
            Witness::Diagnosis { .. } => vec![],
        };
        for l in lassos {
            let mut x = l.start;
            for &(e, y) in l.tail.iter().chain(&l.cycle) {
                push((x, e, y));
                x = y;
            }
        }
        out
    }

    pub fn to_doc(&self, s: &Fsa) -> CertificateDoc {
        let path = |p: &Path| PathDoc::from_path(p, s);
        let lasso = |l: &Lasso| LassoDoc {
            start: s.state_name(l.start).to_string(),
            tail: l.tail.iter().map(|&(e, x)| (s.event_name(e).into(), s.state_name(x).into())).collect(),
            cycle: l.cycle.iter().map(|&(e, x)| (s.event_name(e).into(), s.state_name(x).into())).collect(),
        };
        let witness = match &self.witness {
            Witness::Detection { anchors, finish, plant } => WitnessDoc::Detection {
                anchors: anchors
                    .iter()
                    .map(|a| AnchorDoc { observer: a.observer, approach: path(&a.approach), cycle: path(&a.cycle) })
                    .collect(),
                finish: path(finish),
                plant: lasso(plant),
            },
            Witness::Diagnosis { prefix, fault, middle, cycle } => WitnessDoc::Diagnosis {
                prefix: path(prefix),
                fault: StepDoc::from_step(fault, s),
                middle: path(middle),
                cycle: path(cycle),
            },
            Witness::Prediction { prefix, fault, lassos } => WitnessDoc::Prediction {
                prefix: path(prefix),
                fault: (s.state_name(fault.0).into(), s.event_name(fault.1).into(), s.state_name(fault.2).into()),
                lassos: lassos.iter().map(lasso).collect(),
            },
        };
        CertificateDoc { property: self.property, witness }
    }

    pub fn from_doc(doc: &CertificateDoc, s: &Fsa) -> Result<Certificate, DocError> {
        let lasso = |l: &LassoDoc| -> Result<Lasso, DocError> {
            let pairs = |v: &[(String, String)]| -> Result<Vec<(EventId, StateId)>, DocError> {
                v.iter().map(|(e, x)| Ok((event(s, e)?, state(s, x)?))).collect()
            };
            Ok(Lasso { start: state(s, &l.start)?, tail: pairs(&l.tail)?, cycle: pairs(&l.cycle)? })
        };
        let witness = match &doc.witness {
            WitnessDoc::Detection { anchors, finish, plant } => Witness::Detection {
                anchors: anchors
                    .iter()
                    .map(|a| {
                        Ok(Anchor {
                            observer: a.observer,
                            approach: a.approach.to_path(s)?,
                            cycle: a.cycle.to_path(s)?,
                        })
                    })
                    .collect::<Result<_, DocError>>()?,
                finish: finish.to_path(s)?,
                plant: lasso(plant)?,
            },
            WitnessDoc::Diagnosis { prefix, fault, middle, cycle } => Witness::Diagnosis {
                prefix: prefix.to_path(s)?,
                fault: fault.to_step(s)?,
                middle: middle.to_path(s)?,
                cycle: cycle.to_path(s)?,
            },
            WitnessDoc::Prediction { prefix, fault, lassos } => Witness::Prediction {
                prefix: prefix.to_path(s)?,
                fault: (state(s, &fault.0)?, event(s, &fault.1)?, state(s, &fault.2)?),
                lassos: lassos.iter().map(lasso).collect::<Result<_, _>>()?,
            },
        };
        Ok(Certificate { property: doc.property, witness })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("`{0}` is not allowed in entry 0")]
    DeadLead(String),
}

fn state(s: &Fsa, n: &str) -> Result<StateId, DocError> {
    s.state_id(n).ok_or_else(|| DocError::UnknownState(n.to_string()))
}

fn event(s: &Fsa, n: &str) -> Result<EventId, DocError> {
    s.event_id(n).ok_or_else(|| DocError::UnknownEvent(n.to_string()))
}

pub(crate) fn entries_to_names(v: &[Entry], s: &Fsa) -> Vec<String> {
    v.iter()
        .map(|e| match e {
            Entry::State(x) => s.state_name(*x).to_string(),
            Entry::Dead => DIAMOND.to_string(),
        })
        .collect()
}

pub(crate) fn moves_to_names(m: &[Move], s: &Fsa) -> Vec<String> {
    m.iter()
        .map(|m| match m {
            Move::Event(e) => s.event_name(*e).to_string(),
            Move::Eps => EPSILON.to_string(),
            Move::Kill => DIAMOND.to_string(),
        })
        .collect()
}

fn names_to_entries(v: &[String], s: &Fsa) -> Result<Vec<Entry>, DocError> {
    v.iter()
        .enumerate()
        .map(|(i, n)| {
            if n == DIAMOND {
                if i == 0 {
                    return Err(DocError::DeadLead(n.clone()));
                }
                Ok(Entry::Dead)
            } else {
                Ok(Entry::State(state(s, n)?))
            }
        })
        .collect()
}

fn names_to_moves(v: &[String], s: &Fsa) -> Result<Vec<Move>, DocError> {
    v.iter()
        .map(|n| match n.as_str() {
            EPSILON => Ok(Move::Eps),
            DIAMOND => Ok(Move::Kill),
            _ => Ok(Move::Event(event(s, n)?)),
        })
        .collect()
}

/// Named, serializable form of a [`Certificate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub property: Property,
    pub witness: WitnessDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessDoc {
    Detection { anchors: Vec<AnchorDoc>, finish: PathDoc, plant: LassoDoc },
    Diagnosis { prefix: PathDoc, fault: StepDoc, middle: PathDoc, cycle: PathDoc },
    Prediction { prefix: PathDoc, fault: (String, String, String), lassos: Vec<LassoDoc> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorDoc {
    pub observer: usize,
    pub approach: PathDoc,
    pub cycle: PathDoc,
}

/// `[source-vector, event-vector, target-vector]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDoc(pub Vec<String>, pub Vec<String>, pub Vec<String>);

impl StepDoc {
    fn from_step(st: &Step, s: &Fsa) -> Self {
        StepDoc(entries_to_names(&st.source, s), moves_to_names(&st.moves, s), entries_to_names(&st.target, s))
    }

    fn to_step(&self, s: &Fsa) -> Result<Step, DocError> {
        Ok(Step {
            source: names_to_entries(&self.0, s)?,
            moves: names_to_moves(&self.1, s)?,
            target: names_to_entries(&self.2, s)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathDoc {
    pub start: Vec<String>,
    pub steps: Vec<StepDoc>,
}

impl PathDoc {
    fn from_path(p: &Path, s: &Fsa) -> Self {
        PathDoc {
            start: entries_to_names(&p.start, s),
            steps: p.steps.iter().map(|st| StepDoc::from_step(st, s)).collect(),
        }
    }

    fn to_path(&self, s: &Fsa) -> Result<Path, DocError> {
        Ok(Path {
            start: names_to_entries(&self.start, s)?,
            steps: self.steps.iter().map(|st| st.to_step(s)).collect::<Result<_, _>>()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LassoDoc {
    pub start: String,
    pub tail: Vec<(String, String)>,
    pub cycle: Vec<(String, String)>,
}
