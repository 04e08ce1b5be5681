//! Turning certificates into concrete runs of `S` for a chosen pump count `k`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::certificate::{Step, Witness};
use super::search::lasso;
use super::{Certificate, VerifyError};
use crate::composition::{Entry, Move};
use crate::fsa::{EventId, Fsa, LabelId, Labeling, ObserverSet, Run, StateId};

/// What one local observer sees, next to the run it cannot rule out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObserverEvidence {
    /// Observer index, counted from 1.
    pub observer: usize,
    /// Projection shared by `true_run` and `alternative_run`.
    pub sigma: Vec<LabelId>,
    pub true_run: Run,
    pub alternative_run: Run,
    /// Normal continuation of `alternative_run` (prediction only).
    pub extension: Run,
    /// `M_{O_i}(S, sigma)` where a detection claim needs it.
    pub estimate: Option<BTreeSet<StateId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    /// `run` is the pumped true run followed by `k` passes of the plant cycle.
    Detection { k: usize, run: Run, observers: Vec<ObserverEvidence> },
    /// `run` is faulty and continues `k` passes past the fault.
    Diagnosis { k: usize, run: Run, observers: Vec<ObserverEvidence> },
    /// `run` is normal and ends where `fault` is enabled.
    Prediction { k: usize, run: Run, fault: (StateId, EventId, StateId), observers: Vec<ObserverEvidence> },
}

impl Evidence {
    pub fn k(&self) -> usize {
        match self {
            Evidence::Detection { k, .. } | Evidence::Diagnosis { k, .. } | Evidence::Prediction { k, .. } => *k,
        }
    }

    pub fn run(&self) -> &Run {
        match self {
            Evidence::Detection { run, .. } | Evidence::Diagnosis { run, .. } | Evidence::Prediction { run, .. } => run,
        }
    }

    pub fn observers(&self) -> &[ObserverEvidence] {
        match self {
            Evidence::Detection { observers, .. }
            | Evidence::Diagnosis { observers, .. }
            | Evidence::Prediction { observers, .. } => observers,
        }
    }

    /// Named form for reports.
    pub fn to_doc(&self, s: &Fsa) -> EvidenceDoc {
        let run = |r: &Run| RunDoc {
            start: s.state_name(r.start).to_string(),
            steps: r.steps.iter().map(|&(e, x)| (s.event_name(e).into(), s.state_name(x).into())).collect(),
        };
        EvidenceDoc {
            k: self.k(),
            run: run(self.run()),
            fault: match self {
                Evidence::Prediction { fault, .. } => {
                    Some((s.state_name(fault.0).into(), s.event_name(fault.1).into(), s.state_name(fault.2).into()))
                }
                _ => None,
            },
            observers: self
                .observers()
                .iter()
                .map(|o| ObserverEvidenceDoc {
                    observer: o.observer,
                    sigma: s.label_names(&o.sigma),
                    true_run: run(&o.true_run),
                    alternative_run: run(&o.alternative_run),
                    extension: run(&o.extension),
                    estimate: o.estimate.as_ref().map(|e| s.state_names(e.iter().copied())),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunDoc {
    pub start: String,
    pub steps: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObserverEvidenceDoc {
    pub observer: usize,
    pub sigma: Vec<String>,
    pub true_run: RunDoc,
    pub alternative_run: RunDoc,
    pub extension: RunDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceDoc {
    pub k: usize,
    pub run: RunDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<(String, String, String)>,
    pub observers: Vec<ObserverEvidenceDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PumpError {
    #[error(transparent)]
    Observers(#[from] VerifyError),
    #[error("certificate does not fit the instance: {0}")]
    Mismatch(String),
}

fn mismatch(msg: impl Into<String>) -> PumpError {
    PumpError::Mismatch(msg.into())
}

/// Run of entry `j` along a step sequence, `None` when the entry is dead at the start.
fn entry_run(start: &[Entry], steps: &[&Step], j: usize) -> Option<Run> {
    let mut run = Run::new(start.get(j)?.state()?);
    for st in steps {
        if let (Move::Event(e), Entry::State(y)) = (st.moves[j], st.target[j]) {
            run.steps.push((e, y));
        }
    }
    Some(run)
}

fn extend(run: &mut Run, tail: &Run) {
    run.steps.extend(tail.steps.iter().copied());
}

/// Pump a certificate `k` times.
///
/// For centralized properties `observers` is ignored and the global observer is used.
pub fn pump_certificate(
    cert: &Certificate,
    s: &Fsa,
    observers: Option<&ObserverSet>,
    k: usize,
) -> Result<Evidence, PumpError> {
    let obs = cert.property.effective_observers(s, observers)?;
    let labelings = obs.labelings(s);
    let width = cert.width();
    if width != labelings.len() + 1 {
        return Err(mismatch(format!("certificate tracks {} entries, {} observers given", width - 1, labelings.len())));
    }
    match &cert.witness {
        Witness::Detection { anchors, finish, plant } => {
            let mut steps: Vec<&Step> = Vec::new();
            for a in anchors {
                steps.extend(&a.approach.steps);
                for _ in 0..k {
                    steps.extend(&a.cycle.steps);
                }
            }
            steps.extend(&finish.steps);
            let start = cert.start();
            let mut run = entry_run(start, &steps, 0).ok_or_else(|| mismatch("entry 0 is dead"))?;
            if plant.start != run.end() {
                return Err(mismatch("plant lasso does not start at the final state"));
            }
            extend(&mut run, &plant.unroll(k));
            let mut out = Vec::new();
            for (j, lab) in labelings.iter().enumerate().map(|(j, l)| (j + 1, l)) {
                let kill = steps
                    .iter()
                    .position(|st| st.moves[j] == Move::Kill)
                    .ok_or_else(|| mismatch(format!("entry {j} is never killed")))?;
                let before = &steps[..kill];
                let true_run = entry_run(start, before, 0).expect("entry 0 alive");
                let alternative_run = entry_run(start, before, j).ok_or_else(|| mismatch("entry dead at start"))?;
                let sigma = lab.project(&true_run.events());
                let estimate = s.current_state_estimate(lab, &sigma);
                out.push(ObserverEvidence {
                    observer: j,
                    sigma,
                    extension: Run::new(alternative_run.end()),
                    true_run,
                    alternative_run,
                    estimate: Some(estimate),
                });
            }
            Ok(Evidence::Detection { k, run, observers: out })
        }
        Witness::Diagnosis { prefix, fault, middle, cycle } => {
            let mut steps: Vec<&Step> = prefix.steps.iter().collect();
            steps.push(fault);
            steps.extend(&middle.steps);
            for _ in 0..k {
                steps.extend(&cycle.steps);
            }
            let start = cert.start();
            let run = entry_run(start, &steps, 0).ok_or_else(|| mismatch("entry 0 is dead"))?;
            let mut out = Vec::new();
            for (j, lab) in labelings.iter().enumerate().map(|(j, l)| (j + 1, l)) {
                let mut alternative_run = entry_run(start, &steps, j).ok_or_else(|| mismatch("entry is dead"))?;
                if let Some(pad) = silent_lasso(s, lab, alternative_run.end()) {
                    extend(&mut alternative_run, &pad.unroll(k));
                }
                out.push(ObserverEvidence {
                    observer: j,
                    sigma: lab.project(&run.events()),
                    true_run: run.clone(),
                    extension: Run::new(alternative_run.end()),
                    alternative_run,
                    estimate: None,
                });
            }
            Ok(Evidence::Diagnosis { k, run, observers: out })
        }
        Witness::Prediction { prefix, fault, lassos } => {
            let steps: Vec<&Step> = prefix.steps.iter().collect();
            let start = cert.start();
            let run = entry_run(start, &steps, 0).ok_or_else(|| mismatch("entry 0 is dead"))?;
            if lassos.len() != labelings.len() {
                return Err(mismatch("one lasso per observer expected"));
            }
            let mut out = Vec::new();
            for (j, lab) in labelings.iter().enumerate().map(|(j, l)| (j + 1, l)) {
                let alternative_run = entry_run(start, &steps, j).ok_or_else(|| mismatch("entry is dead"))?;
                let l = &lassos[j - 1];
                if l.start != alternative_run.end() {
                    return Err(mismatch(format!("lasso {j} does not start at entry {j}")));
                }
                out.push(ObserverEvidence {
                    observer: j,
                    sigma: lab.project(&run.events()),
                    true_run: run.clone(),
                    alternative_run,
                    extension: l.unroll(k),
                    estimate: None,
                });
            }
            Ok(Evidence::Prediction { k, run, fault: *fault, observers: out })
        }
    }
}

/// A normal lasso invisible to `lab`, used to lengthen a confusing normal run.
fn silent_lasso(s: &Fsa, lab: &Labeling, from: StateId) -> Option<super::certificate::Lasso> {
    lasso(s, from, |e| !s.is_faulty(e) && !lab.is_visible(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::verify::{verify_co_detectability, verify_co_diagnosability, verify_co_predictability};

    fn names(s: &Fsa, r: &Run) -> String {
        s.event_names(r.events()).join(" ")
    }

    #[test]
    fn detection_pumped_twice() {
        let inst = catalog::branching();
        let s = &inst.fsa;
        let cert = verify_co_detectability(s, inst.observers().unwrap()).certificate.unwrap();
        let ev = pump_certificate(&cert, s, inst.observers().ok(), 2).unwrap();
        assert_eq!(names(s, ev.run()), "a b b b b c d d d");
        let o2 = &ev.observers()[1];
        assert_eq!(s.label_names(&o2.sigma), ["a", "b", "b", "b", "b"]);
        let est = o2.estimate.as_ref().unwrap();
        assert_eq!(s.state_names(est.iter().copied()), ["x1", "x2", "x3", "x4"]);
    }

    #[test]
    fn diagnosis_pumped_once() {
        let inst = catalog::late_fault();
        let s = &inst.fsa;
        let cert = verify_co_diagnosability(s, inst.observers().unwrap()).certificate.unwrap();
        let ev = pump_certificate(&cert, s, inst.observers().ok(), 1).unwrap();
        assert_eq!(names(s, ev.run()), "a b f u");
        for o in ev.observers() {
            assert_eq!(names(s, &o.alternative_run), "a b u");
        }
    }

    #[test]
    fn zero_pumps_keep_the_witness_path() {
        let inst = catalog::late_fault();
        let s = &inst.fsa;
        let cert = verify_co_predictability(s, inst.observers().unwrap()).certificate.unwrap();
        let ev = pump_certificate(&cert, s, inst.observers().ok(), 0).unwrap();
        assert_eq!(names(s, ev.run()), "a b");
        for o in ev.observers() {
            assert!(o.extension.is_empty());
        }
    }

    #[test]
    fn wrong_observer_count_is_rejected() {
        let inst = catalog::branching();
        let s = &inst.fsa;
        let cert = verify_co_detectability(s, inst.observers().unwrap()).certificate.unwrap();
        let one = ObserverSet::global(s);
        assert!(matches!(pump_certificate(&cert, s, Some(&one), 1), Err(PumpError::Mismatch(_))));
    }
}
