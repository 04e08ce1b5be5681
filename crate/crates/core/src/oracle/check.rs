//! Certificate and evidence checking against the automaton alone.

use crate::composition::{Entry, Move};
use crate::fsa::{EventId, Fsa, LabelId, Labeling, ObserverSet, Run, StateId};
use crate::verify::{Certificate, Evidence, Lasso, Path, Property, Step, VerifyError, Witness};

/// Outcome of a check: empty diagnostics mean the certificate is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub diagnostics: Vec<String>,
}

impl CheckReport {
    pub fn is_valid(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MalformedCertificate {
    #[error(transparent)]
    Observers(#[from] VerifyError),
    #[error("certificate has {got} entries per vector, {expected} expected")]
    Width { expected: usize, got: usize },
    #[error("witness kind does not match {0}")]
    WrongKind(Property),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Detection,
    Diagnosis,
    Prediction,
}

struct Checker<'a> {
    s: &'a Fsa,
    labs: Vec<Labeling>,
    mode: Mode,
    width: usize,
    diags: Vec<String>,
}

impl Checker<'_> {
    fn fail(&mut self, msg: String) {
        self.diags.push(msg);
    }

    fn entry(&self, e: Entry) -> String {
        match e {
            Entry::State(x) => self.s.state_name(x).to_string(),
            Entry::Dead => crate::fsa::DIAMOND.to_string(),
        }
    }

    fn label(&self, j: usize, m: Move) -> Option<LabelId> {
        m.event().and_then(|e| self.labs[j - 1].label(e))
    }

    fn transition(&mut self, ctx: &str, x: StateId, e: EventId, y: StateId, normal: bool) {
        let s = self.s;
        if !s.has_transition(x, e, y) {
            self.fail(format!(
                "{ctx}: transition ({}, {}, {}) is not in δ",
                s.state_name(x),
                s.event_name(e),
                s.state_name(y)
            ));
        } else if normal && s.is_faulty(e) {
            self.fail(format!("{ctx}: faulty event {} in a normal run", s.event_name(e)));
        }
    }

    fn step(&mut self, ctx: &str, st: &Step) {
        let w = self.width;
        if st.source.len() != w || st.moves.len() != w || st.target.len() != w {
            self.fail(format!("{ctx}: vectors must have {w} entries"));
            return;
        }
        if st.source[0].is_dead() || st.target[0].is_dead() {
            self.fail(format!("{ctx}: entry 0 is dead"));
            return;
        }
        for j in 0..w {
            let c = format!("{ctx}, entry {j}");
            let normal = match self.mode {
                Mode::Detection => false,
                Mode::Diagnosis => j > 0,
                Mode::Prediction => true,
            };
            match (st.source[j], st.moves[j], st.target[j]) {
                (Entry::Dead, Move::Eps, Entry::Dead) => {}
                (Entry::Dead, Move::Kill, Entry::Dead) if self.mode == Mode::Detection => {}
                (Entry::Dead, _, _) => self.fail(format!("{c}: a dead entry stays dead and idle")),
                (Entry::State(x), Move::Eps, t) => {
                    if t != Entry::State(x) {
                        self.fail(format!("{c}: ε move changes {} to {}", self.entry(Entry::State(x)), self.entry(t)));
                    }
                }
                (Entry::State(x), Move::Event(e), Entry::State(y)) => self.transition(&c, x, e, y, normal),
                (Entry::State(_), Move::Kill, Entry::Dead) if self.mode == Mode::Detection && j > 0 => {
                    if st.source[j] == st.source[0] {
                        self.fail(format!("{c}: killed entry agrees with entry 0"));
                    }
                }
                _ => self.fail(format!("{c}: move and target are inconsistent")),
            }
        }
        for j in 1..w {
            if st.source[j].is_dead() || st.moves[j] == Move::Kill {
                continue;
            }
            if self.label(j, st.moves[0]) != self.label(j, st.moves[j]) {
                self.fail(format!("{ctx}: observer {j} sees different outputs on entries 0 and {j}"));
            }
        }
    }

    fn path(&mut self, name: &str, p: &Path, start: &[Entry]) {
        if p.start != start {
            self.fail(format!("{name}: starts at {} instead of {}", self.vector(&p.start), self.vector(start)));
        }
        let mut cur = p.start.clone();
        for (i, st) in p.steps.iter().enumerate() {
            let ctx = format!("{name} step {}", i + 1);
            if st.source != cur {
                self.fail(format!(
                    "{ctx}: source {} does not continue from {}",
                    self.vector(&st.source),
                    self.vector(&cur)
                ));
            }
            self.step(&ctx, st);
            cur = st.target.clone();
        }
    }

    fn closed(&mut self, name: &str, p: &Path) {
        if p.is_empty() {
            self.fail(format!("{name}: cycle is empty"));
        } else if p.end() != p.start.as_slice() {
            self.fail(format!("{name}: cycle does not return to {}", self.vector(&p.start)));
        }
    }

    fn vector(&self, v: &[Entry]) -> String {
        format!("({})", v.iter().map(|&e| self.entry(e)).collect::<Vec<_>>().join(","))
    }

    fn lasso(&mut self, name: &str, l: &Lasso, normal: bool) {
        let mut x = l.start;
        for (i, &(e, y)) in l.tail.iter().chain(&l.cycle).enumerate() {
            self.transition(&format!("{name} step {}", i + 1), x, e, y, normal);
            x = y;
        }
        if l.cycle.is_empty() {
            self.fail(format!("{name}: cycle is empty"));
        } else if x != l.cycle_start() {
            self.fail(format!("{name}: cycle is not closed"));
        }
    }

    fn initial(&mut self, v: &[Entry]) {
        if v.len() != self.width {
            return;
        }
        for (j, e) in v.iter().enumerate() {
            if !e.state().is_some_and(|x| self.s.is_initial(x)) {
                self.fail(format!("start entry {j} ({}) is not initial", self.entry(*e)));
            }
        }
    }

    /// Where an alive entry is killed, its state and the true state must share an estimate.
    fn kill_estimates(&mut self, steps: &[&Step]) {
        let mut events = Vec::new();
        for (i, st) in steps.iter().enumerate() {
            if st.source.len() != self.width || st.moves.len() != self.width {
                return;
            }
            for j in 1..self.width {
                if st.moves[j] != Move::Kill || st.source[j].is_dead() {
                    continue;
                }
                let (Entry::State(x0), Entry::State(xj)) = (st.source[0], st.source[j]) else { continue };
                let lab = &self.labs[j - 1];
                let est = self.s.current_state_estimate(lab, &lab.project(&events));
                if est.len() < 2 || !est.contains(&x0) || !est.contains(&xj) {
                    self.fail(format!(
                        "step {}: estimate of observer {j} does not contain both {} and {}",
                        i + 1,
                        self.s.state_name(x0),
                        self.s.state_name(xj)
                    ));
                }
            }
            if let Some(e) = st.moves[0].event() {
                events.push(e);
            }
        }
    }
}

/// Recheck a certificate from `S` alone: every step is a transition of `S`,
/// observers see equal outputs, cycles are closed and positive, faults and
/// estimates are as claimed.
pub fn check_certificate(
    cert: &Certificate,
    s: &Fsa,
    observers: Option<&ObserverSet>,
) -> Result<CheckReport, MalformedCertificate> {
    let obs = cert.property.effective_observers(s, observers)?;
    let labs = obs.labelings(s);
    let width = labs.len() + 1;
    if cert.width() != width {
        return Err(MalformedCertificate::Width { expected: width, got: cert.width() });
    }
    let mode = match (&cert.witness, cert.property) {
        (Witness::Detection { .. }, Property::StrongDetectability | Property::CoDetectability) => Mode::Detection,
        (Witness::Diagnosis { .. }, Property::Diagnosability | Property::CoDiagnosability) => Mode::Diagnosis,
        (Witness::Prediction { .. }, Property::Predictability | Property::CoPredictability) => Mode::Prediction,
        (_, p) => return Err(MalformedCertificate::WrongKind(p)),
    };
    let mut ck = Checker { s, labs, mode, width, diags: Vec::new() };
    let start = cert.start().to_vec();
    ck.initial(&start);

    match &cert.witness {
        Witness::Detection { anchors, finish, plant } => {
            let mut seen = vec![false; width];
            for a in anchors {
                if a.observer == 0 || a.observer >= width || seen[a.observer] {
                    ck.fail(format!("anchor observer {} is out of range or repeated", a.observer));
                } else {
                    seen[a.observer] = true;
                }
            }
            if anchors.len() != width - 1 {
                ck.fail(format!("{} anchors for {} observers", anchors.len(), width - 1));
            }
            let mut cur = start;
            for (i, a) in anchors.iter().enumerate() {
                let name = format!("anchor {}", i + 1);
                ck.path(&format!("{name} approach"), &a.approach, &cur);
                cur = a.approach.end().to_vec();
                ck.path(&format!("{name} cycle"), &a.cycle, &cur);
                ck.closed(&format!("{name} cycle"), &a.cycle);
                let j = a.observer;
                if j > 0 && j < width {
                    let alive = a.cycle.start.get(j).is_some_and(|e| !e.is_dead());
                    let lab = &ck.labs[j - 1];
                    let visible = a.cycle.steps.iter().any(|st| st.moves[0].event().is_some_and(|t| lab.is_visible(t)));
                    if !alive || !visible {
                        ck.fail(format!("{name} cycle is not positive for observer {j}"));
                    }
                }
            }
            ck.path("finish", finish, &cur);
            let end = finish.end();
            if end.len() == width && !end[1..].iter().all(|e| e.is_dead()) {
                ck.fail(format!("finish ends at {} with a live tracked entry", ck.vector(end)));
            }
            if end.first().and_then(|e| e.state()) != Some(plant.start) {
                ck.fail("plant lasso does not start at the final true state".to_string());
            }
            ck.lasso("plant lasso", plant, false);
            let steps = cert.steps();
            ck.kill_estimates(&steps);
        }
        Witness::Diagnosis { prefix, fault, middle, cycle } => {
            ck.path("prefix", prefix, &start);
            if fault.source != prefix.end() {
                ck.fail("fault step does not continue the prefix".to_string());
            }
            ck.step("fault step", fault);
            if !fault.moves.first().and_then(|m| m.event()).is_some_and(|e| s.is_faulty(e)) {
                ck.fail("fault step: entry 0 does not take a faulty event".to_string());
            }
            ck.path("middle", middle, &fault.target);
            ck.path("cycle", cycle, middle.end());
            ck.closed("cycle", cycle);
            if !cycle.steps.iter().any(|st| st.moves[0].event().is_some()) {
                ck.fail("cycle: entry 0 never moves".to_string());
            }
        }
        Witness::Prediction { prefix, fault, lassos } => {
            ck.path("prefix", prefix, &start);
            let end = prefix.end().to_vec();
            let &(x, f, y) = fault;
            if end.first().and_then(|e| e.state()) != Some(x) {
                ck.fail("fault does not leave the final true state".to_string());
            }
            ck.transition("fault", x, f, y, false);
            if !s.is_faulty(f) {
                ck.fail(format!("fault: event {} is not faulty", s.event_name(f)));
            }
            if lassos.len() != width - 1 {
                ck.fail(format!("{} lassos for {} observers", lassos.len(), width - 1));
            }
            for (i, l) in lassos.iter().enumerate() {
                let name = format!("lasso {}", i + 1);
                if end.get(i + 1).and_then(|e| e.state()) != Some(l.start) {
                    ck.fail(format!("{name} does not start at entry {}", i + 1));
                }
                ck.lasso(&name, l, true);
            }
        }
    }
    Ok(CheckReport { diagnostics: ck.diags })
}

fn run_ok(s: &Fsa, r: &Run, what: &str, normal: bool, from_initial: bool, out: &mut Vec<String>) {
    if from_initial && !s.is_initial(r.start) {
        out.push(format!("{what} does not start at an initial state"));
    }
    if !s.is_run(r) {
        out.push(format!("{what} is not a run of S"));
    }
    if normal && r.steps.iter().any(|&(e, _)| s.is_faulty(e)) {
        out.push(format!("{what} contains a fault"));
    }
}

/// Recheck pumped evidence: runs of `S`, equal projections and estimate sizes.
pub fn check_evidence(
    ev: &Evidence,
    property: Property,
    s: &Fsa,
    observers: Option<&ObserverSet>,
) -> Result<CheckReport, MalformedCertificate> {
    let obs = property.effective_observers(s, observers)?;
    let labs = obs.labelings(s);
    let k = ev.k();
    let mut d = Vec::new();
    let normal_main = matches!(ev, Evidence::Prediction { .. });
    run_ok(s, ev.run(), "main run", normal_main, true, &mut d);
    match ev {
        Evidence::Diagnosis { run, .. } => match run.steps.iter().position(|&(e, _)| s.is_faulty(e)) {
            None => d.push("main run has no fault".to_string()),
            Some(i) if run.len() - i - 1 < k => d.push(format!("fewer than {k} events after the fault")),
            Some(_) => {}
        },
        Evidence::Prediction { run, fault, .. } => {
            if fault.0 != run.end() || !s.has_transition(fault.0, fault.1, fault.2) || !s.is_faulty(fault.1) {
                d.push("fault is not enabled at the end of the main run".to_string());
            }
        }
        Evidence::Detection { .. } => {}
    }
    if ev.observers().len() != labs.len() {
        return Err(MalformedCertificate::Width { expected: labs.len() + 1, got: ev.observers().len() + 1 });
    }
    for o in ev.observers() {
        let Some(lab) = o.observer.checked_sub(1).and_then(|i| labs.get(i)) else {
            d.push(format!("observer {} out of range", o.observer));
            continue;
        };
        let who = format!("observer {}", o.observer);
        let normal_alt = !matches!(ev, Evidence::Detection { .. });
        run_ok(s, &o.true_run, &format!("{who} true run"), normal_main, true, &mut d);
        run_ok(s, &o.alternative_run, &format!("{who} alternative run"), normal_alt, true, &mut d);
        if lab.project(&o.true_run.events()) != o.sigma || lab.project(&o.alternative_run.events()) != o.sigma {
            d.push(format!("{who}: projections differ from the claimed observation"));
        }
        match ev {
            Evidence::Detection { .. } => {
                let est = s.current_state_estimate(lab, &o.sigma);
                let ends = [o.true_run.end(), o.alternative_run.end()];
                if o.estimate.as_ref() != Some(&est)
                    || est.len() < 2
                    || ends.iter().any(|x| !est.contains(x))
                    || ends[0] == ends[1]
                {
                    d.push(format!("{who}: estimate claim does not hold"));
                }
                if o.sigma.len() < k {
                    d.push(format!("{who}: observation shorter than {k}"));
                }
            }
            Evidence::Diagnosis { .. } => {
                if !o.true_run.steps.iter().any(|&(e, _)| s.is_faulty(e)) {
                    d.push(format!("{who}: true run has no fault"));
                }
            }
            Evidence::Prediction { .. } => {
                run_ok(s, &o.extension, &format!("{who} extension"), true, false, &mut d);
                if o.extension.start != o.alternative_run.end() || o.extension.len() < k {
                    d.push(format!("{who}: extension does not continue the alternative run for {k} steps"));
                }
            }
        }
    }
    Ok(CheckReport { diagnostics: d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::fsa::RawInstance;
    use crate::verify::{pump_certificate, verify};

    fn without(s: &Fsa, t: (StateId, EventId, StateId)) -> Fsa {
        let mut raw = RawInstance::from_fsa(s, None);
        let key = (s.state_name(t.0).to_string(), s.event_name(t.1).to_string(), s.state_name(t.2).to_string());
        raw.transitions.retain(|x| *x != key);
        raw.validate().unwrap().fsa
    }

    fn cases() -> Vec<(Property, crate::fsa::Instance)> {
        vec![
            (Property::CoDetectability, catalog::branching()),
            (Property::StrongDetectability, catalog::branching()),
            (Property::CoDiagnosability, catalog::late_fault()),
            (Property::CoPredictability, catalog::late_fault()),
            (Property::Diagnosability, catalog::joined_deadlock(true)),
            (Property::Predictability, catalog::silent_fork(true)),
        ]
    }

    #[test]
    fn emitted_certificates_pass() {
        for (p, inst) in cases() {
            let obs = inst.observers().ok();
            let cert = verify(p, &inst.fsa, obs).unwrap().certificate.unwrap();
            let r = check_certificate(&cert, &inst.fsa, obs).unwrap();
            assert!(r.is_valid(), "{p}: {:?}", r.diagnostics);
            for k in 0..3 {
                let ev = pump_certificate(&cert, &inst.fsa, obs, k).unwrap();
                let r = check_evidence(&ev, p, &inst.fsa, obs).unwrap();
                assert!(r.is_valid(), "{p} k={k}: {:?}", r.diagnostics);
            }
        }
    }

    #[test]
    fn missing_transition_is_named() {
        let inst = catalog::branching();
        let s = &inst.fsa;
        let obs = inst.observers().ok();
        let cert = verify(Property::CoDetectability, s, obs).unwrap().certificate.unwrap();
        let x1 = s.state_id("x1").unwrap();
        let t = (x1, s.event_id("c").unwrap(), s.state_id("x3").unwrap());
        let r = check_certificate(&cert, &without(s, t), obs).unwrap();
        assert!(!r.is_valid());
        assert!(r.diagnostics.iter().any(|m| m.contains("(x1, c, x3) is not in δ")), "{:?}", r.diagnostics);
    }

    #[test]
    fn every_cited_transition_matters() {
        for (p, inst) in cases() {
            let obs = inst.observers().ok();
            let cert = verify(p, &inst.fsa, obs).unwrap().certificate.unwrap();
            for t in cert.cited_transitions() {
                let r = check_certificate(&cert, &without(&inst.fsa, t), obs).unwrap();
                assert!(!r.is_valid(), "{p}: removing a cited transition went unnoticed");
            }
        }
    }

    #[test]
    fn wrong_kind_is_malformed() {
        let inst = catalog::late_fault();
        let obs = inst.observers().ok();
        let mut cert = verify(Property::CoDiagnosability, &inst.fsa, obs).unwrap().certificate.unwrap();
        cert.property = Property::CoPredictability;
        assert!(matches!(check_certificate(&cert, &inst.fsa, obs), Err(MalformedCertificate::WrongKind(_))));
    }
}
