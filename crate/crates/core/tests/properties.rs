mod common;

use cocomp::fsa::{Instance, Observer, RawInstance};
use cocomp::oracle::{check_certificate, exhaustive_estimate};
use cocomp::random::{random_instance, rng, with_random_observers};
use cocomp::verify::{verify, CertificateDoc};
use cocomp::{Certificate, ObserverSet, Property};
use common::small_shape;
use proptest::prelude::*;

const CO: [Property; 3] = [Property::CoDetectability, Property::CoDiagnosability, Property::CoPredictability];

fn instance(seed: u64) -> Instance {
    random_instance(&mut rng(seed), &small_shape())
}

fn holds(p: Property, inst: &Instance, obs: &ObserverSet) -> bool {
    verify(p, &inst.fsa, Some(obs)).unwrap().holds
}

/// Every name prefixed, and states, events and transitions declared in reverse.
fn renamed(inst: &Instance) -> Instance {
    let raw = inst.to_raw();
    let r = |s: &String| format!("r.{s}");
    let mut out = RawInstance {
        states: raw.states.iter().rev().map(r).collect(),
        initial: raw.initial.iter().map(r).collect(),
        events: raw.events.iter().rev().cloned().collect(),
        transitions: raw.transitions.iter().rev().map(|(x, e, y)| (r(x), r(e), r(y))).collect(),
        observers: raw.observers.clone(),
        faulty: raw.faulty.iter().map(r).collect(),
        controllable: raw.controllable.iter().map(r).collect(),
    };
    for e in &mut out.events {
        e.name = r(&e.name);
        e.label = e.label.as_ref().map(|l| format!("r.{l}"));
    }
    for o in &mut out.observers {
        o.observes = o.observes.iter().map(r).collect();
    }
    out.validate().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn adding_an_observer_never_breaks_a_co_property(seed in any::<u64>(), extra in any::<u64>()) {
        let inst = instance(seed);
        let obs = inst.observers().unwrap();
        let more = with_random_observers(&mut rng(extra), &inst, 1);
        let added = obs.with_observer(more.observers().unwrap().observers()[0].clone()).unwrap();
        for p in CO {
            prop_assert!(!holds(p, &inst, obs) || holds(p, &inst, &added), "{p}");
        }
    }

    #[test]
    fn duplicate_observers_do_not_matter(seed in any::<u64>()) {
        let inst = instance(seed);
        let obs = inst.observers().unwrap();
        let first: Observer = obs.observers()[0].clone();
        let doubled = obs.with_observer(first).unwrap();
        for p in CO {
            prop_assert_eq!(holds(p, &inst, obs), holds(p, &inst, &doubled), "{}", p);
        }
    }

    #[test]
    fn verdicts_ignore_names_and_declaration_order(seed in any::<u64>()) {
        let inst = instance(seed);
        let other = renamed(&inst);
        for p in Property::ALL {
            let a = verify(p, &inst.fsa, inst.observers().ok()).unwrap().holds;
            let b = verify(p, &other.fsa, other.observers().ok()).unwrap().holds;
            prop_assert_eq!(a, b, "{}", p);
        }
    }

    #[test]
    fn estimates_match_run_enumeration(seed in any::<u64>()) {
        let inst = instance(seed);
        let s = &inst.fsa;
        for lab in inst.observers().unwrap().labelings(s) {
            let Ok(table) = exhaustive_estimate(s, &lab, 2, 200_000) else { continue };
            for (sigma, states) in &table {
                prop_assert_eq!(&s.current_state_estimate(&lab, sigma), states);
            }
        }
    }

    #[test]
    fn certificates_survive_a_json_round_trip(seed in any::<u64>()) {
        let inst = instance(seed);
        let s = &inst.fsa;
        for p in Property::ALL {
            let Some(cert) = verify(p, s, inst.observers().ok()).unwrap().certificate else { continue };
            let text = serde_json::to_string(&cert.to_doc(s)).unwrap();
            let doc: CertificateDoc = serde_json::from_str(&text).unwrap();
            let back = Certificate::from_doc(&doc, s).unwrap();
            prop_assert_eq!(&back, &cert);
            prop_assert!(check_certificate(&back, s, inst.observers().ok()).unwrap().is_valid());
        }
    }

    #[test]
    fn violations_always_carry_a_certificate(seed in any::<u64>()) {
        let inst = instance(seed);
        for p in Property::ALL {
            let v = verify(p, &inst.fsa, inst.observers().ok()).unwrap();
            prop_assert_eq!(v.holds, v.certificate.is_none());
        }
    }
}
