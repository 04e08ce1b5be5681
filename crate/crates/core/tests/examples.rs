use cocomp::catalog;
use cocomp::composition::diamond_composition;
use cocomp::fsa::{Instance, RawDfa};
use cocomp::gadgets::{
    codetectability_from_acyclic, copredictability_from_complete, reduce_path_to_predictability,
    reduce_to_codetectability, GadgetError,
};
use cocomp::random::Digraph;
use cocomp::verify::{pump_certificate, verify, Evidence};
use cocomp::{Dfa, Property};

fn dfa(states: &[&str], accepting: &[&str], delta: &[(&str, &str, &str)]) -> Dfa {
    Dfa::from_raw(&RawDfa {
        states: states.iter().map(|s| s.to_string()).collect(),
        alphabet: vec!["a".into(), "b".into()],
        initial: states[0].into(),
        accepting: accepting.iter().map(|s| s.to_string()).collect(),
        transitions: delta.iter().map(|&(p, a, q)| (p.into(), a.into(), q.into())).collect(),
    })
    .unwrap()
}

#[test]
fn catalog_round_trips_through_json() {
    for name in catalog::NAMES {
        let inst = catalog::by_name(name).unwrap();
        let text = serde_json::to_string(&inst.to_raw()).unwrap();
        let back = Instance::from_json(&text).unwrap();
        assert_eq!(back.to_raw(), inst.to_raw(), "{name}");
    }
}

#[test]
fn branching_diamond_composition_renders() {
    let inst = catalog::branching();
    let c = diamond_composition(&inst.fsa, inst.observers().unwrap());
    let dot = c.to_dot();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("x1,x1,x1") || dot.contains("x1|x1|x1"));
    let json = serde_json::to_value(c.to_json()).unwrap();
    assert!(json.is_object());
}

#[test]
fn pumped_detection_evidence_grows_with_k() {
    let inst = catalog::branching();
    let obs = inst.observers().unwrap();
    let cert = verify(Property::CoDetectability, &inst.fsa, Some(obs)).unwrap().certificate.unwrap();
    let lens: Vec<usize> =
        (0..4).map(|k| pump_certificate(&cert, &inst.fsa, Some(obs), k).unwrap().run().len()).collect();
    assert!(lens.windows(2).all(|w| w[0] < w[1]), "{lens:?}");
    let Evidence::Detection { observers, .. } = pump_certificate(&cert, &inst.fsa, Some(obs), 2).unwrap() else {
        panic!("detection evidence expected");
    };
    assert!(observers.iter().all(|o| o.estimate.as_ref().is_some_and(|e| e.len() > 1)));
}

#[test]
fn faultless_instance_is_co_diagnosable_and_co_predictable() {
    let inst = catalog::branching();
    for p in [Property::CoDiagnosability, Property::CoPredictability] {
        assert!(verify(p, &inst.fsa, inst.observers().ok()).unwrap().holds, "{p}");
    }
}

#[test]
fn common_word_gives_a_violation() {
    let ab = dfa(&["p", "q", "r"], &["r"], &[("p", "a", "q"), ("q", "b", "r")]);
    let r = codetectability_from_acyclic(&[ab.clone(), ab]).unwrap();
    assert_eq!(r.expected_holds, Some(false));
    assert!(!verify(r.property, &r.instance.fsa, r.instance.observers().ok()).unwrap().holds);
}

#[test]
fn disjoint_languages_give_co_detectability() {
    let a = dfa(&["p", "q"], &["q"], &[("p", "a", "q")]);
    let b = dfa(&["p", "q"], &["q"], &[("p", "b", "q")]);
    let r = codetectability_from_acyclic(&[a, b]).unwrap();
    assert_eq!(r.expected_holds, Some(true));
    assert!(verify(r.property, &r.instance.fsa, r.instance.observers().ok()).unwrap().holds);
}

#[test]
fn unnormalized_sources_are_rejected() {
    let a = dfa(&["p", "q"], &["p", "q"], &[("p", "a", "q")]);
    assert_eq!(reduce_to_codetectability(&[a.clone(), a]).unwrap_err(), GadgetError::AcceptingCount(2));
}

#[test]
fn singleton_complete_family() {
    let all = dfa(&["p"], &["p"], &[("p", "a", "p"), ("p", "b", "p")]);
    let none = dfa(&["p"], &[], &[("p", "a", "p"), ("p", "b", "p")]);
    for (fam, want) in [(vec![all.clone(), all.clone()], false), (vec![all, none], true)] {
        let r = copredictability_from_complete(&fam).unwrap();
        assert_eq!(r.expected_holds, Some(want));
        assert_eq!(verify(r.property, &r.instance.fsa, r.instance.observers().ok()).unwrap().holds, want);
    }
}

#[test]
fn path_reduction_follows_reachability() {
    let g = Digraph {
        vertices: vec!["s".into(), "m".into(), "t".into()],
        edges: vec![("s".into(), "m".into()), ("m".into(), "t".into())],
    };
    let r = reduce_path_to_predictability(&g, "s", "t").unwrap();
    assert_eq!(r.expected_holds, Some(false));
    assert!(!verify(r.property, &r.instance.fsa, None).unwrap().holds);
    let r = reduce_path_to_predictability(&g, "t", "s").unwrap();
    assert!(verify(r.property, &r.instance.fsa, None).unwrap().holds);
}
