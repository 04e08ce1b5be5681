use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cocomp::fsa::Instance;
use cocomp::oracle::check_certificate;
use cocomp::verify::CertificateDoc;
use cocomp::Certificate;
use serde_json::Value;

fn instances() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../instances")
}

fn instance(name: &str) -> String {
    instances().join(format!("{name}.json")).to_string_lossy().into_owned()
}

fn cocomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cocomp")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn branching_is_not_co_detectable() {
    let path = instance("branching");
    let o = cocomp(&["verify", &path, "--property", "co-detectability"]);
    assert_eq!(code(&o), 1);
    let report = json(&o);
    assert_eq!(report["holds"], false);
    assert_eq!(report["instance_digest"].as_str().unwrap().len(), 64);
    assert!(report["diagnostics"]["deadlock_free"].is_boolean());

    // The embedded certificate revalidates against the file it came from.
    let inst = Instance::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let doc: CertificateDoc = serde_json::from_value(report["certificate"].clone()).unwrap();
    let cert = Certificate::from_doc(&doc, &inst.fsa).unwrap();
    assert!(check_certificate(&cert, &inst.fsa, inst.observers().ok()).unwrap().is_valid());
}

#[test]
fn late_fault_is_not_co_predictable() {
    let o = cocomp(&["verify", &instance("late-fault"), "-p", "co-predictability", "--pump", "2", "--oracle"]);
    assert_eq!(code(&o), 1);
    let report = json(&o);
    assert_eq!(report["evidence"]["k"], 2);
    assert_eq!(report["oracle"]["holds"], false);
}

#[test]
fn faultless_instance_is_co_diagnosable() {
    let o = cocomp(&["verify", &instance("branching"), "-p", "co-diagnosability"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o).get("certificate").is_none());
}

#[test]
fn oracle_subcommand_gives_the_same_verdicts() {
    for (name, p, want) in [("late-fault", "co-diagnosability", 1), ("silent-fork", "predictability", 0)] {
        let o = cocomp(&["oracle", &instance(name), "-p", p]);
        assert_eq!(code(&o), want, "{name} {p}");
    }
}

#[test]
fn parallel_jobs_keep_report_order() {
    let (a, b) = (instance("branching"), instance("late-fault"));
    let strip = |o: &Output| {
        let mut v = json(o);
        for r in v.as_array_mut().unwrap() {
            r.as_object_mut().unwrap().remove("elapsed_ms");
        }
        v
    };
    let one = cocomp(&["verify", &a, &b, "-p", "all", "--jobs", "1"]);
    let four = cocomp(&["verify", &a, &b, "-p", "all", "--jobs", "4"]);
    assert_eq!(code(&one), 1);
    assert_eq!(strip(&one), strip(&four));
    assert_eq!(strip(&one).as_array().unwrap().len(), 12);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"states": ["x"], "initial": ["y"], "events": [], "transitions": []}"#).unwrap();
    let bad = bad.to_string_lossy().into_owned();
    assert_eq!(code(&cocomp(&["verify", &bad, "-p", "diagnosability"])), 2);
    assert_eq!(code(&cocomp(&["verify", "missing.json", "-p", "diagnosability"])), 2);
    assert_eq!(code(&cocomp(&["verify", &instance("branching"), "-p", "liveness"])), 2);
    assert_eq!(code(&cocomp(&["verify", &instance("joined-deadlock"), "-p", "co-diagnosability"])), 2);
    assert_eq!(code(&cocomp(&["frobnicate"])), 2);
}

#[test]
fn dot_and_json_compositions() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("cc.dot");
    let o = cocomp(&["verify", &instance("branching"), "-p", "co-detectability", "--dot", dot.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));

    let o = cocomp(&["compose", &instance("late-fault"), "--kind", "diagnosis", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o).is_object());
}

#[test]
fn generated_codet_instance_matches_its_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("dfas.json");
    let ab = r#"{"states": ["p", "q", "r"], "alphabet": ["a", "b"], "initial": "p", "accepting": ["r"],
                 "transitions": [["p", "a", "q"], ["q", "b", "r"]]}"#;
    std::fs::write(&src, format!("[{ab}, {ab}]")).unwrap();
    let out = dir.path().join("out");
    let o = cocomp(&[
        "generate",
        "codet",
        "--source",
        src.to_str().unwrap(),
        "--normalize",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let truth: Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("instance.truth.json")).unwrap()).unwrap();
    assert_eq!(truth["expected_holds"], false);
    let o = cocomp(&["verify", out.join("instance.json").to_str().unwrap(), "-p", "co-detectability"]);
    assert_eq!(code(&o), 1);

    // Without normalization the same family fails a precondition.
    let o = cocomp(&["generate", "codet", "--source", src.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("precondition violated"));
}

#[test]
fn path_on_edgeless_graph_is_predictable() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("g.json");
    std::fs::write(&src, r#"{"graph": {"vertices": ["s", "t"], "edges": []}, "s": "s", "t": "t"}"#).unwrap();
    let out = dir.path().join("out");
    let o = cocomp(&["generate", "path", "--source", src.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["expected_holds"], true);
    assert_eq!(code(&cocomp(&["verify", out.join("instance.json").to_str().unwrap(), "-p", "predictability"])), 0);
}

#[test]
fn fixed_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let files = |sub: &str| {
        let out = dir.path().join(sub);
        for r in ["codet", "copred", "path"] {
            let d = out.join(r);
            let o = cocomp(&["generate", r, "--seed", "17", "--dfas", "3", "--out", d.to_str().unwrap()]);
            assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        }
        ["codet", "copred", "path"].map(|r| {
            let d = out.join(r);
            (std::fs::read(d.join("instance.json")).unwrap(), std::fs::read(d.join("instance.truth.json")).unwrap())
        })
    };
    assert_eq!(files("one"), files("two"));
}

#[test]
fn generated_random_instances_agree_with_ground_truth() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..6 {
        for r in ["codet", "copred", "path"] {
            let d = dir.path().join(format!("{r}{seed}"));
            let seed = seed.to_string();
            let o = cocomp(&["generate", r, "--seed", &seed, "--out", d.to_str().unwrap()]);
            assert_eq!(code(&o), 0);
            let summary = json(&o);
            let want = if summary["expected_holds"] == true { 0 } else { 1 };
            let p = summary["property"].as_str().unwrap();
            let o = cocomp(&["verify", d.join("instance.json").to_str().unwrap(), "-p", p, "--oracle"]);
            assert_eq!(code(&o), want, "{r} seed {seed}");
        }
    }
}
