use std::time::Instant;

use anyhow::{anyhow, Context};
use cocomp::fsa::Instance;
use cocomp::oracle::{naive_verify, OracleConfig};
use cocomp::verify::{pump_certificate, verify, CertificateDoc, EvidenceDoc};
use cocomp::Property;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::Failure;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub deadlock_free: bool,
    pub prompt: bool,
    pub has_infinite_runs: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleOutcome {
    /// `None` when a search budget ran out.
    pub holds: Option<bool>,
    pub states: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub instance: String,
    /// Hex SHA-256 of the instance file bytes.
    pub instance_digest: String,
    pub property: Property,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<EvidenceDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleOutcome>,
    pub diagnostics: Diagnostics,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub elapsed_ms: f64,
}

pub struct Loaded {
    pub path: String,
    pub digest: String,
    pub instance: Instance,
}

pub fn load(path: &str) -> Result<Loaded, Failure> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {path}")).map_err(Failure::Input)?;
    let text = std::str::from_utf8(&bytes).with_context(|| format!("{path} is not UTF-8")).map_err(Failure::Input)?;
    let instance = Instance::from_json(text).with_context(|| format!("loading {path}")).map_err(Failure::Input)?;
    Ok(Loaded { path: path.to_string(), digest: hex::encode(Sha256::digest(&bytes)), instance })
}

pub fn diagnostics(inst: &Instance) -> Diagnostics {
    let a = inst.fsa.check_assumptions();
    Diagnostics { deadlock_free: a.deadlock_free, prompt: a.prompt, has_infinite_runs: inst.fsa.has_infinite_runs() }
}

pub struct Options {
    pub pump: Option<usize>,
    pub oracle: bool,
    pub naive_only: bool,
}

/// Run one property on one instance. Oracle disagreement is an internal failure.
pub fn run(loaded: &Loaded, property: Property, opts: &Options) -> Result<Report, Failure> {
    let inst = &loaded.instance;
    let s = &inst.fsa;
    let observers = if property.is_decentralized() {
        Some(inst.observers().with_context(|| format!("{property} on {}", loaded.path)).map_err(Failure::Input)?)
    } else {
        None
    };
    let start = Instant::now();
    let mut report = Report {
        tool_version: TOOL_VERSION.to_string(),
        instance: loaded.path.clone(),
        instance_digest: loaded.digest.clone(),
        property,
        holds: true,
        certificate: None,
        evidence: None,
        oracle: None,
        diagnostics: diagnostics(inst),
        warnings: inst.warnings.clone(),
        elapsed_ms: 0.0,
    };
    if opts.naive_only {
        let v = naive_verify(property, s, observers, &OracleConfig::default())
            .map_err(|e| Failure::Internal(anyhow!("oracle on {}: {e}", loaded.path)))?;
        report.holds = v.holds;
        report.oracle = Some(OracleOutcome { holds: Some(v.holds), states: Some(v.states), note: None });
    } else {
        let v = verify(property, s, observers).map_err(|e| Failure::Input(anyhow!(e)))?;
        report.holds = v.holds;
        if let Some(cert) = &v.certificate {
            report.certificate = Some(cert.to_doc(s));
            if let Some(k) = opts.pump {
                let ev = pump_certificate(cert, s, observers, k).map_err(|e| Failure::Internal(anyhow!(e)))?;
                report.evidence = Some(ev.to_doc(s));
            }
        }
        if opts.oracle {
            report.oracle = Some(match naive_verify(property, s, observers, &OracleConfig::default()) {
                Ok(o) if o.holds != v.holds => {
                    return Err(Failure::Internal(anyhow!(
                        "{property} on {}: verifier says {}, oracle says {}",
                        loaded.path,
                        v.holds,
                        o.holds
                    )))
                }
                Ok(o) => OracleOutcome { holds: Some(o.holds), states: Some(o.states), note: None },
                Err(e) => OracleOutcome { holds: None, states: None, note: Some(e.to_string()) },
            });
        }
    }
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cocomp::catalog;

    fn loaded(name: &str) -> Loaded {
        let inst = catalog::by_name(name).unwrap();
        Loaded { path: name.into(), digest: "0".repeat(64), instance: inst }
    }

    #[test]
    fn reports_are_deterministic_apart_from_timing() {
        let opts = Options { pump: Some(1), oracle: true, naive_only: false };
        let l = loaded("late-fault");
        let mut a = run(&l, Property::CoDiagnosability, &opts).unwrap();
        let mut b = run(&l, Property::CoDiagnosability, &opts).unwrap();
        a.elapsed_ms = 0.0;
        b.elapsed_ms = 0.0;
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(!a.holds);
        assert!(a.evidence.is_some());
    }

    #[test]
    fn co_properties_need_observers() {
        let opts = Options { pump: None, oracle: false, naive_only: false };
        assert!(matches!(run(&loaded("silent-fork"), Property::CoPredictability, &opts), Err(Failure::Input(_))));
        assert!(run(&loaded("silent-fork"), Property::Predictability, &opts).unwrap().holds);
    }

    #[test]
    fn diagnostics_flag_silent_loops() {
        let d = diagnostics(&catalog::by_name("silent-fork").unwrap());
        assert!(!d.prompt);
        assert!(!d.deadlock_free);
        assert!(d.has_infinite_runs);
    }
}
