//! Verifiers for the six properties, witness extraction and pumping.

mod certificate;
mod detect;
mod diagnose;
mod predict;
mod pump;
mod search;
mod twin;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use certificate::{
    Anchor, AnchorDoc, Certificate, CertificateDoc, DocError, Lasso, LassoDoc, Path, PathDoc, Step, StepDoc, Witness,
    WitnessDoc,
};
pub use detect::{verify_co_detectability, verify_strong_detectability};
pub use diagnose::{verify_co_diagnosability, verify_diagnosability};
pub use predict::{verify_co_predictability, verify_predictability};
pub use pump::{pump_certificate, Evidence, EvidenceDoc, ObserverEvidence, ObserverEvidenceDoc, PumpError, RunDoc};

use crate::fsa::{Fsa, ObserverSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    StrongDetectability,
    CoDetectability,
    Diagnosability,
    CoDiagnosability,
    Predictability,
    CoPredictability,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::StrongDetectability,
        Property::CoDetectability,
        Property::Diagnosability,
        Property::CoDiagnosability,
        Property::Predictability,
        Property::CoPredictability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::StrongDetectability => "strong-detectability",
            Property::CoDetectability => "co-detectability",
            Property::Diagnosability => "diagnosability",
            Property::CoDiagnosability => "co-diagnosability",
            Property::Predictability => "predictability",
            Property::CoPredictability => "co-predictability",
        }
    }

    /// Whether the property is stated for a set of local observers.
    pub fn is_decentralized(self) -> bool {
        matches!(self, Property::CoDetectability | Property::CoDiagnosability | Property::CoPredictability)
    }

    /// The decentralized counterpart.
    pub fn decentralized(self) -> Property {
        match self {
            Property::StrongDetectability => Property::CoDetectability,
            Property::Diagnosability => Property::CoDiagnosability,
            Property::Predictability => Property::CoPredictability,
            p => p,
        }
    }

    /// The centralized counterpart.
    pub fn centralized(self) -> Property {
        match self {
            Property::CoDetectability => Property::StrongDetectability,
            Property::CoDiagnosability => Property::Diagnosability,
            Property::CoPredictability => Property::Predictability,
            p => p,
        }
    }

    /// Observers a certificate of this property refers to.
    pub fn effective_observers(self, s: &Fsa, observers: Option<&ObserverSet>) -> Result<ObserverSet, VerifyError> {
        if self.is_decentralized() {
            observers.cloned().ok_or(VerifyError::NeedsObservers(self))
        } else {
            Ok(ObserverSet::global(s))
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown property `{0}`")]
pub struct UnknownProperty(pub String);

impl FromStr for Property {
    type Err = UnknownProperty;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Property::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| UnknownProperty(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("{0} needs at least one local observer")]
    NeedsObservers(Property),
}

/// Outcome of a verifier; a certificate accompanies every violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub property: Property,
    pub holds: bool,
    pub certificate: Option<Certificate>,
}

impl Verdict {
    pub(crate) fn holds(property: Property) -> Self {
        Verdict { property, holds: true, certificate: None }
    }

    pub(crate) fn violated(property: Property, witness: Witness) -> Self {
        Verdict { property, holds: false, certificate: Some(Certificate { property, witness }) }
    }
}

/// Dispatch on `property`; centralized properties ignore `observers`.
pub fn verify(property: Property, s: &Fsa, observers: Option<&ObserverSet>) -> Result<Verdict, VerifyError> {
    let need = || observers.ok_or(VerifyError::NeedsObservers(property));
    Ok(match property {
        Property::StrongDetectability => verify_strong_detectability(s),
        Property::CoDetectability => verify_co_detectability(s, need()?),
        Property::Diagnosability => verify_diagnosability(s),
        Property::CoDiagnosability => verify_co_diagnosability(s, need()?),
        Property::Predictability => verify_predictability(s),
        Property::CoPredictability => verify_co_predictability(s, need()?),
    })
}
