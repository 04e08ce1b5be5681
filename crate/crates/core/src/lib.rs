//! Verification of detectability, diagnosability and predictability of
//! finite-state automata under decentralized observation, built on the
//! concurrent composition of an automaton with its local observers.
//!
//! ```
//! use cocomp::{catalog, verify};
//!
//! let inst = catalog::branching();
//! let verdict = verify::verify_co_detectability(&inst.fsa, inst.observers().unwrap());
//! assert!(!verdict.holds);
//! ```

pub mod catalog;
pub mod composition;
pub mod fsa;
pub mod gadgets;
pub mod graph;
pub mod oracle;
pub mod random;
pub mod verify;

pub use composition::{Composition, Entry, Move};
pub use fsa::{Dfa, EventId, Fsa, Instance, Labeling, Observer, ObserverSet, Run, StateId};
pub use verify::{Certificate, Property, Verdict};
