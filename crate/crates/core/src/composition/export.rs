use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{Composition, Kind};
use crate::fsa::{Fsa, EPSILON};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering of an automaton; edges carry `event/label`.
pub fn fsa_to_dot(fsa: &Fsa) -> String {
    let mut out = String::from("digraph fsa {\n  rankdir=LR;\n");
    for x in fsa.state_ids() {
        let shape = if fsa.is_initial(x) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  {} [shape={shape}];", quote(fsa.state_name(x)));
    }
    for (x, e, y) in fsa.transitions() {
        let label = fsa.label(e).map_or(EPSILON, |l| fsa.label_name(l));
        let fault = if fsa.is_faulty(e) { ", color=red" } else { "" };
        let _ = writeln!(
            out,
            "  {} -> {} [label={}{fault}];",
            quote(fsa.state_name(x)),
            quote(fsa.state_name(y)),
            quote(&format!("{}/{}", fsa.event_name(e), label))
        );
    }
    out.push_str("}\n");
    out
}

impl Composition {
    /// Graphviz rendering; node names are `|`-joined entry vectors.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph composition {\n  rankdir=LR;\n");
        for v in 0..self.num_states() as u32 {
            let shape = if self.is_initial(v) { "doubleoctagon" } else { "box" };
            let _ = writeln!(out, "  {} [shape={shape}];", quote(&self.state_label(v)));
        }
        for v in 0..self.num_states() as u32 {
            for e in self.edges(v) {
                let _ = writeln!(
                    out,
                    "  {} -> {} [label={}];",
                    quote(&self.state_label(v)),
                    quote(&self.state_label(e.target)),
                    quote(&format!("({})", self.render_moves(e.moves).replace('|', ",")))
                );
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> CompositionJson {
        let state = |v: u32| -> Vec<String> {
            self.state(v).iter().enumerate().map(|(i, &e)| self.entry_name(i, e).to_string()).collect()
        };
        let mut transitions = Vec::new();
        for v in 0..self.num_states() as u32 {
            for e in self.edges(v) {
                let moves = e.moves.iter().enumerate().map(|(i, &m)| self.move_name(i, m).to_string()).collect();
                transitions.push((state(v), moves, state(e.target)));
            }
        }
        CompositionJson {
            kind: match self.kind {
                Kind::Plain => "plain".into(),
                Kind::Diamond => "diamond".into(),
            },
            components: self.names.iter().map(|n| n.title.clone()).collect(),
            states: (0..self.num_states() as u32).map(state).collect(),
            initial: self.initial.iter().map(|&v| state(v)).collect(),
            transitions,
        }
    }
}

/// JSON dump of a composition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionJson {
    pub kind: String,
    pub components: Vec<String>,
    pub states: Vec<Vec<String>>,
    pub initial: Vec<Vec<String>>,
    pub transitions: Vec<(Vec<String>, Vec<String>, Vec<String>)>,
}
