use std::path::Path;

use anyhow::{anyhow, Context};
use clap::{Args, ValueEnum};
use cocomp::fsa::{Dfa, RawDfa};
use cocomp::gadgets::{
    codetectability_from_acyclic, copredictability_from_complete, reduce_path_to_predictability,
    reduce_to_codetectability, reduce_to_copredictability, Provenance, ReductionInstance,
};
use cocomp::random::{random_acyclic_dfa, random_complete_dfa, random_digraph, rng, Digraph};
use cocomp::Property;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Reduction {
    Codet,
    Copred,
    Path,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub reduction: Reduction,
    /// Source file: a JSON array of DFAs, or `{graph, s, t}` for `path`.
    #[arg(long)]
    pub source: Option<String>,
    /// Output directory for `instance.json` and `instance.truth.json`.
    #[arg(long, default_value = ".")]
    pub out: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Normalize the source family before reducing.
    #[arg(long)]
    pub normalize: bool,
    /// Random source: number of DFAs.
    #[arg(long, default_value_t = 2)]
    pub dfas: usize,
    /// Random source: states per DFA, or vertices for `path`.
    #[arg(long, default_value_t = 3)]
    pub states: usize,
    /// Random source: alphabet size.
    #[arg(long, default_value_t = 2)]
    pub alphabet: usize,
    /// Random source: edge probability for `path`.
    #[arg(long, default_value_t = 0.3)]
    pub edge_prob: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PathSource {
    pub graph: Digraph,
    pub s: String,
    pub t: String,
}

/// Sidecar written next to a generated instance.
#[derive(Debug, Serialize, Deserialize)]
pub struct Truth {
    pub property: Property,
    pub expected_holds: Option<bool>,
    pub provenance: Provenance,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &str) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}")).map_err(Failure::Input)?;
    serde_json::from_str(&text).with_context(|| format!("parsing {path}")).map_err(Failure::Input)
}

fn source_dfas(args: &GenerateArgs) -> Result<Vec<Dfa>, Failure> {
    if let Some(path) = &args.source {
        let raws: Vec<RawDfa> = read_json(path)?;
        return raws
            .iter()
            .enumerate()
            .map(|(i, r)| Dfa::from_raw(r).with_context(|| format!("DFA {i} of {path}")).map_err(Failure::Input))
            .collect();
    }
    let mut r = rng(args.seed);
    Ok((0..args.dfas)
        .map(|_| match args.reduction {
            Reduction::Codet => random_acyclic_dfa(&mut r, args.states, args.alphabet),
            _ => random_complete_dfa(&mut r, args.states, args.alphabet),
        })
        .collect())
}

fn reduce(args: &GenerateArgs) -> Result<ReductionInstance, Failure> {
    let precondition = |e: cocomp::gadgets::GadgetError| Failure::Input(anyhow!("precondition violated: {e}"));
    // Random families are arbitrary, so they are always normalized first.
    let normalize = args.normalize || args.source.is_none();
    match args.reduction {
        Reduction::Codet => {
            let dfas = source_dfas(args)?;
            if normalize { codetectability_from_acyclic(&dfas) } else { reduce_to_codetectability(&dfas) }
                .map_err(precondition)
        }
        Reduction::Copred => {
            let dfas = source_dfas(args)?;
            if normalize { copredictability_from_complete(&dfas) } else { reduce_to_copredictability(&dfas) }
                .map_err(precondition)
        }
        Reduction::Path => {
            let src = match &args.source {
                Some(path) => read_json::<PathSource>(path)?,
                None => {
                    let mut r = rng(args.seed);
                    let n = args.states.max(1);
                    let graph = random_digraph(&mut r, n, args.edge_prob);
                    let t = format!("v{}", r.gen_range(0..n));
                    PathSource { graph, s: "v0".into(), t }
                }
            };
            reduce_path_to_predictability(&src.graph, &src.s, &src.t).map_err(precondition)
        }
    }
}

pub fn generate(args: &GenerateArgs) -> Result<Truth, Failure> {
    let r = reduce(args)?;
    let out = Path::new(&args.out);
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display())).map_err(Failure::Input)?;
    let truth = Truth { property: r.property, expected_holds: r.expected_holds, provenance: r.provenance };
    let write = |name: &str, text: String| {
        let p = out.join(name);
        std::fs::write(&p, text + "\n").with_context(|| format!("writing {}", p.display())).map_err(Failure::Internal)
    };
    write("instance.json", pretty(&r.instance.to_raw())?)?;
    write("instance.truth.json", pretty(&truth)?)?;
    Ok(truth)
}

fn pretty<T: Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(v).map_err(|e| Failure::Internal(e.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(reduction: Reduction, seed: u64) -> GenerateArgs {
        GenerateArgs {
            reduction,
            source: None,
            out: String::new(),
            seed,
            normalize: false,
            dfas: 2,
            states: 3,
            alphabet: 2,
            edge_prob: 0.3,
        }
    }

    #[test]
    fn random_sources_are_seeded() {
        for r in [Reduction::Codet, Reduction::Copred, Reduction::Path] {
            let a = reduce(&args(r, 9)).unwrap();
            let b = reduce(&args(r, 9)).unwrap();
            assert_eq!(a.instance.to_raw(), b.instance.to_raw());
            assert_eq!(a.provenance, b.provenance);
        }
    }

    #[test]
    fn single_dfa_is_rejected() {
        let mut a = args(Reduction::Codet, 0);
        a.dfas = 1;
        assert!(matches!(reduce(&a), Err(Failure::Input(_))));
    }
}
