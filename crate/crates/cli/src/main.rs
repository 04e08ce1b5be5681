//! `cocomp`: verify, compose and generate instances from the command line.
//!
//! Exit status: 0 every verdict holds, 1 some verdict is violated,
//! 2 input error, 3 internal error.

mod generate;
mod report;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cocomp::composition::{
    diagnosis_composition, diamond_composition, observer_composition, prediction_composition, Composition,
};
use cocomp::{Fsa, ObserverSet, Property};
use rayon::prelude::*;

use generate::GenerateArgs;
use report::{Options, Report};

#[derive(Debug)]
pub enum Failure {
    Input(anyhow::Error),
    Internal(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cocomp", version, about = "Detectability, diagnosability and predictability verifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide properties of instances and print JSON reports.
    Verify(VerifyArgs),
    /// Decide properties with the brute-force oracle only.
    Oracle(VerifyArgs),
    /// Build a composition and write it as DOT or JSON.
    Compose(ComposeArgs),
    /// Write an instance with a known verdict built from a DFA family or a graph.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Instance files.
    #[arg(required = true)]
    instances: Vec<String>,
    /// Property to decide; repeat for several, or use `all`.
    #[arg(long = "property", short, required = true)]
    properties: Vec<String>,
    /// Attach evidence pumped `k` times to each certificate.
    #[arg(long, value_name = "K")]
    pump: Option<usize>,
    /// Cross-check each verdict with the brute-force oracle.
    #[arg(long)]
    oracle: bool,
    /// Write the composition the verifier searched as DOT (single instance and property).
    #[arg(long, value_name = "PATH")]
    dot: Option<String>,
    /// Write the reports to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    json: Option<String>,
    /// Number of parallel jobs.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// CC⋄(S; S1, …, SL).
    Diamond,
    /// CC(S; S1, …, SL).
    Plain,
    /// CC(S; S1ⁿ, …, SLⁿ).
    Diagnosis,
    /// CC(Sⁿ; S1ⁿ, …, SLⁿ).
    Prediction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Debug, Args)]
struct ComposeArgs {
    instance: String,
    #[arg(long, value_enum, default_value = "diamond")]
    kind: Kind,
    /// Use the single global observer instead of the instance's observers.
    #[arg(long)]
    global: bool,
    #[arg(long, value_enum, default_value = "dot")]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<String>,
}

fn parse_properties(names: &[String]) -> Result<Vec<Property>, Failure> {
    let mut out: Vec<Property> = Vec::new();
    for n in names {
        let ps = if n == "all" {
            Property::ALL.to_vec()
        } else {
            vec![n.parse::<Property>().map_err(|e| Failure::Input(anyhow!(e)))?]
        };
        for p in ps {
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

fn write_output(path: Option<&str>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {p}")).map_err(Failure::Input),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Failure::Internal(e.into()))
        }
    }
}

fn composition(s: &Fsa, observers: &ObserverSet, kind: Kind) -> Composition {
    match kind {
        Kind::Diamond => diamond_composition(s, observers),
        Kind::Plain => observer_composition(s, s, &observers.labelings(s)),
        Kind::Diagnosis => diagnosis_composition(s, observers),
        Kind::Prediction => prediction_composition(s, observers),
    }
}

fn searched_kind(p: Property) -> Kind {
    match p {
        Property::StrongDetectability | Property::CoDetectability => Kind::Diamond,
        Property::Diagnosability | Property::CoDiagnosability => Kind::Diagnosis,
        Property::Predictability | Property::CoPredictability => Kind::Prediction,
    }
}

fn cmd_verify(args: &VerifyArgs, naive_only: bool) -> Result<bool, Failure> {
    let properties = parse_properties(&args.properties)?;
    let loaded = args.instances.iter().map(|p| report::load(p)).collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(usize, Property)> =
        (0..loaded.len()).flat_map(|i| properties.iter().map(move |&p| (i, p))).collect();
    let opts = Options { pump: args.pump, oracle: args.oracle, naive_only };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()
        .map_err(|e| Failure::Internal(e.into()))?;
    let results: Vec<Result<Report, Failure>> =
        pool.install(|| jobs.par_iter().map(|&(i, p)| report::run(&loaded[i], p, &opts)).collect());
    let reports = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    if let Some(dot) = &args.dot {
        let [(i, p)] = jobs[..] else {
            return Err(Failure::Input(anyhow!("--dot needs exactly one instance and one property")));
        };
        let inst = &loaded[i].instance;
        let obs = p.effective_observers(&inst.fsa, inst.observers.as_ref()).map_err(|e| Failure::Input(e.into()))?;
        write_output(Some(dot), &composition(&inst.fsa, &obs, searched_kind(p)).to_dot())?;
    }

    let text = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0])
    } else {
        serde_json::to_string_pretty(&reports)
    }
    .map_err(|e| Failure::Internal(e.into()))?;
    write_output(args.json.as_deref(), &(text + "\n"))?;
    Ok(reports.iter().all(|r| r.holds))
}

fn cmd_compose(args: &ComposeArgs) -> Result<(), Failure> {
    let loaded = report::load(&args.instance)?;
    let s = &loaded.instance.fsa;
    let obs = if args.global {
        ObserverSet::global(s)
    } else {
        loaded.instance.observers().map_err(|e| Failure::Input(e.into()))?.clone()
    };
    let c = composition(s, &obs, args.kind);
    let text = match args.format {
        Format::Dot => c.to_dot(),
        Format::Json => serde_json::to_string_pretty(&c.to_json()).map_err(|e| Failure::Internal(e.into()))? + "\n",
    };
    write_output(args.out.as_deref(), &text)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Verify(a) => cmd_verify(&a, false),
        Command::Oracle(a) => cmd_verify(&a, true),
        Command::Compose(a) => cmd_compose(&a).map(|_| true),
        Command::Generate(a) => {
            let truth = generate::generate(&a)?;
            let summary = serde_json::json!({
                "instance": std::path::Path::new(&a.out).join("instance.json"),
                "truth": std::path::Path::new(&a.out).join("instance.truth.json"),
                "property": truth.property,
                "expected_holds": truth.expected_holds,
            });
            let text = serde_json::to_string_pretty(&summary).map_err(|e| Failure::Internal(e.into()))?;
            write_output(None, &(text + "\n")).map(|_| true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    std::panic::set_hook(Box::new(|info| eprintln!("internal error: {info}")));
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(true)) => ExitCode::SUCCESS,
        Ok(Ok(false)) => ExitCode::from(1),
        Ok(Err(f)) => {
            let code = f.code();
            let (Failure::Input(e) | Failure::Internal(e)) = f;
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
        Err(_) => ExitCode::from(3),
    }
}
