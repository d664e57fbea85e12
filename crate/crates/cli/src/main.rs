//! `possibility`: evaluate contextual constructs, compare them, and plan
//! routes over waypoint graphs.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "possibility", version, about = "Possibility degrees for events and routes")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a construct against a probability file.
    Eval(EvalArgs),
    /// Compare two formulas for strong and classical equivalence.
    Equiv(EquivArgs),
    /// Show the disjunctive normal form of a formula.
    Dnf(DnfArgs),
    /// Score the successors of a waypoint and pick the best.
    Plan(PlanArgs),
    /// Drive from start to goal, reassessing at each waypoint.
    Simulate(SimulateArgs),
    /// Same as `eval --both`.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Semantics {
    Possibility,
    Probability,
}

#[derive(Debug, Args)]
pub struct AtomSource {
    /// Probability file: one `atom = value` per line.
    #[arg(long)]
    probs: PathBuf,
    /// Atom declarations (`prereq NAME` / `constraint NAME`). Without it,
    /// atoms in the probability file are classified by how the construct
    /// uses them.
    #[arg(long)]
    atoms: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    construct: String,
    #[command(flatten)]
    source: AtomSource,
    #[arg(long, value_enum, default_value_t = Semantics::Possibility)]
    semantics: Semantics,
    /// Report both semantics side by side.
    #[arg(long)]
    both: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    construct: String,
    #[command(flatten)]
    source: AtomSource,
}

#[derive(Debug, Args)]
pub struct EquivArgs {
    left: String,
    right: String,
    /// Accept arbitrary propositions, negation anywhere.
    #[arg(long)]
    general: bool,
    /// Atom declarations for construct validation.
    #[arg(long)]
    atoms: Option<PathBuf>,
    /// Seed for the witness search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
pub struct DnfArgs {
    formula: String,
    #[arg(long)]
    general: bool,
    #[arg(long)]
    atoms: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    scenario: PathBuf,
    /// Time bucket to plan at; defaults to the scenario's `time`.
    #[arg(long, allow_hyphen_values = true)]
    at_time: Option<i64>,
    /// Waypoint to plan from; defaults to the scenario's `start`.
    #[arg(long)]
    from: Option<String>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    scenario: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(args) => commands::eval(&args.construct, &args.source, args.semantics, args.both),
        Command::Compare(args) => commands::eval(&args.construct, &args.source, Semantics::Possibility, true),
        Command::Equiv(args) => commands::equiv(&args),
        Command::Dnf(args) => commands::dnf(&args),
        Command::Plan(args) => commands::plan(&args),
        Command::Simulate(args) => commands::simulate(&args),
    };
    let report = match result {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let rendered = if cli.json {
        match serde_json::to_string_pretty(&report) {
            Ok(s) => s + "\n",
            Err(e) => {
                eprintln!("error: cannot serialize report: {e}");
                return ExitCode::from(1);
            }
        }
    } else {
        report.to_string()
    };
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(rendered.as_bytes()).and_then(|()| out.flush()) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
