use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use possibility_core::formula::AtomKind;
use possibility_core::normalize::find_witness;
use possibility_core::planner::{composite_event_via, decide, leg_possibilities, simulate as run_simulation};
use possibility_core::{
    classically_equivalent, conv, parse_proposition, possibility_valuation, probability_valuation, strongly_equivalent,
    to_canonical_dnf, validate_construct, Assignment, AtomId, AtomRegistry, Proposition, Scenario,
};

use crate::report::{
    DnfReport, EquivReport, EvalReport, PlanReport, Report, SimulateReport, WitnessOutcome, WitnessReport,
};
use crate::{AtomSource, DnfArgs, EquivArgs, PlanArgs, Semantics, SimulateArgs};

pub const WITNESS_SAMPLES: usize = 10_000;

/// A problem with the user's input: unreadable file, bad syntax, failed
/// validation. Reported with exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(2)
    }
}

fn input(context: impl std::fmt::Display, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{context}: {msg}"))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse(text: &str) -> Result<Proposition, CliError> {
    parse_proposition(text).map_err(|e| CliError::Input(format!("cannot parse {text:?}: {e}")))
}

/// Reads `prereq NAME` / `constraint NAME` lines; `#` starts a comment.
fn read_atoms(path: &Path) -> Result<AtomRegistry, CliError> {
    let text = read(path)?;
    let mut registry = AtomRegistry::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| input(format_args!("{}:{}", path.display(), i + 1), msg);
        let mut words = line.splitn(3, char::is_whitespace);
        let (kind, name) = match (words.next(), words.next()) {
            (Some("prereq"), Some(name)) => (AtomKind::Prerequisite, name),
            (Some("constraint"), Some(name)) => (AtomKind::Constraint, name),
            _ => return Err(at("expected `prereq NAME` or `constraint NAME`".into())),
        };
        let description = words.next().unwrap_or("").trim();
        let atom = AtomId::new(name).map_err(|e| at(e.to_string()))?;
        registry
            .register(atom, kind, description)
            .map_err(|e| at(e.to_string()))?;
    }
    Ok(registry)
}

fn validated(prop: Proposition, registry: &AtomRegistry) -> Result<Proposition, CliError> {
    let shown = prop.to_string();
    validate_construct(prop, registry, true)
        .map(|c| c.into_prop())
        .map_err(|e| CliError::Input(format!("{shown}: {e}")))
}

pub fn eval(text: &str, source: &AtomSource, semantics: Semantics, both: bool) -> Result<Report, CliError> {
    let prop = parse(text)?;
    let probs = Assignment::parse(&read(&source.probs)?).map_err(|e| input(source.probs.display(), e))?;
    let registry = match &source.atoms {
        Some(path) => read_atoms(path)?,
        None => AtomRegistry::inferred(probs.atoms(), &prop),
    };
    let construct = validate_construct(prop, &registry, true).map_err(|e| CliError::Input(e.to_string()))?;
    let want_poss = both || semantics == Semantics::Possibility;
    let want_prob = both || semantics == Semantics::Probability;
    let possibility = want_poss
        .then(|| possibility_valuation(&construct, &probs))
        .transpose()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let probability = want_prob
        .then(|| probability_valuation(construct.prop(), &probs))
        .transpose()
        .map_err(|e| CliError::Input(e.to_string()))?;
    Ok(Report::Eval(EvalReport {
        construct: construct.to_string(),
        probs: source.probs.display().to_string(),
        possibility,
        probability,
    }))
}

fn formula_registry(atoms: Option<&Path>, props: &[&Proposition]) -> Result<AtomRegistry, CliError> {
    match atoms {
        Some(path) => read_atoms(path),
        None => {
            let all = Proposition::and_all(props.iter().map(|p| (*p).clone())).expect("at least one formula");
            Ok(AtomRegistry::inferred(&all.atoms(), &all))
        }
    }
}

pub fn equiv(args: &EquivArgs) -> Result<Report, CliError> {
    let mut left = parse(&args.left)?;
    let mut right = parse(&args.right)?;
    if !args.general {
        let registry = formula_registry(args.atoms.as_deref(), &[&left, &right])?;
        left = validated(left, &registry)?;
        right = validated(right, &registry)?;
    }
    let strong = strongly_equivalent(&left, &right);
    let classical = classically_equivalent(&left, &right).ok();
    let witness = if strong {
        WitnessOutcome::NotSearched
    } else {
        match find_witness(&left, &right, WITNESS_SAMPLES, args.seed) {
            None => WitnessOutcome::NoneFound {
                samples: WITNESS_SAMPLES,
            },
            Some(w) => WitnessOutcome::Found(WitnessReport {
                assignment: w.assignment.iter().map(|(k, v)| (k.to_string(), v)).collect(),
                left: w.left,
                right: w.right,
            }),
        }
    };
    Ok(Report::Equiv(EquivReport {
        left: left.to_string(),
        right: right.to_string(),
        general: args.general,
        strong,
        classical,
        left_canonical: to_canonical_dnf(&left).to_string(),
        right_canonical: to_canonical_dnf(&right).to_string(),
        witness,
    }))
}

pub fn dnf(args: &DnfArgs) -> Result<Report, CliError> {
    let mut prop = parse(&args.formula)?;
    if !args.general {
        let registry = formula_registry(args.atoms.as_deref(), &[&prop])?;
        prop = validated(prop, &registry)?;
    }
    let converted = conv(&prop);
    Ok(Report::Dnf(DnfReport {
        formula: prop.to_string(),
        conv: converted.to_string(),
        canonical: to_canonical_dnf(&prop).to_string(),
    }))
}

fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    Scenario::parse(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn plan(args: &PlanArgs) -> Result<Report, CliError> {
    let scenario = load_scenario(&args.scenario)?;
    let time = args.at_time.unwrap_or(scenario.start_time);
    let at = args.from.clone().unwrap_or_else(|| scenario.start.clone());
    let graph = &scenario.graph;
    if !graph.contains_node(&at) {
        return Err(CliError::Input(format!("unknown waypoint {at}")));
    }
    let goal = scenario.goal.clone();
    let poss = leg_possibilities(graph, &scenario.table, &scenario.overrides, time)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let decision = decide(graph, &poss, &at, &goal);
    let mut composites = BTreeMap::new();
    if at != goal {
        for succ in decision.options.keys() {
            if let Ok(expr) = composite_event_via(graph, &at, succ, &goal) {
                composites.insert(succ.clone(), expr.to_string());
            }
        }
    }
    let status = if at == goal {
        "Arrived"
    } else if decision.choice.is_some() {
        "Planned"
    } else {
        "DeadEnd"
    };
    let (choice, leg) = decision.choice.map_or((None, None), |(c, l)| (Some(c), Some(l)));
    Ok(Report::Plan(PlanReport {
        scenario: args.scenario.display().to_string(),
        time,
        at,
        goal,
        options: decision.options,
        choice,
        leg,
        poss: decision.poss,
        status,
        composites,
    }))
}

pub fn simulate(args: &SimulateArgs) -> Result<Report, CliError> {
    let scenario = load_scenario(&args.scenario)?;
    let log = run_simulation(&scenario).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(Report::Simulate(SimulateReport::new(
        args.scenario.display().to_string(),
        &log,
    )))
}
