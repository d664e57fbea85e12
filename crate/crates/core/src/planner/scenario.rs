//! Line-oriented scenario files.
//!
//! ```text
//! node <id>
//! leg <id> <from> <to> "<construct>"
//! prereq <atom> "<description>"
//! constraint <atom> "<description>"
//! prob <leg> <atom> <value>
//! prob <leg> <atom> @<time> <value>
//! override @<time> <leg> <atom> <value>
//! start <node>
//! goal <node>
//! time <int>
//! legduration <int>
//! maxsteps <int>
//! ```
//!
//! `#` starts a comment outside quotes. Directives may appear in any order.

use crate::formula::{parse_proposition, validate_construct, AtomId, AtomKind, AtomRegistry};
use crate::valuation::Degree;

use super::table::{Override, ProbTable};
use super::{PlanError, TimeBucket, WaypointGraph};

pub const DEFAULT_MAX_STEPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub registry: AtomRegistry,
    pub graph: WaypointGraph,
    pub table: ProbTable,
    pub overrides: Vec<Override>,
    pub start: String,
    pub goal: String,
    pub start_time: TimeBucket,
    /// Time buckets consumed by each leg traversal; at least 1.
    pub leg_duration: u32,
    pub max_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ScenarioError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ScenarioError {
    ScenarioError {
        line,
        message: message.into(),
    }
}

/// Splits a line into whitespace-separated words; `"..."` is one word.
fn tokenize(line: &str, line_no: usize) -> Result<Vec<String>, ScenarioError> {
    let mut words = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some(&(_, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '#' {
            break;
        } else if c == '"' {
            chars.next();
            let mut word = String::new();
            loop {
                match chars.next() {
                    Some((_, '"')) => break,
                    Some((_, ch)) => word.push(ch),
                    None => return Err(err(line_no, "unterminated quoted string")),
                }
            }
            words.push(word);
        } else {
            let mut word = String::new();
            while let Some(&(_, ch)) = chars.peek() {
                if ch.is_whitespace() || ch == '"' || ch == '#' {
                    break;
                }
                word.push(ch);
                chars.next();
            }
            words.push(word);
        }
    }
    Ok(words)
}

fn id(word: &str, line: usize, what: &str) -> Result<String, ScenarioError> {
    if !word.is_empty() && word.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        Ok(word.to_string())
    } else {
        Err(err(line, format!("invalid {what} id {word:?}")))
    }
}

fn atom(word: &str, line: usize) -> Result<AtomId, ScenarioError> {
    AtomId::new(word).map_err(|e| err(line, e.to_string()))
}

fn probability(word: &str, line: usize) -> Result<Degree, ScenarioError> {
    let value: f64 = word
        .parse()
        .map_err(|_| err(line, format!("invalid probability {word:?}")))?;
    Degree::new(value).map_err(|e| err(line, e.to_string()))
}

fn time_bucket(word: &str, line: usize) -> Result<TimeBucket, ScenarioError> {
    let digits = word
        .strip_prefix('@')
        .ok_or_else(|| err(line, format!("expected @<time>, found {word:?}")))?;
    digits
        .parse()
        .map_err(|_| err(line, format!("invalid time bucket {word:?}")))
}

fn integer<T: std::str::FromStr>(word: &str, line: usize) -> Result<T, ScenarioError> {
    word.parse().map_err(|_| err(line, format!("invalid integer {word:?}")))
}

struct PendingLeg {
    line: usize,
    id: String,
    from: String,
    to: String,
    text: String,
}

struct PendingProb {
    line: usize,
    leg: String,
    atom: AtomId,
    time: Option<TimeBucket>,
    value: Degree,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
        let mut registry = AtomRegistry::new();
        let mut graph = WaypointGraph::new();
        let mut legs = Vec::new();
        let mut probs = Vec::new();
        let mut overrides: Vec<(usize, Override)> = Vec::new();
        let (mut start, mut goal) = (None, None);
        let mut start_time: TimeBucket = 0;
        let mut leg_duration: u32 = 1;
        let mut max_steps = DEFAULT_MAX_STEPS;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let words = tokenize(raw, line)?;
            let Some((directive, args)) = words.split_first() else {
                continue;
            };
            let arity = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(err(
                        line,
                        format!("`{directive}` takes {n} arguments, found {}", args.len()),
                    ))
                }
            };
            match directive.as_str() {
                "node" => {
                    arity(1)?;
                    if !graph.add_node(id(&args[0], line, "node")?) {
                        return Err(err(line, format!("node {} declared twice", args[0])));
                    }
                }
                "leg" => {
                    arity(4)?;
                    legs.push(PendingLeg {
                        line,
                        id: id(&args[0], line, "leg")?,
                        from: id(&args[1], line, "node")?,
                        to: id(&args[2], line, "node")?,
                        text: args[3].clone(),
                    });
                }
                "prereq" | "constraint" => {
                    if args.is_empty() || args.len() > 2 {
                        return Err(err(
                            line,
                            format!("`{directive}` takes an atom and an optional description"),
                        ));
                    }
                    let kind = if directive == "prereq" {
                        AtomKind::Prerequisite
                    } else {
                        AtomKind::Constraint
                    };
                    let desc = args.get(1).cloned().unwrap_or_default();
                    registry
                        .register(atom(&args[0], line)?, kind, desc)
                        .map_err(|e| err(line, e.to_string()))?;
                }
                "prob" => {
                    let (time, value) = match args.len() {
                        3 => (None, &args[2]),
                        4 => (Some(time_bucket(&args[2], line)?), &args[3]),
                        n => return Err(err(line, format!("`prob` takes 3 or 4 arguments, found {n}"))),
                    };
                    probs.push(PendingProb {
                        line,
                        leg: id(&args[0], line, "leg")?,
                        atom: atom(&args[1], line)?,
                        time,
                        value: probability(value, line)?,
                    });
                }
                "override" => {
                    arity(4)?;
                    overrides.push((
                        line,
                        Override {
                            at_time: time_bucket(&args[0], line)?,
                            leg: id(&args[1], line, "leg")?,
                            atom: atom(&args[2], line)?,
                            value: probability(&args[3], line)?,
                        },
                    ));
                }
                "start" => {
                    arity(1)?;
                    start = Some((line, args[0].clone()));
                }
                "goal" => {
                    arity(1)?;
                    goal = Some((line, args[0].clone()));
                }
                "time" => {
                    arity(1)?;
                    start_time = integer(&args[0], line)?;
                }
                "legduration" => {
                    arity(1)?;
                    leg_duration = integer(&args[0], line)?;
                    if leg_duration == 0 {
                        return Err(err(line, "legduration must be at least 1"));
                    }
                }
                "maxsteps" => {
                    arity(1)?;
                    max_steps = integer(&args[0], line)?;
                }
                other => return Err(err(line, format!("unknown directive {other:?}"))),
            }
        }

        for leg in legs {
            let prop = parse_proposition(&leg.text).map_err(|e| err(leg.line, format!("leg {}: {e}", leg.id)))?;
            let context =
                validate_construct(prop, &registry, true).map_err(|e| err(leg.line, format!("leg {}: {e}", leg.id)))?;
            graph
                .add_leg(leg.id, leg.from, leg.to, context)
                .map_err(|e| err(leg.line, e.to_string()))?;
        }

        let check_ref = |line: usize, leg: &str, atom: &AtomId| -> Result<(), ScenarioError> {
            let l = graph.leg(leg).ok_or_else(|| err(line, format!("unknown leg {leg}")))?;
            if !l.context.prop().atoms().contains(atom) {
                return Err(err(
                    line,
                    format!("atom {atom} does not occur in the context of leg {leg}"),
                ));
            }
            Ok(())
        };
        let mut table = ProbTable::new();
        for p in probs {
            check_ref(p.line, &p.leg, &p.atom)?;
            match p.time {
                Some(t) => table.set_at(p.leg, p.atom, t, p.value),
                None => table.set_default(p.leg, p.atom, p.value),
            }
        }
        for (line, o) in &overrides {
            check_ref(*line, &o.leg, &o.atom)?;
        }

        let endpoint = |slot: Option<(usize, String)>, what: &str| -> Result<String, ScenarioError> {
            let (line, node) = slot.ok_or_else(|| err(0, format!("missing `{what}` directive")))?;
            if graph.contains_node(&node) {
                Ok(node)
            } else {
                Err(err(line, format!("unknown node {node}")))
            }
        };
        let start = endpoint(start, "start")?;
        let goal = endpoint(goal, "goal")?;

        Ok(Scenario {
            registry,
            graph,
            table,
            overrides: overrides.into_iter().map(|(_, o)| o).collect(),
            start,
            goal,
            start_time,
            leg_duration,
            max_steps,
        })
    }
}

impl std::str::FromStr for Scenario {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::parse(s)
    }
}

impl From<PlanError> for ScenarioError {
    fn from(e: PlanError) -> Self {
        err(0, e.to_string())
    }
}
