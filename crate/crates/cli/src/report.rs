//! Structured command results. Text and JSON renderings are both derived from
//! these, so the two never disagree.

use std::collections::BTreeMap;
use std::fmt;

use possibility_core::planner::{TraceLog, TraceRecord};
use possibility_core::Degree;
use serde::{Serialize, Serializer};

/// Degrees serialize as the same rounded value they display as.
fn degree<S: Serializer>(d: &Degree, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(rounded(*d))
}

fn opt_degree<S: Serializer>(d: &Option<Degree>, s: S) -> Result<S::Ok, S::Error> {
    match d {
        Some(d) => s.serialize_some(&rounded(*d)),
        None => s.serialize_none(),
    }
}

fn degree_map<S: Serializer>(m: &BTreeMap<String, Degree>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k, rounded(*v))))
}

fn rounded(d: Degree) -> f64 {
    d.to_string().parse().expect("degree display is a number")
}

#[derive(Debug, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Report {
    Eval(EvalReport),
    Equiv(EquivReport),
    Dnf(DnfReport),
    Plan(PlanReport),
    Simulate(SimulateReport),
}

#[derive(Debug, Serialize)]
pub struct EvalReport {
    pub construct: String,
    pub probs: String,
    #[serde(serialize_with = "opt_degree")]
    pub possibility: Option<Degree>,
    #[serde(serialize_with = "opt_degree")]
    pub probability: Option<Degree>,
}

#[derive(Debug, Serialize)]
pub struct WitnessReport {
    #[serde(serialize_with = "degree_map")]
    pub assignment: BTreeMap<String, Degree>,
    #[serde(serialize_with = "degree")]
    pub left: Degree,
    #[serde(serialize_with = "degree")]
    pub right: Degree,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "snake_case", tag = "result")]
pub enum WitnessOutcome {
    /// The formulas are strongly equivalent, so no search was run.
    NotSearched,
    NoneFound {
        samples: usize,
    },
    Found(WitnessReport),
}

#[derive(Debug, Serialize)]
pub struct EquivReport {
    pub left: String,
    pub right: String,
    pub general: bool,
    pub strong: bool,
    /// `None` when there are too many atoms for the truth-table check.
    pub classical: Option<bool>,
    pub left_canonical: String,
    pub right_canonical: String,
    pub witness: WitnessOutcome,
}

#[derive(Debug, Serialize)]
pub struct DnfReport {
    pub formula: String,
    pub conv: String,
    pub canonical: String,
}

#[derive(Debug, Serialize)]
pub struct PlanReport {
    pub scenario: String,
    pub time: i64,
    pub at: String,
    pub goal: String,
    #[serde(serialize_with = "degree_map")]
    pub options: BTreeMap<String, Degree>,
    pub choice: Option<String>,
    pub leg: Option<String>,
    #[serde(serialize_with = "degree")]
    pub poss: Degree,
    pub status: &'static str,
    /// Composite event for each successor whose routes to the goal are acyclic.
    pub composites: BTreeMap<String, String>,
}

#[derive(Debug, Serialize)]
pub struct TraceRecordReport {
    pub time: i64,
    pub at: String,
    #[serde(serialize_with = "degree_map")]
    pub options: BTreeMap<String, Degree>,
    pub choice: String,
    pub leg: String,
    #[serde(serialize_with = "degree")]
    pub poss: Degree,
}

impl From<&TraceRecord> for TraceRecordReport {
    fn from(r: &TraceRecord) -> Self {
        TraceRecordReport {
            time: r.time,
            at: r.at.clone(),
            options: r.options.clone(),
            choice: r.choice.clone(),
            leg: r.leg.clone(),
            poss: r.poss,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SimulateReport {
    pub scenario: String,
    pub records: Vec<TraceRecordReport>,
    pub status: String,
    pub final_position: String,
    pub final_time: i64,
    #[serde(skip)]
    pub text: String,
}

impl SimulateReport {
    pub fn new(scenario: String, log: &TraceLog) -> Self {
        SimulateReport {
            scenario,
            records: log.records.iter().map(TraceRecordReport::from).collect(),
            status: log.status.to_string(),
            final_position: log.final_position.clone(),
            final_time: log.final_time,
            text: log.to_string(),
        }
    }
}

fn options_text(options: &BTreeMap<String, Degree>) -> String {
    let items: Vec<String> = options.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    format!("{{{}}}", items.join(","))
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Report::Eval(r) => {
                if let Some(d) = r.possibility {
                    writeln!(f, "possibility: {d}")?;
                }
                if let Some(d) = r.probability {
                    writeln!(f, "probability: {d}")?;
                }
                Ok(())
            }
            Report::Equiv(r) => {
                writeln!(f, "strong: {}", r.strong)?;
                match r.classical {
                    Some(c) => writeln!(f, "classical: {c}")?,
                    None => writeln!(f, "classical: not checked (too many atoms)")?,
                }
                writeln!(f, "left:  {}", r.left_canonical)?;
                writeln!(f, "right: {}", r.right_canonical)?;
                match &r.witness {
                    WitnessOutcome::NotSearched => Ok(()),
                    WitnessOutcome::NoneFound { samples } => {
                        writeln!(f, "witness: none found in {samples} samples")
                    }
                    WitnessOutcome::Found(w) => {
                        let values: Vec<String> = w.assignment.iter().map(|(k, v)| format!("{k}={v}")).collect();
                        writeln!(f, "witness: {} left={} right={}", values.join(" "), w.left, w.right)
                    }
                }
            }
            Report::Dnf(r) => {
                writeln!(f, "conv: {}", r.conv)?;
                writeln!(f, "canonical: {}", r.canonical)
            }
            Report::Plan(r) => {
                write!(
                    f,
                    "t={} at={} goal={} options={}",
                    r.time,
                    r.at,
                    r.goal,
                    options_text(&r.options)
                )?;
                match (&r.choice, &r.leg) {
                    (Some(c), Some(l)) => writeln!(f, " choose={c} leg={l} poss={}", r.poss)?,
                    _ => writeln!(f)?,
                }
                for (succ, expr) in &r.composites {
                    writeln!(f, "composite {succ}: {expr}")?;
                }
                writeln!(f, "status={}", r.status)
            }
            Report::Simulate(r) => f.write_str(&r.text),
        }
    }
}
