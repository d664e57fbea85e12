use std::collections::BTreeMap;

use crate::formula::AtomId;
use crate::valuation::{possibility_valuation, Degree, ProbAssignment};

use super::{PlanError, TimeBucket, WaypointGraph};

/// Per-leg atom probabilities, optionally varying by time bucket.
///
/// A lookup for `(leg, atom, t)` uses the bucketed entry when one exists and
/// falls back to the leg's default for that atom.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProbTable {
    defaults: BTreeMap<(String, AtomId), Degree>,
    bucketed: BTreeMap<(String, AtomId, TimeBucket), Degree>,
}

impl ProbTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_default(&mut self, leg: impl Into<String>, atom: AtomId, p: Degree) {
        self.defaults.insert((leg.into(), atom), p);
    }

    pub fn set_at(&mut self, leg: impl Into<String>, atom: AtomId, time: TimeBucket, p: Degree) {
        self.bucketed.insert((leg.into(), atom, time), p);
    }

    pub fn lookup(&self, leg: &str, atom: &AtomId, time: TimeBucket) -> Option<Degree> {
        let key = (leg.to_string(), atom.clone());
        self.bucketed
            .get(&(key.0.clone(), key.1.clone(), time))
            .or_else(|| self.defaults.get(&key))
            .copied()
    }
}

/// A live report replacing one probability from `at_time` on.
#[derive(Debug, Clone, PartialEq)]
pub struct Override {
    pub at_time: TimeBucket,
    pub leg: String,
    pub atom: AtomId,
    pub value: Degree,
}

/// Probability of `atom` on `leg` at `time` after overrides. Among overrides
/// already in force the one with the latest `at_time` wins, later list
/// entries breaking ties.
pub fn effective_probability(
    table: &ProbTable,
    overrides: &[Override],
    leg: &str,
    atom: &AtomId,
    time: TimeBucket,
) -> Option<Degree> {
    let mut best: Option<&Override> = None;
    for o in overrides {
        if o.leg == leg && &o.atom == atom && o.at_time <= time && best.is_none_or(|b| o.at_time >= b.at_time) {
            best = Some(o);
        }
    }
    best.map(|o| o.value).or_else(|| table.lookup(leg, atom, time))
}

/// `Poss(E_leg) = v(C_leg)` under the probabilities in force at `time`.
pub fn leg_possibility(
    graph: &WaypointGraph,
    leg: &str,
    table: &ProbTable,
    overrides: &[Override],
    time: TimeBucket,
) -> Result<Degree, PlanError> {
    let leg = graph.require_leg(leg)?;
    let mut probs = ProbAssignment::new();
    for atom in leg.context.prop().atoms() {
        let p = effective_probability(table, overrides, &leg.id, &atom, time).ok_or_else(|| {
            PlanError::MissingProbability {
                leg: leg.id.clone(),
                atom: atom.clone(),
                time,
            }
        })?;
        probs.set(atom, p);
    }
    Ok(possibility_valuation(&leg.context, &probs).expect("every atom assigned"))
}

/// Possibility of every leg at one instant.
pub type LegPossibilities = BTreeMap<String, Degree>;

pub fn leg_possibilities(
    graph: &WaypointGraph,
    table: &ProbTable,
    overrides: &[Override],
    time: TimeBucket,
) -> Result<LegPossibilities, PlanError> {
    graph
        .legs()
        .iter()
        .map(|leg| Ok((leg.id.clone(), leg_possibility(graph, &leg.id, table, overrides, time)?)))
        .collect()
}
