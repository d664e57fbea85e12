use std::collections::BTreeMap;
use std::fmt;

use crate::valuation::Degree;

use super::search::decide;
use super::table::leg_possibilities;
use super::{PlanError, Scenario, TimeBucket};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceStatus {
    Arrived,
    DeadEnd,
    /// The decision budget ran out before reaching the goal.
    StepLimit,
}

impl fmt::Display for TraceStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceStatus::Arrived => "Arrived",
            TraceStatus::DeadEnd => "DeadEnd",
            TraceStatus::StepLimit => "StepLimit",
        })
    }
}

/// One decision taken at a waypoint.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub time: TimeBucket,
    pub at: String,
    pub options: BTreeMap<String, Degree>,
    pub choice: String,
    pub leg: String,
    pub poss: Degree,
}

impl fmt::Display for TraceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={} at={} options={{", self.time, self.at)?;
        for (i, (succ, d)) in self.options.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{succ}:{d}")?;
        }
        write!(f, "}} choose={} poss={}", self.choice, self.poss)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceLog {
    pub records: Vec<TraceRecord>,
    pub status: TraceStatus,
    /// Where the run stopped and when.
    pub final_position: String,
    pub final_time: TimeBucket,
}

impl TraceLog {
    /// Waypoints visited, starting point included.
    pub fn visited(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self.records.iter().map(|r| r.at.as_str()).collect();
        out.push(&self.final_position);
        out
    }
}

impl fmt::Display for TraceLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            writeln!(f, "{r}")?;
        }
        writeln!(f, "status={}", self.status)
    }
}

/// Drives a vehicle from the scenario's start to its goal, reassessing the
/// route at each waypoint under the probabilities and overrides in force at
/// that moment.
pub fn simulate(scenario: &Scenario) -> Result<TraceLog, PlanError> {
    let graph = &scenario.graph;
    let mut at = scenario.start.clone();
    let mut time = scenario.start_time;
    let mut records = Vec::new();
    let status = loop {
        if at == scenario.goal {
            break TraceStatus::Arrived;
        }
        if records.len() >= scenario.max_steps {
            break TraceStatus::StepLimit;
        }
        let poss = leg_possibilities(graph, &scenario.table, &scenario.overrides, time)?;
        let decision = decide(graph, &poss, &at, &scenario.goal);
        let Some((next, leg)) = decision.choice else {
            break TraceStatus::DeadEnd;
        };
        records.push(TraceRecord {
            time,
            at: at.clone(),
            options: decision.options,
            choice: next.clone(),
            leg,
            poss: decision.poss,
        });
        at = next;
        time += TimeBucket::from(scenario.leg_duration);
    };
    Ok(TraceLog {
        records,
        status,
        final_position: at,
        final_time: time,
    })
}
