//! Maximin (widest path) reachability and next-waypoint decisions.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use crate::valuation::Degree;

use super::table::{leg_possibilities, leg_possibility, LegPossibilities, Override, ProbTable};
use super::{PlanError, TimeBucket, WaypointGraph};

/// Minimum leg possibility along `path`, a sequence of leg ids.
///
/// With `leg_duration = Some(d)` the k-th leg is evaluated at `time + k * d`;
/// with `None` every leg is evaluated at `time`. The empty path scores 1.
pub fn route_possibility(
    graph: &WaypointGraph,
    path: &[&str],
    table: &ProbTable,
    overrides: &[Override],
    time: TimeBucket,
    leg_duration: Option<u32>,
) -> Result<Degree, PlanError> {
    let legs = path
        .iter()
        .map(|id| graph.require_leg(id))
        .collect::<Result<Vec<_>, _>>()?;
    for pair in legs.windows(2) {
        if pair[0].to != pair[1].from {
            return Err(PlanError::DisconnectedPath {
                after: pair[0].id.clone(),
                before: pair[1].id.clone(),
            });
        }
    }
    let mut poss = Degree::ONE;
    for (k, leg) in legs.iter().enumerate() {
        let t = match leg_duration {
            Some(d) => time + k as TimeBucket * TimeBucket::from(d),
            None => time,
        };
        poss = poss.and(leg_possibility(graph, &leg.id, table, overrides, t)?);
    }
    Ok(poss)
}

#[derive(Debug, PartialEq)]
struct Frontier<'a> {
    poss: Degree,
    node: &'a str,
}

impl Eq for Frontier<'_> {}

impl Ord for Frontier<'_> {
    // Max-heap on possibility; smaller node id first on ties.
    fn cmp(&self, other: &Self) -> Ordering {
        self.poss.total_cmp(&other.poss).then_with(|| other.node.cmp(self.node))
    }
}

impl PartialOrd for Frontier<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// For every waypoint that can reach `goal`, the best achievable minimum leg
/// possibility over paths to `goal`. Best-first search backwards from `goal`;
/// `goal` itself maps to 1. Waypoints absent from the map cannot reach it.
pub fn reach_all(graph: &WaypointGraph, poss: &LegPossibilities, goal: &str) -> BTreeMap<String, Degree> {
    let mut best: BTreeMap<&str, Degree> = BTreeMap::new();
    let mut settled: BTreeMap<&str, Degree> = BTreeMap::new();
    let mut heap = BinaryHeap::new();
    if let Some(goal) = graph.nodes().find(|n| *n == goal) {
        best.insert(goal, Degree::ONE);
        heap.push(Frontier {
            poss: Degree::ONE,
            node: goal,
        });
    }
    while let Some(Frontier { poss: value, node }) = heap.pop() {
        if settled.contains_key(node) {
            continue;
        }
        settled.insert(node, value);
        for leg in graph.incoming(node) {
            let from = leg.from.as_str();
            if settled.contains_key(from) {
                continue;
            }
            let cand = value.and(poss.get(&leg.id).copied().unwrap_or(Degree::ZERO));
            if best.get(from).is_none_or(|b| cand > *b) {
                best.insert(from, cand);
                heap.push(Frontier { poss: cand, node: from });
            }
        }
    }
    settled.into_iter().map(|(n, d)| (n.to_string(), d)).collect()
}

/// Maximin reachability from precomputed leg possibilities.
pub fn widest_reach(graph: &WaypointGraph, poss: &LegPossibilities, from: &str, goal: &str) -> Degree {
    if from == goal {
        return Degree::ONE;
    }
    reach_all(graph, poss, goal).get(from).copied().unwrap_or(Degree::ZERO)
}

/// Best over paths from `from` to `goal` of the weakest leg, with all legs
/// evaluated at `time`. 1 when `from == goal`, 0 when `goal` is unreachable.
pub fn reach_possibility(
    graph: &WaypointGraph,
    from: &str,
    goal: &str,
    table: &ProbTable,
    overrides: &[Override],
    time: TimeBucket,
) -> Result<Degree, PlanError> {
    graph.require_node(from)?;
    graph.require_node(goal)?;
    let poss = leg_possibilities(graph, table, overrides, time)?;
    Ok(widest_reach(graph, &poss, from, goal))
}

/// Outcome of assessing the successors of a waypoint.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    /// For each successor, `min(leg, reach from successor)` over its best leg.
    pub options: BTreeMap<String, Degree>,
    /// Chosen successor and the leg leading to it; `None` at a dead end.
    pub choice: Option<(String, String)>,
    pub poss: Degree,
}

/// Scores every successor of `at` and picks the best. Ties go to the
/// lexicographically smallest waypoint, then leg id.
pub fn decide(graph: &WaypointGraph, poss: &LegPossibilities, at: &str, goal: &str) -> Decision {
    let reach = reach_all(graph, poss, goal);
    let mut options: BTreeMap<String, Degree> = BTreeMap::new();
    let mut best: Option<(Degree, &str, &str)> = None;
    for leg in graph.outgoing(at) {
        if leg.to == at {
            continue;
        }
        let leg_poss = poss.get(&leg.id).copied().unwrap_or(Degree::ZERO);
        let value = leg_poss.and(reach.get(&leg.to).copied().unwrap_or(Degree::ZERO));
        let entry = options.entry(leg.to.clone()).or_insert(Degree::ZERO);
        *entry = entry.or(value);
        let better = match best {
            None => true,
            Some((b, to, id)) => value > b || (value == b && (leg.to.as_str(), leg.id.as_str()) < (to, id)),
        };
        if better {
            best = Some((value, &leg.to, &leg.id));
        }
    }
    match best {
        Some((value, to, leg)) if value > Degree::ZERO => Decision {
            options,
            choice: Some((to.to_string(), leg.to_string())),
            poss: value,
        },
        _ => Decision {
            options,
            choice: None,
            poss: Degree::ZERO,
        },
    }
}

/// Successor of `at` on the most possible route to `goal`, with its score.
pub fn best_next_waypoint(
    graph: &WaypointGraph,
    at: &str,
    goal: &str,
    table: &ProbTable,
    overrides: &[Override],
    time: TimeBucket,
) -> Result<(String, Degree), PlanError> {
    graph.require_node(at)?;
    graph.require_node(goal)?;
    if at == goal {
        return Err(PlanError::AlreadyAtGoal(at.to_string()));
    }
    let poss = leg_possibilities(graph, table, overrides, time)?;
    let decision = decide(graph, &poss, at, goal);
    match decision.choice {
        Some((to, _)) => Ok((to, decision.poss)),
        None => Err(PlanError::DeadEnd(at.to_string())),
    }
}
