//! Waypoint navigation with possibility-scored legs.
//!
//! Each leg carries a complete context over per-leg prerequisites and
//! constraints. Its possibility at a given time bucket comes from a
//! probability table plus live overrides. A route is as possible as its
//! weakest leg, and the planner prefers the successor that opens the most
//! possible route to the goal. The probabilities in force at decision time
//! are applied to every leg during lookahead.

use thiserror::Error;

use crate::formula::AtomId;

mod composite;
mod graph;
mod scenario;
mod search;
mod simulate;
mod table;

pub use composite::{composite_event_expr, composite_event_via};
pub use graph::{Leg, WaypointGraph};
pub use scenario::{Scenario, ScenarioError, DEFAULT_MAX_STEPS};
pub use search::{best_next_waypoint, decide, reach_all, reach_possibility, route_possibility, widest_reach, Decision};
pub use simulate::{simulate, TraceLog, TraceRecord, TraceStatus};
pub use table::{effective_probability, leg_possibilities, leg_possibility, LegPossibilities, Override, ProbTable};

/// Integer time index, e.g. hour of day.
pub type TimeBucket = i64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("unknown waypoint {0}")]
    UnknownNode(String),
    #[error("unknown leg {0}")]
    UnknownLeg(String),
    #[error("leg {0} declared twice")]
    DuplicateLeg(String),
    #[error("no probability for atom {atom} on leg {leg} at time {time}")]
    MissingProbability {
        leg: String,
        atom: AtomId,
        time: TimeBucket,
    },
    #[error("leg {before} does not start where leg {after} ends")]
    DisconnectedPath { after: String, before: String },
    #[error("no successor of {0} has a positive possibility of reaching the goal")]
    DeadEnd(String),
    #[error("already at goal {0}")]
    AlreadyAtGoal(String),
    #[error("routes between the waypoints form a cycle; no composite expression")]
    CyclicRegion,
    #[error("{goal} is not reachable from {from}")]
    Unreachable { from: String, goal: String },
    #[error("start and goal coincide; the route is empty")]
    EmptyRoute,
}
