//! Possibility degrees for real-world events.
//!
//! An event's context names the prerequisites that enable it and the
//! constraints that impede it. Given the probabilities of those atoms, the
//! event's possibility degree is the Lukasiewicz value of its context:
//! prerequisites score their probability, negated constraints score one minus
//! theirs, `&` takes the minimum and `|` the maximum.
//!
//! - [`formula`]: propositions, contextual constructs, parsing and rendering.
//! - [`valuation`]: classical, Lukasiewicz and independent-probability semantics.
//! - [`normalize`]: DNF conversion, canonical forms and strong equivalence.
//! - [`events`]: complex events and inference operators.
//! - [`planner`]: maximin route planning over waypoint graphs.

pub mod events;
pub mod formula;
pub mod normalize;
pub mod planner;
pub mod valuation;

pub use events::{eval_complex, lukasiewicz_implication, propagate, EventExpr, InferenceOperator, PossAssignment};
pub use formula::{
    parse_proposition, render, validate_construct, AtomId, AtomKind, AtomRegistry, Construct, ParseError, Proposition,
};
pub use normalize::{classically_equivalent, conv, strongly_equivalent, to_canonical_dnf, CanonicalDnf};
pub use planner::{Scenario, WaypointGraph};
pub use valuation::{
    lukasiewicz_valuation, possibility_valuation, probability_valuation, Assignment, Degree, DegreeAssignment,
    ProbAssignment,
};
