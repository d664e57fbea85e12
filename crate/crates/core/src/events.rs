//! Complex events and possibility propagation across inferences.
//!
//! A complex event is a Boolean combination of precursor events whose
//! possibilities are already known; it is evaluated with min, max and `1 - x`.
//! A conclusion reached by an inference `E' -> E` gets its possibility from an
//! [`InferenceOperator`], the multivalued reading of `->`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::formula::{parse_proposition, ParseError, Proposition};
use crate::valuation::Degree;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EventError {
    #[error("unknown event {0}")]
    UnknownEvent(String),
    #[error("unsupported inference operator {0}")]
    UnsupportedOperator(String),
    #[error("no consequent degree makes {operator} reach truth {truth} from antecedent {antecedent}")]
    Unsatisfiable {
        operator: String,
        antecedent: Degree,
        truth: Degree,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EventExpr {
    Ref(String),
    Not(Box<EventExpr>),
    And(Box<EventExpr>, Box<EventExpr>),
    Or(Box<EventExpr>, Box<EventExpr>),
}

impl EventExpr {
    pub fn event(name: impl Into<String>) -> Self {
        EventExpr::Ref(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: EventExpr) -> Self {
        EventExpr::Not(Box::new(e))
    }

    pub fn and(l: EventExpr, r: EventExpr) -> Self {
        EventExpr::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: EventExpr, r: EventExpr) -> Self {
        EventExpr::Or(Box::new(l), Box::new(r))
    }

    /// Parses the formula grammar with event names as identifiers.
    pub fn parse(text: &str) -> Result<Self, EventError> {
        Ok(Self::from_prop(&parse_proposition(text)?))
    }

    /// One event per atom, same shape.
    pub fn from_prop(prop: &Proposition) -> Self {
        match prop {
            Proposition::Var(a) => EventExpr::Ref(a.as_str().to_string()),
            Proposition::Not(p) => EventExpr::not(Self::from_prop(p)),
            Proposition::And(l, r) => EventExpr::and(Self::from_prop(l), Self::from_prop(r)),
            Proposition::Or(l, r) => EventExpr::or(Self::from_prop(l), Self::from_prop(r)),
        }
    }

    /// One atom per event, same shape. Panics if an event name is not an identifier.
    pub fn to_prop(&self) -> Proposition {
        match self {
            EventExpr::Ref(name) => Proposition::var(name),
            EventExpr::Not(e) => Proposition::not(e.to_prop()),
            EventExpr::And(l, r) => Proposition::and(l.to_prop(), r.to_prop()),
            EventExpr::Or(l, r) => Proposition::or(l.to_prop(), r.to_prop()),
        }
    }
}

impl fmt::Display for EventExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_prop().fmt(f)
    }
}

/// Known possibility degrees of named events.
pub type PossAssignment = BTreeMap<String, Degree>;

pub fn eval_complex(expr: &EventExpr, a: &PossAssignment) -> Result<Degree, EventError> {
    Ok(match expr {
        EventExpr::Ref(name) => *a.get(name).ok_or_else(|| EventError::UnknownEvent(name.clone()))?,
        EventExpr::Not(e) => eval_complex(e, a)?.complement(),
        EventExpr::And(l, r) => eval_complex(l, a)?.and(eval_complex(r, a)?),
        EventExpr::Or(l, r) => eval_complex(l, a)?.or(eval_complex(r, a)?),
    })
}

/// `min(1, 1 - a + b)`.
pub fn lukasiewicz_implication(a: Degree, b: Degree) -> Degree {
    if a <= b {
        Degree::ONE
    } else {
        Degree::new(1.0 - a.value() + b.value()).expect("a > b keeps the result in [0, 1)")
    }
}

/// A multivalued implication used as a possibilistic modus ponens.
pub trait InferenceOperator: Send + Sync {
    fn name(&self) -> &str;

    /// Truth degree of `antecedent -> consequent`.
    fn truth(&self, antecedent: Degree, consequent: Degree) -> Degree;

    /// Smallest consequent degree for which the implication has at least
    /// degree `truth`. The default bisects, so `truth` must be nondecreasing
    /// in its consequent.
    fn min_consequent(&self, antecedent: Degree, truth: Degree) -> Option<Degree> {
        if self.truth(antecedent, Degree::ZERO) >= truth {
            return Some(Degree::ZERO);
        }
        if self.truth(antecedent, Degree::ONE) < truth {
            return None;
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if self.truth(antecedent, Degree::new(mid).expect("in range")) >= truth {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Degree::new(hi).ok()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Lukasiewicz;

impl InferenceOperator for Lukasiewicz {
    fn name(&self) -> &str {
        "lukasiewicz"
    }

    fn truth(&self, antecedent: Degree, consequent: Degree) -> Degree {
        lukasiewicz_implication(antecedent, consequent)
    }

    /// `min(1, 1 - a + x) >= t` holds exactly for `x >= a - (1 - t)`.
    fn min_consequent(&self, antecedent: Degree, truth: Degree) -> Option<Degree> {
        let slack = 1.0 - truth.value();
        Some(Degree::new((antecedent.value() - slack).max(0.0)).expect("in range"))
    }
}

/// Inference operators by name. Ships with the Lukasiewicz operator only.
pub struct OperatorRegistry {
    operators: BTreeMap<String, Box<dyn InferenceOperator>>,
}

impl Default for OperatorRegistry {
    fn default() -> Self {
        let mut registry = OperatorRegistry {
            operators: BTreeMap::new(),
        };
        registry.register(Box::new(Lukasiewicz));
        registry
    }
}

impl OperatorRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, op: Box<dyn InferenceOperator>) {
        self.operators.insert(op.name().to_string(), op);
    }

    pub fn get(&self, name: &str) -> Result<&dyn InferenceOperator, EventError> {
        self.operators
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| EventError::UnsupportedOperator(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.operators.keys().map(String::as_str)
    }
}

/// Bounds on the possibility of a conclusion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagated {
    /// Tightest lower bound implied by the inference.
    pub lower: Degree,
    /// Conventional single value: the lower bound itself.
    pub point: Degree,
}

/// Possibility of `E` given `Poss(E')` and the truth degree of `E' -> E`.
pub fn propagate(
    premise_poss: Degree,
    op: &dyn InferenceOperator,
    implication_truth: Degree,
) -> Result<Propagated, EventError> {
    let lower = op
        .min_consequent(premise_poss, implication_truth)
        .ok_or_else(|| EventError::Unsatisfiable {
            operator: op.name().to_string(),
            antecedent: premise_poss,
            truth: implication_truth,
        })?;
    Ok(Propagated { lower, point: lower })
}

/// Pushes a possibility degree through a chain of inferences, one truth
/// degree per link, taking the point value at each step.
pub fn propagate_chain(
    premise_poss: Degree,
    op: &dyn InferenceOperator,
    link_truths: &[Degree],
) -> Result<Degree, EventError> {
    link_truths
        .iter()
        .try_fold(premise_poss, |poss, &truth| Ok(propagate(poss, op, truth)?.point))
}
