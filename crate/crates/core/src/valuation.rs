//! Valuations of propositions and the possibility degree of simple events.
//!
//! Three semantics share the same connective structure:
//!
//! - classical: values in {0, 1}, `!` is `1 - x`, `&` is min, `|` is max;
//! - Lukasiewicz: the same recursion over the whole unit interval;
//! - independent probability: `&` is a product, `|` is inclusion-exclusion.
//!
//! The possibility valuation of a construct is the Lukasiewicz valuation with
//! each atom assigned its probability, so a negated constraint `!c` scores
//! `1 - Prob(c)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::formula::{AtomId, Construct, Proposition};

/// A value in the closed unit interval.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Degree(f64);

impl Degree {
    pub const ZERO: Degree = Degree(0.0);
    pub const ONE: Degree = Degree(1.0);

    pub fn new(value: f64) -> Result<Self, ValuationError> {
        if (0.0..=1.0).contains(&value) {
            Ok(Degree(value))
        } else {
            Err(ValuationError::OutOfRange(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Lukasiewicz conjunction.
    pub fn and(self, other: Degree) -> Degree {
        Degree(self.0.min(other.0))
    }

    /// Lukasiewicz disjunction.
    pub fn or(self, other: Degree) -> Degree {
        Degree(self.0.max(other.0))
    }

    /// Lukasiewicz negation.
    pub fn complement(self) -> Degree {
        Degree(1.0 - self.0)
    }

    pub fn total_cmp(&self, other: &Degree) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Display for Degree {
    /// Rounds to twelve decimals so `1 - 0.9` prints as `0.1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rounded = format!("{:.12}", self.0);
        let trimmed = rounded.trim_end_matches('0').trim_end_matches('.');
        f.write_str(if trimmed.is_empty() { "0" } else { trimmed })
    }
}

impl TryFrom<f64> for Degree {
    type Error = ValuationError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Degree::new(value)
    }
}

impl From<Degree> for f64 {
    fn from(d: Degree) -> f64 {
        d.0
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValuationError {
    #[error("value {0} is outside [0, 1]")]
    OutOfRange(f64),
    #[error("no value assigned to atom {0}")]
    MissingAtom(AtomId),
    #[error("atom {atom} has non-binary value {value}")]
    NonBinaryValue { atom: AtomId, value: f64 },
    #[error("atom {0} occurs more than once; independent-probability semantics needs distinct atoms")]
    RepeatedAtom(AtomId),
    #[error("event {0} has an incomplete context")]
    IncompleteContext(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// Maps atoms to values in the unit interval.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Assignment {
    values: BTreeMap<AtomId, Degree>,
}

/// Truth degrees for the Lukasiewicz and classical valuations.
pub type DegreeAssignment = Assignment;

/// Probabilities of atoms, read as statistically independent.
pub type ProbAssignment = Assignment;

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, atom: AtomId, value: Degree) -> Option<Degree> {
        self.values.insert(atom, value)
    }

    /// Builder-style insert; panics on an invalid name or out-of-range value.
    pub fn with(mut self, atom: &str, value: f64) -> Self {
        self.set(
            AtomId::new(atom).expect("invalid atom name"),
            Degree::new(value).expect("value outside [0, 1]"),
        );
        self
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, f64)>) -> Result<Self, ValuationError> {
        let mut out = Assignment::new();
        for (name, value) in pairs {
            let atom = AtomId::new(name).map_err(|e| ValuationError::Syntax {
                line: 0,
                message: e.to_string(),
            })?;
            out.set(atom, Degree::new(value)?);
        }
        Ok(out)
    }

    pub fn get(&self, atom: &AtomId) -> Option<Degree> {
        self.values.get(atom).copied()
    }

    fn lookup(&self, atom: &AtomId) -> Result<Degree, ValuationError> {
        self.get(atom).ok_or_else(|| ValuationError::MissingAtom(atom.clone()))
    }

    pub fn atoms(&self) -> impl Iterator<Item = &AtomId> {
        self.values.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AtomId, Degree)> {
        self.values.iter().map(|(a, d)| (a, *d))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Parses `atom = value` lines. `#` starts a comment; blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, ValuationError> {
        let mut out = Assignment::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| ValuationError::Syntax { line: line_no, message };
            let (name, value) = line
                .split_once('=')
                .ok_or_else(|| syntax(format!("expected `atom = value`, found {line:?}")))?;
            let atom = AtomId::new(name.trim()).map_err(|e| syntax(e.to_string()))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| syntax(format!("invalid number {:?}", value.trim())))?;
            let degree = Degree::new(value).map_err(|e| syntax(e.to_string()))?;
            if out.set(atom.clone(), degree).is_some() {
                return Err(syntax(format!("atom {atom} assigned twice")));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (atom, value) in &self.values {
            writeln!(f, "{atom} = {value}")?;
        }
        Ok(())
    }
}

/// Evaluates `prop` with `!` as `1 - x`, `&` as min and `|` as max.
pub fn lukasiewicz_valuation(prop: &Proposition, a: &DegreeAssignment) -> Result<Degree, ValuationError> {
    Ok(match prop {
        Proposition::Var(atom) => a.lookup(atom)?,
        Proposition::Not(p) => lukasiewicz_valuation(p, a)?.complement(),
        Proposition::And(l, r) => lukasiewicz_valuation(l, a)?.and(lukasiewicz_valuation(r, a)?),
        Proposition::Or(l, r) => lukasiewicz_valuation(l, a)?.or(lukasiewicz_valuation(r, a)?),
    })
}

/// Two-valued evaluation; every atom of `prop` must be assigned 0 or 1.
pub fn classical_valuation(prop: &Proposition, a: &DegreeAssignment) -> Result<Degree, ValuationError> {
    for atom in prop.atoms() {
        let value = a.lookup(&atom)?.value();
        if value != 0.0 && value != 1.0 {
            return Err(ValuationError::NonBinaryValue { atom, value });
        }
    }
    lukasiewicz_valuation(prop, a)
}

/// Possibility degree of a construct: prerequisites score `Prob(p)`,
/// negated constraints score `1 - Prob(c)`, combined with min and max.
pub fn possibility_valuation(c: &Construct, probs: &ProbAssignment) -> Result<Degree, ValuationError> {
    lukasiewicz_valuation(c.prop(), probs)
}

/// Evaluates `prop` as a compound of independent events: product for `&`,
/// inclusion-exclusion for `|`, complement for `!`.
pub fn probability_valuation(prop: &Proposition, probs: &ProbAssignment) -> Result<Degree, ValuationError> {
    let mut seen = BTreeSet::new();
    for atom in prop.atom_occurrences() {
        if !seen.insert(atom) {
            return Err(ValuationError::RepeatedAtom(atom.clone()));
        }
    }
    probability_rec(prop, probs)
}

fn probability_rec(prop: &Proposition, probs: &ProbAssignment) -> Result<Degree, ValuationError> {
    Ok(match prop {
        Proposition::Var(atom) => probs.lookup(atom)?,
        Proposition::Not(p) => probability_rec(p, probs)?.complement(),
        Proposition::And(l, r) => {
            let (x, y) = (probability_rec(l, probs)?.value(), probability_rec(r, probs)?.value());
            Degree(x * y)
        }
        Proposition::Or(l, r) => {
            let (x, y) = (probability_rec(l, probs)?.value(), probability_rec(r, probs)?.value());
            Degree((x + y - x * y).clamp(0.0, 1.0))
        }
    })
}

/// An event whose possibility comes straight from its context.
#[derive(Debug, Clone)]
pub struct SimpleEvent {
    pub name: String,
    pub context: Construct,
    pub probs: ProbAssignment,
}

/// `Poss(E) = v(C)` for a complete context `C`.
pub fn poss_of_event(e: &SimpleEvent) -> Result<Degree, ValuationError> {
    if !e.context.is_complete() {
        return Err(ValuationError::IncompleteContext(e.name.clone()));
    }
    possibility_valuation(&e.context, &e.probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_proposition, validate_construct, AtomRegistry};

    fn p(s: &str) -> Proposition {
        parse_proposition(s).unwrap()
    }

    fn construct(s: &str, complete: bool) -> Construct {
        let prop = p(s);
        let atoms = prop.atoms();
        let reg = AtomRegistry::inferred(&atoms, &prop);
        validate_construct(prop, &reg, complete).unwrap()
    }

    #[test]
    fn excluded_middle_is_not_valid_in_lukasiewicz() {
        let a = Assignment::new().with("p", 0.4).with("q", 0.8);
        assert_eq!(lukasiewicz_valuation(&p("p | !p"), &a).unwrap().value(), 0.6);
        assert_eq!(lukasiewicz_valuation(&p("q | !q"), &a).unwrap().value(), 0.8);
    }

    #[test]
    fn classically_equivalent_pair_with_different_degrees() {
        let a = Assignment::new().with("p", 0.5).with("q", 0.0);
        assert_eq!(lukasiewicz_valuation(&p("(p | !p) & q"), &a).unwrap().value(), 0.0);
        assert_eq!(lukasiewicz_valuation(&p("(p & !p) | q"), &a).unwrap().value(), 0.5);
    }

    #[test]
    fn all_zero_prerequisites() {
        let a = Assignment::new().with("a", 0.0).with("b", 0.0).with("c", 0.0);
        assert_eq!(lukasiewicz_valuation(&p("a & (b | c) | c"), &a).unwrap(), Degree::ZERO);
    }

    #[test]
    fn missing_atom() {
        let a = Assignment::new().with("a", 0.5);
        assert_eq!(
            lukasiewicz_valuation(&p("a & b"), &a),
            Err(ValuationError::MissingAtom(AtomId::new("b").unwrap()))
        );
    }

    #[test]
    fn classical_examples() {
        assert_eq!(
            classical_valuation(&p("p | !p"), &Assignment::new().with("p", 0.0)).unwrap(),
            Degree::ONE
        );
        assert_eq!(
            classical_valuation(&p("p & !p"), &Assignment::new().with("p", 1.0)).unwrap(),
            Degree::ZERO
        );
        let a = Assignment::new()
            .with("p1", 1.0)
            .with("p2", 1.0)
            .with("c1", 0.0)
            .with("c2", 0.0)
            .with("p3", 0.0);
        assert_eq!(
            classical_valuation(&p("p1 & p2 & !c1 & (!c2 | p3)"), &a).unwrap(),
            Degree::ONE
        );
        assert!(matches!(
            classical_valuation(&p("p"), &Assignment::new().with("p", 0.5)),
            Err(ValuationError::NonBinaryValue { .. })
        ));
    }

    #[test]
    fn possibility_examples() {
        let probs = Assignment::new().with("p1", 0.8).with("p2", 0.6);
        assert_eq!(
            possibility_valuation(&construct("p1 & p2", true), &probs)
                .unwrap()
                .value(),
            0.6
        );

        // min(0.9, 0.8, 1 - 0.3, max(1 - 0.6, 0.5))
        let probs = Assignment::new()
            .with("p1", 0.9)
            .with("p2", 0.8)
            .with("c1", 0.3)
            .with("c2", 0.6)
            .with("p3", 0.5);
        let v = possibility_valuation(&construct("p1 & p2 & !c1 & (!c2 | p3)", true), &probs).unwrap();
        assert_eq!(v.value(), 0.5);

        let probs = Assignment::new().with("p1", 1.0);
        assert_eq!(
            possibility_valuation(&construct("p1", true), &probs).unwrap(),
            Degree::ONE
        );
    }

    #[test]
    fn poss_of_event_requires_complete_context() {
        let probs = Assignment::new().with("capital", 0.7).with("employees", 0.4);
        let event = SimpleEvent {
            name: "new_product".into(),
            context: construct("capital & employees", true),
            probs: probs.clone(),
        };
        assert_eq!(poss_of_event(&event).unwrap().value(), 0.4);

        let partial = SimpleEvent {
            context: construct("capital & employees", false),
            ..event
        };
        assert_eq!(
            poss_of_event(&partial),
            Err(ValuationError::IncompleteContext("new_product".into()))
        );
    }

    #[test]
    fn environmental_issue_scores_its_complement() {
        let probs = Assignment::new()
            .with("capital", 0.9)
            .with("employees", 0.95)
            .with("environmental_issue", 0.25);
        let v = possibility_valuation(&construct("capital & employees & !environmental_issue", true), &probs).unwrap();
        assert_eq!(v.value(), 0.75);
    }

    #[test]
    fn probability_examples() {
        let a = Assignment::new().with("p", 0.9).with("q", 0.9);
        assert!((probability_valuation(&p("p & q"), &a).unwrap().value() - 0.81).abs() < 1e-12);
        let a = Assignment::new().with("p", 0.5).with("q", 0.5);
        assert_eq!(probability_valuation(&p("p | q"), &a).unwrap().value(), 0.75);

        let a = Assignment::new()
            .with("p1", 0.9)
            .with("p2", 0.9)
            .with("c1", 0.1)
            .with("c2", 0.1)
            .with("c3", 0.1)
            .with("c4", 0.1);
        let v = probability_valuation(&p("p1 & p2 & !c1 & !c2 & !c3 & !c4"), &a).unwrap();
        assert!((v.value() - 0.531441).abs() < 1e-12);
    }

    #[test]
    fn probability_rejects_repeated_atoms() {
        let a = Assignment::new().with("p", 0.5);
        assert_eq!(
            probability_valuation(&p("p & !p"), &a),
            Err(ValuationError::RepeatedAtom(AtomId::new("p").unwrap()))
        );
    }

    #[test]
    fn degree_range_and_display() {
        assert!(Degree::new(-0.1).is_err());
        assert!(Degree::new(1.0000001).is_err());
        assert!(Degree::new(f64::NAN).is_err());
        assert_eq!(Degree::new(0.9).unwrap().complement().to_string(), "0.1");
        assert_eq!(Degree::ONE.to_string(), "1");
        assert_eq!(Degree::ZERO.to_string(), "0");
        assert_eq!(Degree::new(0.531441).unwrap().to_string(), "0.531441");
    }

    #[test]
    fn parse_probability_file() {
        let text = "# leg data\np1 = 0.9\n  c1=0.25 # rush hour\n\nc2 = 1\n";
        let a = Assignment::parse(text).unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a.get(&AtomId::new("c1").unwrap()).unwrap().value(), 0.25);

        assert!(matches!(
            Assignment::parse("p1 0.9"),
            Err(ValuationError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            Assignment::parse("p1 = 1.5"),
            Err(ValuationError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            Assignment::parse("\np1 = x"),
            Err(ValuationError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            Assignment::parse("p1 = 0.1\np1 = 0.2"),
            Err(ValuationError::Syntax { line: 2, .. })
        ));
    }
}
