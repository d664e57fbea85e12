//! Disjunctive normal forms and strong equivalence.
//!
//! [`conv`] rewrites a proposition into a right-associated disjunction of
//! right-associated conjunctions of literals using double negation,
//! De Morgan and distribution of `&` over `|`. All three rewrites preserve
//! the Lukasiewicz valuation.
//!
//! Two propositions are strongly equivalent when their `conv` forms can be
//! turned into one another by commutativity and associativity alone. That
//! is decided by comparing [`CanonicalDnf`]s: sorted multisets of sorted
//! multisets of literals. Duplicates are kept because idempotence is not one
//! of the permitted laws.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::{AtomId, Proposition};
use crate::valuation::{classical_valuation, lukasiewicz_valuation, Assignment, Degree};

/// Exhaustive classical comparison is refused above this many atoms.
pub const MAX_CLASSICAL_ATOMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("{0} distinct atoms exceed the exhaustive-check limit of {MAX_CLASSICAL_ATOMS}")]
    TooManyAtoms(usize),
}

/// An atom or its negation. Orders by atom name, then positive before negated.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: AtomId,
    pub negated: bool,
}

impl Literal {
    pub fn to_prop(&self) -> Proposition {
        let var = Proposition::Var(self.atom.clone());
        if self.negated {
            Proposition::not(var)
        } else {
            var
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("!")?;
        }
        f.write_str(self.atom.as_str())
    }
}

/// A sorted, non-empty multiset of literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasicConjunction {
    literals: Vec<Literal>,
}

impl BasicConjunction {
    pub fn new(mut literals: Vec<Literal>) -> Self {
        assert!(!literals.is_empty(), "basic conjunction must be non-empty");
        literals.sort();
        Self { literals }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }
}

impl Ord for BasicConjunction {
    /// Shorter conjunctions first, then lexicographic over literals.
    fn cmp(&self, other: &Self) -> Ordering {
        self.literals
            .len()
            .cmp(&other.literals.len())
            .then_with(|| self.literals.cmp(&other.literals))
    }
}

impl PartialOrd for BasicConjunction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasicConjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let multi = self.literals.len() > 1;
        if multi {
            f.write_str("(")?;
        }
        for (i, lit) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{lit}")?;
        }
        if multi {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Canonical representative of a DNF modulo commutativity and associativity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalDnf {
    conjunctions: Vec<BasicConjunction>,
}

impl CanonicalDnf {
    pub fn conjunctions(&self) -> &[BasicConjunction] {
        &self.conjunctions
    }

    /// Right-associated proposition with conjunctions in canonical order.
    pub fn to_prop(&self) -> Proposition {
        Proposition::or_all(
            self.conjunctions
                .iter()
                .map(|c| Proposition::and_all(c.literals.iter().map(Literal::to_prop)).expect("non-empty conjunction")),
        )
        .expect("non-empty DNF")
    }
}

impl fmt::Display for CanonicalDnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.conjunctions.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Converts `prop` to disjunctive normal form.
///
/// Rewrites applied: `!!p => p`; `!(p | q) => !p & !q`; `!(p & q) => !p | !q`;
/// `p & (q | r) => (p & q) | (p & r)`; `(p | q) & r => (p & r) | (q & r)`.
/// Disjuncts of a product are produced left factor major, and both chain
/// levels come out right-associated.
pub fn conv(prop: &Proposition) -> Proposition {
    let disjuncts = dnf_terms(prop, false);
    Proposition::or_all(
        disjuncts
            .into_iter()
            .map(|lits| Proposition::and_all(lits.iter().map(Literal::to_prop)).expect("non-empty conjunction")),
    )
    .expect("non-empty DNF")
}

/// DNF of `prop` (or of `!prop` when `negate`) as a list of literal lists,
/// order and duplicates preserved.
fn dnf_terms(prop: &Proposition, negate: bool) -> Vec<Vec<Literal>> {
    match (prop, negate) {
        (Proposition::Var(atom), negated) => vec![vec![Literal {
            atom: atom.clone(),
            negated,
        }]],
        (Proposition::Not(inner), negate) => dnf_terms(inner, !negate),
        (Proposition::And(l, r), false) | (Proposition::Or(l, r), true) => {
            distribute(dnf_terms(l, negate), dnf_terms(r, negate))
        }
        (Proposition::Or(l, r), false) | (Proposition::And(l, r), true) => {
            let mut out = dnf_terms(l, negate);
            out.extend(dnf_terms(r, negate));
            out
        }
    }
}

fn distribute(left: Vec<Vec<Literal>>, right: Vec<Vec<Literal>>) -> Vec<Vec<Literal>> {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for l in &left {
        for r in &right {
            let mut conj = l.clone();
            conj.extend(r.iter().cloned());
            out.push(conj);
        }
    }
    out
}

/// True when `prop` is a right-or-left associated `|` of `&`s of literals.
pub fn is_dnf(prop: &Proposition) -> bool {
    fn is_conj(p: &Proposition) -> bool {
        match p {
            Proposition::And(l, r) => is_conj(l) && is_conj(r),
            other => other.is_literal(),
        }
    }
    match prop {
        Proposition::Or(l, r) => is_dnf(l) && is_dnf(r),
        other => is_conj(other),
    }
}

/// Flattens `conv(prop)` into sorted multisets.
pub fn to_canonical_dnf(prop: &Proposition) -> CanonicalDnf {
    let dnf = conv(prop);
    let mut disjuncts = Vec::new();
    collect_chain(&dnf, true, &mut disjuncts);
    let mut conjunctions: Vec<BasicConjunction> = disjuncts
        .into_iter()
        .map(|d| {
            let mut leaves = Vec::new();
            collect_chain(d, false, &mut leaves);
            BasicConjunction::new(leaves.into_iter().map(literal_of).collect())
        })
        .collect();
    conjunctions.sort();
    CanonicalDnf { conjunctions }
}

fn collect_chain<'a>(prop: &'a Proposition, or_level: bool, out: &mut Vec<&'a Proposition>) {
    match prop {
        Proposition::Or(l, r) if or_level => {
            collect_chain(l, or_level, out);
            collect_chain(r, or_level, out);
        }
        Proposition::And(l, r) if !or_level => {
            collect_chain(l, or_level, out);
            collect_chain(r, or_level, out);
        }
        other => out.push(other),
    }
}

fn literal_of(prop: &Proposition) -> Literal {
    match prop {
        Proposition::Var(atom) => Literal {
            atom: atom.clone(),
            negated: false,
        },
        Proposition::Not(inner) => match &**inner {
            Proposition::Var(atom) => Literal {
                atom: atom.clone(),
                negated: true,
            },
            _ => unreachable!("conv output has negation only on atoms"),
        },
        _ => unreachable!("conv output is a disjunction of conjunctions"),
    }
}

/// `conv(p)` and `conv(q)` differ only by commutativity and associativity.
pub fn strongly_equivalent(p: &Proposition, q: &Proposition) -> bool {
    to_canonical_dnf(p) == to_canonical_dnf(q)
}

/// Compares `p` and `q` on every two-valued assignment over their atoms.
pub fn classically_equivalent(p: &Proposition, q: &Proposition) -> Result<bool, NormalizeError> {
    let atoms: Vec<AtomId> = p.atoms().union(&q.atoms()).cloned().collect();
    if atoms.len() > MAX_CLASSICAL_ATOMS {
        return Err(NormalizeError::TooManyAtoms(atoms.len()));
    }
    for bits in 0u32..(1u32 << atoms.len()) {
        let mut a = Assignment::new();
        for (i, atom) in atoms.iter().enumerate() {
            let value = if bits >> i & 1 == 1 { Degree::ONE } else { Degree::ZERO };
            a.set(atom.clone(), value);
        }
        let vp = classical_valuation(p, &a).expect("all atoms assigned");
        let vq = classical_valuation(q, &a).expect("all atoms assigned");
        if vp != vq {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An assignment on which two propositions take different Lukasiewicz values.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub assignment: Assignment,
    pub left: Degree,
    pub right: Degree,
}

/// Samples `samples` uniform assignments, with values rounded to two
/// decimals, looking for one where `p` and `q` evaluate differently.
/// `None` means no witness was found, not that none exists.
pub fn find_witness(p: &Proposition, q: &Proposition, samples: usize, seed: u64) -> Option<Witness> {
    let atoms: BTreeSet<AtomId> = p.atoms().union(&q.atoms()).cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut a = Assignment::new();
        for atom in &atoms {
            let value = f64::from(rng.random_range(0u32..=100)) / 100.0;
            a.set(atom.clone(), Degree::new(value).expect("in range"));
        }
        let left = lukasiewicz_valuation(p, &a).expect("all atoms assigned");
        let right = lukasiewicz_valuation(q, &a).expect("all atoms assigned");
        if left != right {
            return Some(Witness {
                assignment: a,
                left,
                right,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_proposition;

    fn p(s: &str) -> Proposition {
        parse_proposition(s).unwrap()
    }

    const C: &str = "p1 & (p2 & (!c1 & (!c2 | p3)))";
    const C_PRIME: &str = "(p3 | !c2) & (!c1 & (p2 & p1))";

    #[test]
    fn conv_distributes_left_to_right() {
        let expected = p("(p1 & (p2 & (!c1 & !c2))) | (p1 & (p2 & (!c1 & p3)))");
        assert_eq!(conv(&p(C)), expected);
    }

    #[test]
    fn conv_on_reordered_construct() {
        let expected = p("(p3 & (!c1 & (p2 & p1))) | (!c2 & (!c1 & (p2 & p1)))");
        assert_eq!(conv(&p(C_PRIME)), expected);
    }

    #[test]
    fn conv_leaves_literals_alone() {
        assert_eq!(conv(&p("p")), p("p"));
        assert_eq!(conv(&p("!p")), p("!p"));
        assert_eq!(conv(&p("!!p")), p("p"));
    }

    #[test]
    fn conv_de_morgan() {
        assert_eq!(conv(&p("!(a | b)")), p("!a & !b"));
        assert_eq!(conv(&p("!(a & b)")), p("!a | !b"));
        assert_eq!(conv(&p("!(a & (b | !c))")), p("!a | !b & c"));
    }

    #[test]
    fn conv_reassociates() {
        assert_eq!(conv(&p("((a & b) & c) | ((d | e) | f)")), p("a & b & c | d | e | f"));
    }

    #[test]
    fn reordered_constructs_share_canonical_form() {
        let c = to_canonical_dnf(&p("p1 & p2 & !c1 & (!c2 | p3)"));
        let c_prime = to_canonical_dnf(&p("(p3 | !c2) & !c1 & p2 & p1"));
        assert_eq!(c, c_prime);
        assert_eq!(c.to_string(), "(!c1 & !c2 & p1 & p2) | (!c1 & p1 & p2 & p3)");
        assert!(strongly_equivalent(&p(C), &p(C_PRIME)));
    }

    #[test]
    fn canonical_commutativity_and_duplicates() {
        assert_eq!(to_canonical_dnf(&p("p & q")), to_canonical_dnf(&p("q & p")));
        assert_ne!(to_canonical_dnf(&p("p & p")), to_canonical_dnf(&p("p")));
        assert_ne!(to_canonical_dnf(&p("p | p")), to_canonical_dnf(&p("p")));
        assert!(strongly_equivalent(&p("p"), &p("p")));
    }

    #[test]
    fn canonical_order() {
        let dnf = to_canonical_dnf(&p("b & a | !a | a"));
        assert_eq!(dnf.to_string(), "a | !a | (a & b)");
        assert_eq!(to_canonical_dnf(&dnf.to_prop()), dnf);
    }

    #[test]
    fn tautologies_are_not_strongly_equivalent() {
        assert!(!strongly_equivalent(&p("p | !p"), &p("q | !q")));
        assert!(classically_equivalent(&p("p | !p"), &p("q | !q")).unwrap());
        assert!(classically_equivalent(&p("(p | !p) & q"), &p("(p & !p) | q")).unwrap());
        assert!(!strongly_equivalent(&p("(p | !p) & q"), &p("(p & !p) | q")));
        assert!(!classically_equivalent(&p("p"), &p("!p")).unwrap());
    }

    #[test]
    fn classical_guard() {
        let names: Vec<String> = (0..21).map(|i| format!("a{i}")).collect();
        let big = p(&names.join(" & "));
        assert_eq!(
            classically_equivalent(&big, &big),
            Err(NormalizeError::TooManyAtoms(21))
        );
    }

    #[test]
    fn witness_search() {
        let w = find_witness(&p("p | !p"), &p("q | !q"), 10_000, 7).expect("witness");
        assert_ne!(w.left, w.right);
        assert_eq!(lukasiewicz_valuation(&p("p | !p"), &w.assignment).unwrap(), w.left);
        assert!(find_witness(&p(C), &p(C_PRIME), 2_000, 7).is_none());
    }

    #[test]
    fn dnf_shape_check() {
        assert!(is_dnf(&p("a & !b | c")));
        assert!(!is_dnf(&p("a & (b | c)")));
        assert!(!is_dnf(&p("!(a & b)")));
        assert!(!is_dnf(&p("!!a")));
    }
}
