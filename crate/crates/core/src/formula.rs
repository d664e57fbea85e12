//! Propositional formulas and contextual constructs.
//!
//! A [`Proposition`] is a binary tree over named atoms with `!`, `&` and `|`.
//! Chains are stored right-associated, so `a & b & c` is `a & (b & c)`.
//! A [`Construct`] is a proposition that only negates constraint atoms and
//! never negates anything else; it is what the possibility valuation accepts.
//!
//! Text grammar (whitespace insignificant):
//!
//! ```text
//! disj  := conj ('|' conj)*
//! conj  := unary ('&' unary)*
//! unary := '!' unary | IDENT | '(' disj ')'
//! IDENT := [A-Za-z][A-Za-z0-9_]*
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Name of a propositional atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId(String);

impl AtomId {
    pub fn new(name: impl Into<String>) -> Result<Self, FormulaError> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(AtomId(name))
        } else {
            Err(FormulaError::InvalidIdentifier(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for AtomId {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AtomId::new(s)
    }
}

impl std::borrow::Borrow<str> for AtomId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// Returns true for strings matching `[A-Za-z][A-Za-z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomKind {
    /// Enables the event; appears bare in a construct.
    Prerequisite,
    /// Impedes the event; appears only as `!c` in a construct.
    Constraint,
}

impl fmt::Display for AtomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomKind::Prerequisite => f.write_str("prerequisite"),
            AtomKind::Constraint => f.write_str("constraint"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomEntry {
    pub kind: AtomKind,
    pub description: String,
}

/// Kinds and descriptions of the atoms an event's contexts may mention.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomRegistry {
    entries: BTreeMap<AtomId, AtomEntry>,
}

impl AtomRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(
        &mut self,
        atom: AtomId,
        kind: AtomKind,
        description: impl Into<String>,
    ) -> Result<(), FormulaError> {
        if self.entries.contains_key(&atom) {
            return Err(FormulaError::DuplicateAtom(atom));
        }
        self.entries.insert(
            atom,
            AtomEntry {
                kind,
                description: description.into(),
            },
        );
        Ok(())
    }

    pub fn prerequisite(mut self, name: &str) -> Result<Self, FormulaError> {
        self.register(AtomId::new(name)?, AtomKind::Prerequisite, "")?;
        Ok(self)
    }

    pub fn constraint(mut self, name: &str) -> Result<Self, FormulaError> {
        self.register(AtomId::new(name)?, AtomKind::Constraint, "")?;
        Ok(self)
    }

    /// Builds a registry for `atoms`, taking each atom's kind from how `prop`
    /// uses it: atoms that only ever occur directly under `!` are constraints,
    /// everything else is a prerequisite. Atoms not in `atoms` stay unknown.
    pub fn inferred<'a>(atoms: impl IntoIterator<Item = &'a AtomId>, prop: &Proposition) -> Self {
        let mut bare = BTreeSet::new();
        let mut negated = BTreeSet::new();
        prop.visit_leaves(&mut |atom, under_not| {
            if under_not {
                negated.insert(atom.clone());
            } else {
                bare.insert(atom.clone());
            }
        });
        let mut registry = AtomRegistry::new();
        for atom in atoms {
            let kind = if negated.contains(atom) && !bare.contains(atom) {
                AtomKind::Constraint
            } else {
                AtomKind::Prerequisite
            };
            registry.entries.insert(
                atom.clone(),
                AtomEntry {
                    kind,
                    description: String::new(),
                },
            );
        }
        registry
    }

    pub fn kind(&self, atom: &AtomId) -> Option<AtomKind> {
        self.entries.get(atom).map(|e| e.kind)
    }

    pub fn get(&self, atom: &AtomId) -> Option<&AtomEntry> {
        self.entries.get(atom)
    }

    pub fn contains(&self, atom: &AtomId) -> bool {
        self.entries.contains_key(atom)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&AtomId, &AtomEntry)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A propositional formula over named atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Proposition {
    Var(AtomId),
    Not(Box<Proposition>),
    And(Box<Proposition>, Box<Proposition>),
    Or(Box<Proposition>, Box<Proposition>),
}

impl Proposition {
    /// Panics if `name` is not a valid identifier.
    pub fn var(name: &str) -> Self {
        Proposition::Var(AtomId::new(name).expect("invalid atom name"))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(p: Proposition) -> Self {
        Proposition::Not(Box::new(p))
    }

    pub fn and(l: Proposition, r: Proposition) -> Self {
        Proposition::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Proposition, r: Proposition) -> Self {
        Proposition::Or(Box::new(l), Box::new(r))
    }

    /// Right-associated conjunction of `items`. `None` if empty.
    pub fn and_all(items: impl IntoIterator<Item = Proposition>) -> Option<Self> {
        fold_right(items.into_iter().collect(), Proposition::and)
    }

    /// Right-associated disjunction of `items`. `None` if empty.
    pub fn or_all(items: impl IntoIterator<Item = Proposition>) -> Option<Self> {
        fold_right(items.into_iter().collect(), Proposition::or)
    }

    /// True for `p` and `!p` where `p` is an atom.
    pub fn is_literal(&self) -> bool {
        match self {
            Proposition::Var(_) => true,
            Proposition::Not(inner) => matches!(**inner, Proposition::Var(_)),
            _ => false,
        }
    }

    /// Distinct atoms, sorted by name.
    pub fn atoms(&self) -> BTreeSet<AtomId> {
        let mut out = BTreeSet::new();
        self.visit_leaves(&mut |atom, _| {
            out.insert(atom.clone());
        });
        out
    }

    /// Atom occurrences in left-to-right order, repeats included.
    pub fn atom_occurrences(&self) -> Vec<&AtomId> {
        let mut out = Vec::new();
        self.collect_occurrences(&mut out);
        out
    }

    fn collect_occurrences<'a>(&'a self, out: &mut Vec<&'a AtomId>) {
        match self {
            Proposition::Var(a) => out.push(a),
            Proposition::Not(p) => p.collect_occurrences(out),
            Proposition::And(l, r) | Proposition::Or(l, r) => {
                l.collect_occurrences(out);
                r.collect_occurrences(out);
            }
        }
    }

    /// Calls `f(atom, directly_negated)` for every leaf.
    fn visit_leaves(&self, f: &mut impl FnMut(&AtomId, bool)) {
        match self {
            Proposition::Var(a) => f(a, false),
            Proposition::Not(inner) => match &**inner {
                Proposition::Var(a) => f(a, true),
                other => other.visit_leaves(f),
            },
            Proposition::And(l, r) | Proposition::Or(l, r) => {
                l.visit_leaves(f);
                r.visit_leaves(f);
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Proposition::Var(_) => 1,
            Proposition::Not(p) => 1 + p.size(),
            Proposition::And(l, r) | Proposition::Or(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Proposition::Var(_) => 1,
            Proposition::Not(p) => 1 + p.depth(),
            Proposition::And(l, r) | Proposition::Or(l, r) => 1 + l.depth().max(r.depth()),
        }
    }
}

fn fold_right(mut items: Vec<Proposition>, join: fn(Proposition, Proposition) -> Proposition) -> Option<Proposition> {
    let mut acc = items.pop()?;
    while let Some(next) = items.pop() {
        acc = join(next, acc);
    }
    Some(acc)
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl FromStr for Proposition {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_proposition(s)
    }
}

/// A proposition accepted by [`validate_construct`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construct {
    prop: Proposition,
    complete: bool,
}

impl Construct {
    pub fn prop(&self) -> &Proposition {
        &self.prop
    }

    /// Whether the construct was declared a full description of the event's context.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn into_prop(self) -> Proposition {
        self.prop
    }
}

impl fmt::Display for Construct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.prop.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("invalid identifier {0:?}")]
    InvalidIdentifier(String),
    #[error("atom {0} registered twice")]
    DuplicateAtom(AtomId),
    #[error("unknown atom {0}")]
    UnknownAtom(AtomId),
    #[error("negation applied to {0}; only constraint atoms may be negated")]
    NegatedPrerequisite(String),
    #[error("constraint {0} must appear negated")]
    UnnegatedConstraint(AtomId),
}

/// Checks `prop` against the construct rules: prerequisites appear bare,
/// constraints appear only as `!c`, and `&`/`|` combine sub-constructs.
pub fn validate_construct(
    prop: Proposition,
    registry: &AtomRegistry,
    complete: bool,
) -> Result<Construct, FormulaError> {
    check_construct(&prop, registry)?;
    Ok(Construct { prop, complete })
}

fn check_construct(prop: &Proposition, registry: &AtomRegistry) -> Result<(), FormulaError> {
    match prop {
        Proposition::Var(atom) => match registry.kind(atom) {
            None => Err(FormulaError::UnknownAtom(atom.clone())),
            Some(AtomKind::Prerequisite) => Ok(()),
            Some(AtomKind::Constraint) => Err(FormulaError::UnnegatedConstraint(atom.clone())),
        },
        Proposition::Not(inner) => match &**inner {
            Proposition::Var(atom) => match registry.kind(atom) {
                None => Err(FormulaError::UnknownAtom(atom.clone())),
                Some(AtomKind::Constraint) => Ok(()),
                Some(AtomKind::Prerequisite) => Err(FormulaError::NegatedPrerequisite(atom.to_string())),
            },
            other => Err(FormulaError::NegatedPrerequisite(format!("({other})"))),
        },
        Proposition::And(l, r) | Proposition::Or(l, r) => {
            check_construct(l, registry)?;
            check_construct(r, registry)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnknownToken(char),
    #[error("unexpected {0}")]
    Unexpected(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token<'a> {
    Ident(&'a str),
    Not,
    And,
    Or,
    LParen,
    RParen,
}

impl fmt::Display for Token<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "identifier {s:?}"),
            Token::Not => f.write_str("'!'"),
            Token::And => f.write_str("'&'"),
            Token::Or => f.write_str("'|'"),
            Token::LParen => f.write_str("'('"),
            Token::RParen => f.write_str("')'"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token<'_>)>, ParseError> {
    let mut tokens = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'!' => Token::Not,
            b'&' => Token::And,
            b'|' => Token::Or,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push((start, Token::Ident(&text[start..i])));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('\u{fffd}');
                return Err(ParseError {
                    offset: i,
                    kind: ParseErrorKind::UnknownToken(ch),
                });
            }
        };
        tokens.push((i, tok));
        i += 1;
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token<'a>)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error_here(&self) -> ParseError {
        let kind = match self.peek() {
            Some(t) => ParseErrorKind::Unexpected(t.to_string()),
            None => ParseErrorKind::UnexpectedEnd,
        };
        ParseError {
            offset: self.offset(),
            kind,
        }
    }

    fn disj(&mut self) -> Result<Proposition, ParseError> {
        let mut items = vec![self.conj()?];
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            items.push(self.conj()?);
        }
        Ok(Proposition::or_all(items).expect("non-empty"))
    }

    fn conj(&mut self) -> Result<Proposition, ParseError> {
        let mut items = vec![self.unary()?];
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            items.push(self.unary()?);
        }
        Ok(Proposition::and_all(items).expect("non-empty"))
    }

    fn unary(&mut self) -> Result<Proposition, ParseError> {
        match self.peek() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(Proposition::not(self.unary()?))
            }
            Some(Token::Ident(name)) => {
                let atom = AtomId(name.to_string());
                self.pos += 1;
                Ok(Proposition::Var(atom))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.disj()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(self.error_here());
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error_here()),
        }
    }
}

/// Parses formula text. `!` binds tighter than `&`, which binds tighter
/// than `|`; chains associate to the right.
pub fn parse_proposition(text: &str) -> Result<Proposition, ParseError> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        end: text.len(),
    };
    let prop = parser.disj()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error_here());
    }
    Ok(prop)
}

/// Emits grammar text with only the parentheses that precedence and
/// right associativity do not already imply.
pub fn render(prop: &Proposition) -> String {
    let mut out = String::new();
    render_disj(prop, &mut out);
    out
}

fn render_disj(prop: &Proposition, out: &mut String) {
    match prop {
        Proposition::Or(l, r) => {
            render_conj(l, out);
            out.push_str(" | ");
            render_disj(r, out);
        }
        other => render_conj(other, out),
    }
}

fn render_conj(prop: &Proposition, out: &mut String) {
    match prop {
        Proposition::And(l, r) => {
            render_unary(l, out);
            out.push_str(" & ");
            render_conj(r, out);
        }
        Proposition::Or(..) => {
            out.push('(');
            render_disj(prop, out);
            out.push(')');
        }
        other => render_unary(other, out),
    }
}

fn render_unary(prop: &Proposition, out: &mut String) {
    match prop {
        Proposition::Var(a) => out.push_str(a.as_str()),
        Proposition::Not(inner) => {
            out.push('!');
            render_unary(inner, out);
        }
        _ => {
            out.push('(');
            render_disj(prop, out);
            out.push(')');
        }
    }
}
