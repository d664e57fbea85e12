//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use possibility_core::formula::{validate_construct, AtomId, AtomRegistry, Construct, Proposition};
use possibility_core::planner::{LegPossibilities, ProbTable, WaypointGraph};
use possibility_core::valuation::{Assignment, Degree};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

pub const PREREQS: [&str; 4] = ["p1", "p2", "p3", "p4"];
pub const CONSTRAINTS: [&str; 4] = ["c1", "c2", "c3", "c4"];

pub fn registry() -> AtomRegistry {
    let mut reg = AtomRegistry::new();
    for p in PREREQS {
        reg = reg.prerequisite(p).unwrap();
    }
    for c in CONSTRAINTS {
        reg = reg.constraint(c).unwrap();
    }
    reg
}

/// Builds a construct rule by rule: a leaf is a prerequisite or a negated
/// constraint; an inner node joins two sub-constructs with `&` or `|`.
pub fn random_construct<R: Rng>(rng: &mut R, depth: usize) -> Proposition {
    if depth == 0 || rng.random_bool(0.3) {
        if rng.random_bool(0.5) {
            Proposition::var(PREREQS[rng.random_range(0..PREREQS.len())])
        } else {
            Proposition::not(Proposition::var(CONSTRAINTS[rng.random_range(0..CONSTRAINTS.len())]))
        }
    } else {
        let l = random_construct(rng, depth - 1);
        let r = random_construct(rng, depth - 1);
        if rng.random_bool(0.5) {
            Proposition::and(l, r)
        } else {
            Proposition::or(l, r)
        }
    }
}

/// Any proposition over `atoms`, negation allowed anywhere.
pub fn random_proposition<R: Rng>(rng: &mut R, depth: usize, atoms: &[&str]) -> Proposition {
    if depth == 0 || rng.random_bool(0.25) {
        return Proposition::var(atoms[rng.random_range(0..atoms.len())]);
    }
    match rng.random_range(0..3) {
        0 => Proposition::not(random_proposition(rng, depth - 1, atoms)),
        1 => Proposition::and(
            random_proposition(rng, depth - 1, atoms),
            random_proposition(rng, depth - 1, atoms),
        ),
        _ => Proposition::or(
            random_proposition(rng, depth - 1, atoms),
            random_proposition(rng, depth - 1, atoms),
        ),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Op {
    And,
    Or,
}

fn flatten(prop: &Proposition, op: Op, out: &mut Vec<Proposition>) {
    match (prop, op) {
        (Proposition::And(l, r), Op::And) | (Proposition::Or(l, r), Op::Or) => {
            flatten(l, op, out);
            flatten(r, op, out);
        }
        (other, _) => out.push(other.clone()),
    }
}

fn random_bracketing<R: Rng>(rng: &mut R, mut items: Vec<Proposition>, op: Op) -> Proposition {
    if items.len() == 1 {
        return items.pop().unwrap();
    }
    let split = rng.random_range(1..items.len());
    let right = items.split_off(split);
    let l = random_bracketing(rng, items, op);
    let r = random_bracketing(rng, right, op);
    match op {
        Op::And => Proposition::and(l, r),
        Op::Or => Proposition::or(l, r),
    }
}

/// Rearranges `prop` using only commutativity and associativity: every
/// maximal `&`/`|` chain is permuted and re-bracketed at random.
pub fn ac_shuffle<R: Rng>(rng: &mut R, prop: &Proposition) -> Proposition {
    let op = match prop {
        Proposition::Var(_) => return prop.clone(),
        Proposition::Not(inner) => return Proposition::not(ac_shuffle(rng, inner)),
        Proposition::And(..) => Op::And,
        Proposition::Or(..) => Op::Or,
    };
    let mut items = Vec::new();
    flatten(prop, op, &mut items);
    let mut items: Vec<Proposition> = items.iter().map(|p| ac_shuffle(rng, p)).collect();
    items.shuffle(rng);
    random_bracketing(rng, items, op)
}

pub fn uniform_assignment<R: Rng>(rng: &mut R, atoms: &BTreeSet<AtomId>) -> Assignment {
    let mut a = Assignment::new();
    for atom in atoms {
        a.set(atom.clone(), Degree::new(rng.random::<f64>()).unwrap());
    }
    a
}

/// Values k / 1024, for which `1 - x` is exact.
pub fn dyadic_assignment<R: Rng>(rng: &mut R, atoms: &BTreeSet<AtomId>) -> Assignment {
    let mut a = Assignment::new();
    for atom in atoms {
        a.set(
            atom.clone(),
            Degree::new(f64::from(rng.random_range(0u32..=1024)) / 1024.0).unwrap(),
        );
    }
    a
}

pub fn construct(prop: Proposition) -> Construct {
    validate_construct(prop, &registry(), true).unwrap()
}

/// proptest strategy for general propositions over `a`..`e`.
pub fn arb_proposition() -> impl Strategy<Value = Proposition> {
    let leaf = prop::sample::select(vec!["a", "b", "c", "d", "e"]).prop_map(Proposition::var);
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Proposition::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Proposition::and(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| Proposition::or(l, r)),
        ]
    })
}

/// proptest strategy for constructs over the shared registry.
pub fn arb_construct() -> impl Strategy<Value = Proposition> {
    let leaf = prop_oneof![
        prop::sample::select(PREREQS.to_vec()).prop_map(Proposition::var),
        prop::sample::select(CONSTRAINTS.to_vec()).prop_map(|c| Proposition::not(Proposition::var(c))),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Proposition::and(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| Proposition::or(l, r)),
        ]
    })
}

/// Leg context used by synthetic graphs: one prerequisite `ok`, so a leg's
/// possibility is exactly the probability stored for it.
pub fn unit_context() -> Construct {
    let reg = AtomRegistry::new().prerequisite("ok").unwrap();
    validate_construct(Proposition::var("ok"), &reg, true).unwrap()
}

pub fn table_from(poss: &LegPossibilities) -> ProbTable {
    let mut table = ProbTable::new();
    for (leg, d) in poss {
        table.set_default(leg.clone(), AtomId::new("ok").unwrap(), *d);
    }
    table
}

pub const NETWORK_LEGS: [(&str, &str, &str); 9] = [
    ("1", "A", "B"),
    ("2", "A", "C"),
    ("3", "B", "D"),
    ("4", "B", "E"),
    ("5", "C", "F"),
    ("6", "D", "G"),
    ("7", "E", "G"),
    ("8", "F", "G"),
    ("9", "G", "H"),
];

pub const NETWORK_POSS: [f64; 9] = [0.8, 0.65, 0.9, 0.6, 0.9, 0.7, 0.95, 0.8, 0.9];

pub fn network() -> (WaypointGraph, LegPossibilities) {
    let mut g = WaypointGraph::new();
    for n in ["A", "B", "C", "D", "E", "F", "G", "H"] {
        g.add_node(n);
    }
    let mut poss = LegPossibilities::new();
    for ((id, from, to), p) in NETWORK_LEGS.iter().zip(NETWORK_POSS) {
        g.add_leg(*id, *from, *to, unit_context()).unwrap();
        poss.insert(id.to_string(), Degree::new(p).unwrap());
    }
    (g, poss)
}

/// Random directed graph with up to `max_nodes` waypoints `n0..` and up to
/// `max_legs` legs (self-loops and parallel legs allowed). Possibilities are
/// drawn from a coarse grid so ties are common.
pub fn random_graph<R: Rng>(rng: &mut R, max_nodes: usize, max_legs: usize) -> (WaypointGraph, LegPossibilities) {
    let n = rng.random_range(2..=max_nodes);
    let m = rng.random_range(0..=max_legs);
    let mut g = WaypointGraph::new();
    for i in 0..n {
        g.add_node(format!("n{i}"));
    }
    let mut poss = LegPossibilities::new();
    for j in 0..m {
        let from = format!("n{}", rng.random_range(0..n));
        let to = format!("n{}", rng.random_range(0..n));
        let id = format!("l{j}");
        g.add_leg(id.clone(), from, to, unit_context()).unwrap();
        poss.insert(id, Degree::new(f64::from(rng.random_range(0u32..=20)) / 20.0).unwrap());
    }
    (g, poss)
}

/// Exhaustive maximum over simple paths of the minimum leg possibility.
pub fn enumerate_reach(g: &WaypointGraph, poss: &LegPossibilities, from: &str, goal: &str) -> Degree {
    fn dfs(
        g: &WaypointGraph,
        poss: &LegPossibilities,
        node: &str,
        goal: &str,
        bottleneck: Degree,
        visited: &mut BTreeSet<String>,
        best: &mut Degree,
    ) {
        if node == goal {
            if bottleneck > *best {
                *best = bottleneck;
            }
            return;
        }
        for leg in g.outgoing(node) {
            if visited.contains(&leg.to) {
                continue;
            }
            visited.insert(leg.to.clone());
            dfs(g, poss, &leg.to, goal, bottleneck.and(poss[&leg.id]), visited, best);
            visited.remove(&leg.to);
        }
    }
    if from == goal {
        return Degree::ONE;
    }
    let mut best = Degree::ZERO;
    let mut visited = BTreeSet::from([from.to_string()]);
    dfs(g, poss, from, goal, Degree::ONE, &mut visited, &mut best);
    best
}

pub fn scenario_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
}

pub fn load_scenario(name: &str) -> possibility_core::planner::Scenario {
    let text = std::fs::read_to_string(scenario_path(name)).unwrap();
    possibility_core::planner::Scenario::parse(&text).unwrap()
}
