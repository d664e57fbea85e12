//! Input generators for the benchmarks.

use possibility_core::formula::{validate_construct, AtomRegistry, Proposition};
use possibility_core::planner::{LegPossibilities, ProbTable, WaypointGraph};
use possibility_core::{AtomId, Degree};
use rand::Rng;

/// Alternating `&`/`|` tree of the given depth over `p0..` and `!c0..`.
/// Distribution blows up on these, so conv cost grows quickly with depth.
pub fn nested_construct<R: Rng>(rng: &mut R, depth: usize) -> Proposition {
    fn go<R: Rng>(rng: &mut R, depth: usize, conj: bool) -> Proposition {
        if depth == 0 {
            let i = rng.random_range(0..8);
            return if rng.random_bool(0.5) {
                Proposition::var(&format!("p{i}"))
            } else {
                Proposition::not(Proposition::var(&format!("c{i}")))
            };
        }
        let l = go(rng, depth - 1, !conj);
        let r = go(rng, depth - 1, !conj);
        if conj {
            Proposition::and(l, r)
        } else {
            Proposition::or(l, r)
        }
    }
    go(rng, depth, true)
}

/// Registry declaring `p0..p7` as prerequisites and `c0..c7` as constraints.
pub fn registry() -> AtomRegistry {
    let mut reg = AtomRegistry::new();
    for i in 0..8 {
        reg = reg.prerequisite(&format!("p{i}")).unwrap();
        reg = reg.constraint(&format!("c{i}")).unwrap();
    }
    reg
}

/// Random graph whose legs each carry a single prerequisite `ok`; returns the
/// graph, its probability table and the resulting leg possibilities.
pub fn random_network<R: Rng>(rng: &mut R, nodes: usize, legs: usize) -> (WaypointGraph, ProbTable, LegPossibilities) {
    let ok = AtomId::new("ok").unwrap();
    let reg = AtomRegistry::new().prerequisite("ok").unwrap();
    let context = validate_construct(Proposition::var("ok"), &reg, true).unwrap();
    let mut g = WaypointGraph::new();
    for i in 0..nodes {
        g.add_node(format!("n{i}"));
    }
    let mut table = ProbTable::new();
    let mut poss = LegPossibilities::new();
    for j in 0..legs {
        let id = format!("l{j}");
        let from = format!("n{}", rng.random_range(0..nodes));
        let to = format!("n{}", rng.random_range(0..nodes));
        g.add_leg(id.clone(), from, to, context.clone()).unwrap();
        let d = Degree::new(rng.random()).unwrap();
        table.set_default(id.clone(), ok.clone(), d);
        poss.insert(id, d);
    }
    (g, table, poss)
}
