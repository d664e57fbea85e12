//! Composite traversal events as `&`/`|` expressions over leg events.
//!
//! Paths are factored at post-dominators: when every route from a waypoint
//! passes through some later waypoint, the shared tail is conjoined once
//! instead of being repeated in each branch.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::events::EventExpr;

use super::{PlanError, WaypointGraph};

/// Legs and waypoints lying on routes from `from` to `goal`.
struct Region<'g> {
    graph: &'g WaypointGraph,
    nodes: BTreeSet<String>,
    goal: String,
    /// Post-dominator sets, each including the node itself.
    postdom: BTreeMap<String, BTreeSet<String>>,
}

impl<'g> Region<'g> {
    fn build(graph: &'g WaypointGraph, from: &str, goal: &str) -> Result<Self, PlanError> {
        // Forward from `from` without leaving `goal`; backward from `goal`
        // without entering `from` from behind.
        let forward = search(from, |n| {
            if n == goal {
                Vec::new()
            } else {
                graph.outgoing(n).map(|l| l.to.clone()).collect()
            }
        });
        let backward = search(goal, |n| {
            if n == from {
                Vec::new()
            } else {
                graph.incoming(n).map(|l| l.from.clone()).collect()
            }
        });
        let nodes: BTreeSet<String> = forward.intersection(&backward).cloned().collect();
        if !nodes.contains(goal) {
            return Err(PlanError::Unreachable {
                from: from.to_string(),
                goal: goal.to_string(),
            });
        }
        let mut region = Region {
            graph,
            nodes,
            goal: goal.to_string(),
            postdom: BTreeMap::new(),
        };
        let order = region.reverse_topological()?;
        for node in order {
            let mut set: Option<BTreeSet<String>> = None;
            for succ in region.successors(&node) {
                let s = &region.postdom[&succ];
                set = Some(match set {
                    None => s.clone(),
                    Some(acc) => acc.intersection(s).cloned().collect(),
                });
            }
            let mut set = set.unwrap_or_default();
            set.insert(node.clone());
            region.postdom.insert(node, set);
        }
        Ok(region)
    }

    fn successors(&self, node: &str) -> Vec<String> {
        if node == self.goal {
            return Vec::new();
        }
        self.graph
            .outgoing(node)
            .filter(|l| self.nodes.contains(&l.to))
            .map(|l| l.to.clone())
            .collect()
    }

    /// Kahn's algorithm on the reversed region; fails on a cycle.
    fn reverse_topological(&self) -> Result<Vec<String>, PlanError> {
        let mut out_degree: BTreeMap<&str, usize> = BTreeMap::new();
        let mut preds: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for node in &self.nodes {
            let succs = self.successors(node);
            out_degree.insert(node, succs.len());
            for s in succs {
                preds.entry(s).or_default().push(node.clone());
            }
        }
        let mut ready: VecDeque<String> = out_degree
            .iter()
            .filter(|(_, d)| **d == 0)
            .map(|(n, _)| n.to_string())
            .collect();
        let mut order = Vec::new();
        while let Some(node) = ready.pop_front() {
            for p in preds.get(&node).into_iter().flatten() {
                let d = out_degree.get_mut(p.as_str()).expect("region node");
                *d -= 1;
                if *d == 0 {
                    ready.push_back(p.clone());
                }
            }
            order.push(node);
        }
        if order.len() != self.nodes.len() {
            return Err(PlanError::CyclicRegion);
        }
        Ok(order)
    }

    /// Nearest strict post-dominator of `node`.
    fn immediate_postdom(&self, node: &str) -> &str {
        let own = &self.postdom[node];
        own.iter()
            .filter(|d| d.as_str() != node)
            .max_by_key(|d| self.postdom[d.as_str()].len())
            .expect("goal post-dominates every region node")
    }

    /// Expression for all routes from `node` to `stop`, where `stop`
    /// post-dominates `node`. `None` when `node == stop`.
    fn segment(&self, node: &str, stop: &str) -> Option<EventExpr> {
        if node == stop {
            return None;
        }
        let join = self.immediate_postdom(node).to_string();
        let branches: Vec<EventExpr> = self
            .graph
            .outgoing(node)
            .filter(|l| self.nodes.contains(&l.to))
            .map(|l| conjoin(Some(EventExpr::event(l.event_name())), self.segment(&l.to, &join)).expect("leg event"))
            .collect();
        let head = disjoin(branches);
        conjoin(head, self.segment(&join, stop))
    }
}

fn search(start: &str, next: impl Fn(&str) -> Vec<String>) -> BTreeSet<String> {
    let mut seen = BTreeSet::from([start.to_string()]);
    let mut queue = VecDeque::from([start.to_string()]);
    while let Some(n) = queue.pop_front() {
        for m in next(&n) {
            if seen.insert(m.clone()) {
                queue.push_back(m);
            }
        }
    }
    seen
}

/// Right-associated conjunction of two optional chains.
fn conjoin(left: Option<EventExpr>, right: Option<EventExpr>) -> Option<EventExpr> {
    match (left, right) {
        (None, r) => r,
        (l, None) => l,
        (Some(EventExpr::And(a, b)), Some(r)) => Some(EventExpr::And(a, Box::new(conjoin(Some(*b), Some(r))?))),
        (Some(l), Some(r)) => Some(EventExpr::and(l, r)),
    }
}

fn disjoin(items: Vec<EventExpr>) -> Option<EventExpr> {
    items.into_iter().rev().reduce(|acc, item| EventExpr::or(item, acc))
}

/// The `&`/`|` expression over leg events `E<leg id>` describing travel from
/// `from` to `goal`. Its value under [`crate::events::eval_complex`] equals
/// the maximin reach possibility.
pub fn composite_event_expr(graph: &WaypointGraph, from: &str, goal: &str) -> Result<EventExpr, PlanError> {
    graph.require_node(from)?;
    graph.require_node(goal)?;
    if from == goal {
        return Err(PlanError::EmptyRoute);
    }
    let region = Region::build(graph, from, goal)?;
    Ok(region.segment(from, goal).expect("from differs from goal"))
}

/// Composite event for leaving `from` towards `via` and continuing to `goal`.
pub fn composite_event_via(graph: &WaypointGraph, from: &str, via: &str, goal: &str) -> Result<EventExpr, PlanError> {
    graph.require_node(from)?;
    graph.require_node(via)?;
    graph.require_node(goal)?;
    let first: Vec<EventExpr> = graph
        .outgoing(from)
        .filter(|l| l.to == via)
        .map(|l| EventExpr::event(l.event_name()))
        .collect();
    let first = disjoin(first).ok_or_else(|| PlanError::Unreachable {
        from: from.to_string(),
        goal: via.to_string(),
    })?;
    if via == goal {
        return Ok(first);
    }
    let rest = composite_event_expr(graph, via, goal)?;
    Ok(conjoin(Some(first), Some(rest)).expect("both present"))
}
