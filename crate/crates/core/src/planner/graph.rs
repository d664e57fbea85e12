use std::collections::{BTreeMap, BTreeSet};

use crate::formula::Construct;

use super::PlanError;

/// A directed street segment between two waypoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Leg {
    pub id: String,
    pub from: String,
    pub to: String,
    /// Complete context of the event "the leg is traversed as planned".
    pub context: Construct,
}

impl Leg {
    /// Name of the traversal event in composite expressions.
    pub fn event_name(&self) -> String {
        format!("E{}", self.id)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct WaypointGraph {
    nodes: BTreeSet<String>,
    legs: Vec<Leg>,
    by_id: BTreeMap<String, usize>,
    outgoing: BTreeMap<String, Vec<usize>>,
    incoming: BTreeMap<String, Vec<usize>>,
}

impl WaypointGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a waypoint; returns false if it was already present.
    pub fn add_node(&mut self, id: impl Into<String>) -> bool {
        self.nodes.insert(id.into())
    }

    pub fn add_leg(
        &mut self,
        id: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
        context: Construct,
    ) -> Result<(), PlanError> {
        let (id, from, to) = (id.into(), from.into(), to.into());
        if self.by_id.contains_key(&id) {
            return Err(PlanError::DuplicateLeg(id));
        }
        for node in [&from, &to] {
            if !self.nodes.contains(node) {
                return Err(PlanError::UnknownNode(node.clone()));
            }
        }
        let idx = self.legs.len();
        self.by_id.insert(id.clone(), idx);
        self.outgoing.entry(from.clone()).or_default().push(idx);
        self.incoming.entry(to.clone()).or_default().push(idx);
        self.legs.push(Leg { id, from, to, context });
        Ok(())
    }

    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(String::as_str)
    }

    pub fn contains_node(&self, id: &str) -> bool {
        self.nodes.contains(id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Legs in insertion order.
    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn leg(&self, id: &str) -> Option<&Leg> {
        self.by_id.get(id).map(|&i| &self.legs[i])
    }

    pub(crate) fn require_leg(&self, id: &str) -> Result<&Leg, PlanError> {
        self.leg(id).ok_or_else(|| PlanError::UnknownLeg(id.to_string()))
    }

    pub(crate) fn require_node(&self, id: &str) -> Result<(), PlanError> {
        if self.contains_node(id) {
            Ok(())
        } else {
            Err(PlanError::UnknownNode(id.to_string()))
        }
    }

    pub fn outgoing(&self, node: &str) -> impl Iterator<Item = &Leg> {
        self.outgoing
            .get(node)
            .into_iter()
            .flatten()
            .map(move |&i| &self.legs[i])
    }

    pub fn incoming(&self, node: &str) -> impl Iterator<Item = &Leg> {
        self.incoming
            .get(node)
            .into_iter()
            .flatten()
            .map(move |&i| &self.legs[i])
    }
}
