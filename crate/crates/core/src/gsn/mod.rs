//! Typed GSN argument graphs.
//!
//! An [`ArgumentGraph`] holds goals, strategies, solutions and contextual
//! nodes joined by `SupportedBy` and `InContextOf` edges. The checked
//! operations ([`ArgumentGraph::add_node`], [`ArgumentGraph::add_edge`],
//! [`ArgumentGraph::graft_subtree`]) keep the graph well formed and return a
//! new value. [`ArgumentGraph::from_parts`] builds a graph without checks so
//! that [`validate_graph`] can report on arbitrary input.

mod validate;

use std::borrow::Borrow;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use validate::{structural_diagnostics, validate_fragment, validate_graph, ValidationMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    Goal,
    Strategy,
    Solution,
    Context,
    Assumption,
    Justification,
}

impl NodeKind {
    pub const ALL: [NodeKind; 6] = [
        NodeKind::Goal,
        NodeKind::Strategy,
        NodeKind::Solution,
        NodeKind::Context,
        NodeKind::Assumption,
        NodeKind::Justification,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Goal => "Goal",
            NodeKind::Strategy => "Strategy",
            NodeKind::Solution => "Solution",
            NodeKind::Context => "Context",
            NodeKind::Assumption => "Assumption",
            NodeKind::Justification => "Justification",
        }
    }

    /// Goals and strategies make claims or decompose them; only they may
    /// have outgoing edges or carry the undeveloped decorator.
    pub fn is_claim(self) -> bool {
        matches!(self, NodeKind::Goal | NodeKind::Strategy)
    }

    pub fn is_contextual(self) -> bool {
        matches!(
            self,
            NodeKind::Context | NodeKind::Assumption | NodeKind::Justification
        )
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NodeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NodeKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown node kind '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    SupportedBy,
    InContextOf,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::SupportedBy => "SupportedBy",
            EdgeKind::InContextOf => "InContextOf",
        }
    }

    /// The compatibility matrix for edge endpoints.
    pub fn allows(self, source: NodeKind, target: NodeKind) -> bool {
        if !source.is_claim() {
            return false;
        }
        match self {
            EdgeKind::SupportedBy => matches!(
                target,
                NodeKind::Goal | NodeKind::Strategy | NodeKind::Solution
            ),
            EdgeKind::InContextOf => target.is_contextual(),
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Node identifier matching `[A-Za-z][A-Za-z0-9_.-]*`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Result<Self, GraphError> {
        let id = id.into();
        if Self::is_valid(&id) {
            Ok(NodeId(id))
        } else {
            Err(GraphError::InvalidId(id))
        }
    }

    pub fn is_valid(id: &str) -> bool {
        let mut chars = id.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// `prefix` + id. Fails when the result is not a valid id.
    pub fn prefixed(&self, prefix: &str) -> Result<Self, GraphError> {
        NodeId::new(format!("{prefix}{}", self.0))
    }
}

impl TryFrom<String> for NodeId {
    type Error = GraphError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        NodeId::new(value)
    }
}

impl From<NodeId> for String {
    fn from(id: NodeId) -> String {
        id.0
    }
}

impl Borrow<str> for NodeId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GsnNode {
    pub id: NodeId,
    pub kind: NodeKind,
    pub statement: String,
    pub undeveloped: bool,
    pub uninstantiated: bool,
    pub tags: BTreeMap<String, String>,
}

impl GsnNode {
    pub fn new(id: NodeId, kind: NodeKind, statement: impl Into<String>) -> Self {
        GsnNode {
            id,
            kind,
            statement: statement.into(),
            undeveloped: false,
            uninstantiated: false,
            tags: BTreeMap::new(),
        }
    }

    pub fn undeveloped(mut self) -> Self {
        self.undeveloped = true;
        self
    }

    pub fn tag(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.tags.insert(key.into(), value.into());
        self
    }

    pub fn tag_value(&self, key: &str) -> Option<&str> {
        self.tags.get(key).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GsnEdge {
    pub source: NodeId,
    pub target: NodeId,
    pub kind: EdgeKind,
}

impl GsnEdge {
    pub fn new(source: NodeId, target: NodeId, kind: EdgeKind) -> Self {
        GsnEdge {
            source,
            target,
            kind,
        }
    }

    pub fn supported_by(source: NodeId, target: NodeId) -> Self {
        Self::new(source, target, EdgeKind::SupportedBy)
    }

    pub fn in_context_of(source: NodeId, target: NodeId) -> Self {
        Self::new(source, target, EdgeKind::InContextOf)
    }
}

impl fmt::Display for GsnEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -{}-> {}", self.source, self.kind, self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid node id '{0}'")]
    InvalidId(String),
    #[error("node '{0}' already exists")]
    DuplicateNode(NodeId),
    #[error("edge endpoint '{0}' does not exist")]
    UnknownEndpoint(NodeId),
    #[error("{kind} edge from {source_kind} to {target_kind} is not allowed")]
    KindIncompatible {
        kind: EdgeKind,
        source_kind: NodeKind,
        target_kind: NodeKind,
    },
    #[error("edge {0} would introduce a SupportedBy cycle")]
    CycleIntroduced(GsnEdge),
    #[error("edge {0} already exists")]
    DuplicateEdge(GsnEdge),
    #[error("attach point '{0}' does not exist")]
    UnknownAttachPoint(String),
    #[error("attach point '{id}' is a {kind}; only goals and strategies can be developed")]
    InvalidAttachPoint { id: NodeId, kind: NodeKind },
    #[error("grafted id '{0}' collides with an existing node")]
    IdCollision(NodeId),
    #[error("subtree must have exactly one root, found {0}")]
    MultiRootSubtree(usize),
}

/// A GSN argument: a safety case or a pattern template.
///
/// Equality is canonical: two graphs are equal when their node and edge
/// sets are equal, whatever the insertion order.
#[derive(Debug, Clone, Default)]
pub struct ArgumentGraph {
    nodes: Vec<GsnNode>,
    edges: Vec<GsnEdge>,
}

impl ArgumentGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph with no checking at all. Use [`validate_graph`] to
    /// find out what is wrong with it.
    pub fn from_parts(nodes: Vec<GsnNode>, edges: Vec<GsnEdge>) -> Self {
        ArgumentGraph { nodes, edges }
    }

    pub fn into_parts(self) -> (Vec<GsnNode>, Vec<GsnEdge>) {
        (self.nodes, self.edges)
    }

    pub fn nodes(&self) -> &[GsnNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[GsnEdge] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: &str) -> Option<&GsnNode> {
        self.nodes.iter().find(|n| n.id.as_str() == id)
    }

    pub fn node_mut(&mut self, id: &str) -> Option<&mut GsnNode> {
        self.nodes.iter_mut().find(|n| n.id.as_str() == id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.node(id).is_some()
    }

    pub fn contains_edge(&self, edge: &GsnEdge) -> bool {
        self.edges.contains(edge)
    }

    /// Targets of the outgoing edges of `id` with the given kind, in
    /// insertion order.
    pub fn children<'a>(&'a self, id: &'a str, kind: EdgeKind) -> impl Iterator<Item = &'a NodeId> {
        self.edges
            .iter()
            .filter(move |e| e.kind == kind && e.source.as_str() == id)
            .map(|e| &e.target)
    }

    /// Nodes that can head an argument (goal, strategy or solution) and have
    /// no incoming `SupportedBy` edge, sorted by id.
    pub fn roots(&self) -> Vec<&NodeId> {
        let supported: HashSet<&str> = self
            .edges
            .iter()
            .filter(|e| e.kind == EdgeKind::SupportedBy)
            .map(|e| e.target.as_str())
            .collect();
        let mut roots: Vec<&NodeId> = self
            .nodes
            .iter()
            .filter(|n| !n.kind.is_contextual() && !supported.contains(n.id.as_str()))
            .map(|n| &n.id)
            .collect();
        roots.sort();
        roots.dedup();
        roots
    }

    /// Every node reachable from `id` over either edge kind, `id` included.
    pub fn descendants(&self, id: &str) -> HashSet<NodeId> {
        let mut adjacency: HashMap<&str, Vec<&NodeId>> = HashMap::new();
        for e in &self.edges {
            adjacency
                .entry(e.source.as_str())
                .or_default()
                .push(&e.target);
        }
        let mut seen = HashSet::new();
        let Some(start) = self.node(id) else {
            return seen;
        };
        let mut stack = vec![&start.id];
        while let Some(current) = stack.pop() {
            if !seen.insert(current.clone()) {
                continue;
            }
            if let Some(next) = adjacency.get(current.as_str()) {
                stack.extend(next.iter().copied());
            }
        }
        seen
    }

    /// Sorted copy, the representation used for equality and serialization.
    pub fn canonical(&self) -> ArgumentGraph {
        let mut nodes = self.nodes.clone();
        nodes.sort_by(|a, b| a.id.cmp(&b.id));
        let mut edges = self.edges.clone();
        edges.sort();
        ArgumentGraph { nodes, edges }
    }

    pub fn insert_node(&mut self, node: GsnNode) -> Result<(), GraphError> {
        if self.contains(node.id.as_str()) {
            return Err(GraphError::DuplicateNode(node.id));
        }
        self.nodes.push(node);
        Ok(())
    }

    pub fn add_node(&self, node: GsnNode) -> Result<ArgumentGraph, GraphError> {
        let mut next = self.clone();
        next.insert_node(node)?;
        Ok(next)
    }

    pub fn insert_edge(&mut self, edge: GsnEdge) -> Result<(), GraphError> {
        let source = self
            .node(edge.source.as_str())
            .ok_or_else(|| GraphError::UnknownEndpoint(edge.source.clone()))?;
        let target = self
            .node(edge.target.as_str())
            .ok_or_else(|| GraphError::UnknownEndpoint(edge.target.clone()))?;
        if edge.source == edge.target {
            return Err(GraphError::CycleIntroduced(edge));
        }
        if !edge.kind.allows(source.kind, target.kind) {
            return Err(GraphError::KindIncompatible {
                kind: edge.kind,
                source_kind: source.kind,
                target_kind: target.kind,
            });
        }
        if self.contains_edge(&edge) {
            return Err(GraphError::DuplicateEdge(edge));
        }
        if edge.kind == EdgeKind::SupportedBy && self.supports(&edge.target, &edge.source) {
            return Err(GraphError::CycleIntroduced(edge));
        }
        self.edges.push(edge);
        Ok(())
    }

    /// Returns a copy of the graph with `edge` added; `self` is untouched.
    pub fn add_edge(&self, edge: GsnEdge) -> Result<ArgumentGraph, GraphError> {
        let mut next = self.clone();
        next.insert_edge(edge)?;
        Ok(next)
    }

    pub fn remove_edge(&self, edge: &GsnEdge) -> ArgumentGraph {
        let mut next = self.clone();
        next.edges.retain(|e| e != edge);
        next
    }

    /// Drops `id`, everything reachable from it, and every incident edge.
    pub fn without_subtree(&self, id: &str) -> ArgumentGraph {
        let doomed = self.descendants(id);
        ArgumentGraph {
            nodes: self
                .nodes
                .iter()
                .filter(|n| !doomed.contains(&n.id))
                .cloned()
                .collect(),
            edges: self
                .edges
                .iter()
                .filter(|e| !doomed.contains(&e.source) && !doomed.contains(&e.target))
                .cloned()
                .collect(),
        }
    }

    /// Whether `to` is reachable from `from` over `SupportedBy` edges.
    fn supports(&self, from: &NodeId, to: &NodeId) -> bool {
        let mut stack = vec![from];
        let mut seen = HashSet::new();
        while let Some(current) = stack.pop() {
            if current == to {
                return true;
            }
            if !seen.insert(current) {
                continue;
            }
            stack.extend(self.children(current.as_str(), EdgeKind::SupportedBy));
        }
        false
    }

    /// Attaches a renamed copy of `subtree` below `at`.
    ///
    /// Every subtree id gets `prefix` prepended; the subtree root is linked
    /// to `at` with a `SupportedBy` edge and `at` loses its undeveloped
    /// decorator.
    pub fn graft_subtree(
        &self,
        at: &str,
        subtree: &ArgumentGraph,
        prefix: &str,
    ) -> Result<ArgumentGraph, GraphError> {
        let anchor = self
            .node(at)
            .ok_or_else(|| GraphError::UnknownAttachPoint(at.to_string()))?;
        if !anchor.kind.is_claim() {
            return Err(GraphError::InvalidAttachPoint {
                id: anchor.id.clone(),
                kind: anchor.kind,
            });
        }
        let roots = subtree.roots();
        if roots.len() != 1 {
            return Err(GraphError::MultiRootSubtree(roots.len()));
        }
        let root = roots[0].prefixed(prefix)?;

        let mut renamed: HashMap<&NodeId, NodeId> = HashMap::new();
        let mut next = self.clone();
        for node in &subtree.nodes {
            let id = node.id.prefixed(prefix)?;
            if next.contains(id.as_str()) {
                return Err(GraphError::IdCollision(id));
            }
            renamed.insert(&node.id, id.clone());
            next.nodes.push(GsnNode { id, ..node.clone() });
        }
        for edge in &subtree.edges {
            let rename = |id: &NodeId| {
                renamed
                    .get(id)
                    .cloned()
                    .ok_or_else(|| GraphError::UnknownEndpoint(id.clone()))
            };
            next.edges.push(GsnEdge {
                source: rename(&edge.source)?,
                target: rename(&edge.target)?,
                kind: edge.kind,
            });
        }
        let anchor_id = anchor.id.clone();
        next.edges
            .push(GsnEdge::supported_by(anchor_id.clone(), root));
        if let Some(anchor) = next.node_mut(anchor_id.as_str()) {
            anchor.undeveloped = false;
        }
        Ok(next)
    }
}

impl PartialEq for ArgumentGraph {
    fn eq(&self, other: &Self) -> bool {
        if self.nodes.len() != other.nodes.len() || self.edges.len() != other.edges.len() {
            return false;
        }
        let a = self.canonical();
        let b = other.canonical();
        a.nodes == b.nodes && a.edges == b.edges
    }
}

impl Eq for ArgumentGraph {}

/// Shorthand for tests and fixtures: panics on an invalid id.
pub fn id(s: &str) -> NodeId {
    NodeId::new(s).unwrap_or_else(|e| panic!("{e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn top_level() -> ArgumentGraph {
        ArgumentGraph::from_parts(
            vec![
                GsnNode::new(
                    id("G1.1"),
                    NodeKind::Goal,
                    "SimLingo is sufficiently safe to use",
                ),
                GsnNode::new(
                    id("S1.1"),
                    NodeKind::Strategy,
                    "Argument over system functions",
                ),
                GsnNode::new(id("C1.1"), NodeKind::Context, "CARLA simulator"),
            ],
            vec![],
        )
    }

    #[test]
    fn add_edge_keeps_original() {
        let g = top_level();
        let edge = GsnEdge::supported_by(id("G1.1"), id("S1.1"));
        let next = g.add_edge(edge.clone()).unwrap();
        assert!(next.contains_edge(&edge));
        assert!(g.edges().is_empty());
    }

    #[test]
    fn add_edge_rejects_self_loop() {
        let g = top_level();
        let err = g
            .add_edge(GsnEdge::supported_by(id("G1.1"), id("G1.1")))
            .unwrap_err();
        assert!(matches!(err, GraphError::CycleIntroduced(_)));
    }

    #[test]
    fn add_edge_rejects_goal_supported_by_context() {
        let g = top_level();
        let err = g
            .add_edge(GsnEdge::supported_by(id("G1.1"), id("C1.1")))
            .unwrap_err();
        assert!(matches!(err, GraphError::KindIncompatible { .. }));
    }

    #[test]
    fn add_edge_rejects_cycle_and_duplicate() {
        let g = top_level()
            .add_edge(GsnEdge::supported_by(id("G1.1"), id("S1.1")))
            .unwrap();
        assert!(matches!(
            g.add_edge(GsnEdge::supported_by(id("S1.1"), id("G1.1"))),
            Err(GraphError::CycleIntroduced(_))
        ));
        assert!(matches!(
            g.add_edge(GsnEdge::supported_by(id("G1.1"), id("S1.1"))),
            Err(GraphError::DuplicateEdge(_))
        ));
        assert!(matches!(
            g.add_edge(GsnEdge::supported_by(id("G1.1"), id("Nope"))),
            Err(GraphError::UnknownEndpoint(_))
        ));
    }

    #[test]
    fn add_then_remove_is_identity() {
        let g = top_level();
        let edge = GsnEdge::in_context_of(id("G1.1"), id("C1.1"));
        assert_eq!(g.add_edge(edge.clone()).unwrap().remove_edge(&edge), g);
    }

    #[test]
    fn node_ids_follow_the_pattern() {
        assert!(NodeId::new("RI.G2.1").is_ok());
        assert!(NodeId::new("Sn_1-a").is_ok());
        assert!(NodeId::new("").is_err());
        assert!(NodeId::new("1G").is_err());
        assert!(NodeId::new("G 1").is_err());
    }

    #[test]
    fn graft_renames_and_links() {
        let g = top_level()
            .add_edge(GsnEdge::supported_by(id("G1.1"), id("S1.1")))
            .unwrap()
            .add_node(GsnNode::new(id("G3.2"), NodeKind::Goal, "rejects").undeveloped())
            .unwrap()
            .add_edge(GsnEdge::supported_by(id("S1.1"), id("G3.2")))
            .unwrap();
        let sub = ArgumentGraph::from_parts(
            vec![
                GsnNode::new(id("G1"), NodeKind::Goal, "root"),
                GsnNode::new(id("Sn1"), NodeKind::Solution, "evidence"),
            ],
            vec![GsnEdge::supported_by(id("G1"), id("Sn1"))],
        );
        let out = g.graft_subtree("G3.2", &sub, "RI.").unwrap();
        assert_eq!(out.nodes().len(), g.nodes().len() + sub.nodes().len());
        assert_eq!(out.edges().len(), g.edges().len() + sub.edges().len() + 1);
        assert!(out.contains_edge(&GsnEdge::supported_by(id("G3.2"), id("RI.G1"))));
        assert!(out.contains_edge(&GsnEdge::supported_by(id("RI.G1"), id("RI.Sn1"))));
        assert!(!out.node("G3.2").unwrap().undeveloped);
    }

    #[test]
    fn graft_errors() {
        let g = top_level();
        let empty = ArgumentGraph::new();
        assert_eq!(
            g.graft_subtree("G1.1", &empty, "X."),
            Err(GraphError::MultiRootSubtree(0))
        );
        let sub = ArgumentGraph::from_parts(
            vec![GsnNode::new(id("S1.1"), NodeKind::Strategy, "clash")],
            vec![],
        );
        assert_eq!(
            g.graft_subtree("G1.1", &sub, ""),
            Err(GraphError::IdCollision(id("S1.1")))
        );
        assert!(matches!(
            g.graft_subtree("G9", &sub, "X."),
            Err(GraphError::UnknownAttachPoint(_))
        ));
        assert!(matches!(
            g.graft_subtree("C1.1", &sub, "X."),
            Err(GraphError::InvalidAttachPoint { .. })
        ));
    }

    #[test]
    fn equality_ignores_insertion_order() {
        let a = top_level();
        let (mut nodes, edges) = a.clone().into_parts();
        nodes.reverse();
        assert_eq!(a, ArgumentGraph::from_parts(nodes, edges));
    }
}
