use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::{ArgumentGraph, EdgeKind, GsnEdge, NodeKind};
use crate::diag::{sort_diagnostics, Diagnostic, Locus};

/// `Case` checks a complete safety case; `Fragment` checks a pattern
/// template or an instantiated pattern, which may be rooted in a strategy
/// and needs no top-level context.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationMode {
    Case,
    Fragment,
}

pub fn validate_graph(graph: &ArgumentGraph) -> Vec<Diagnostic> {
    check(graph, Some(ValidationMode::Case))
}

pub fn validate_fragment(graph: &ArgumentGraph) -> Vec<Diagnostic> {
    check(graph, Some(ValidationMode::Fragment))
}

/// Only the rules that make up the graph type's invariants (GSN001-GSN009):
/// unique ids, resolvable endpoints, compatible kinds, acyclic support.
pub fn structural_diagnostics(graph: &ArgumentGraph) -> Vec<Diagnostic> {
    check(graph, None)
}

fn node_locus(id: &str) -> Locus {
    Locus::Node(id.to_string())
}

fn edge_locus(e: &GsnEdge) -> Locus {
    Locus::Edge {
        source: e.source.to_string(),
        target: e.target.to_string(),
        kind: e.kind.to_string(),
    }
}

fn check(graph: &ArgumentGraph, mode: Option<ValidationMode>) -> Vec<Diagnostic> {
    let mut diags = Vec::new();

    let mut kinds: BTreeMap<&str, NodeKind> = BTreeMap::new();
    for node in graph.nodes() {
        let id = node.id.as_str();
        if kinds.insert(id, node.kind).is_some() {
            diags.push(
                Diagnostic::error("GSN003", format!("duplicate node id '{id}'")).at(node_locus(id)),
            );
        }
        if node.statement.trim().is_empty() {
            diags.push(
                Diagnostic::error(
                    "GSN001",
                    format!("{} '{id}' has an empty statement", node.kind),
                )
                .at(node_locus(id)),
            );
        }
        if node.undeveloped && !node.kind.is_claim() {
            diags.push(
                Diagnostic::error(
                    "GSN009",
                    format!("{} '{id}' cannot be marked undeveloped", node.kind),
                )
                .at(node_locus(id)),
            );
        }
    }

    let mut seen_edges = HashSet::new();
    let mut support: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for edge in graph.edges() {
        if !seen_edges.insert(edge) {
            diags.push(
                Diagnostic::error("GSN006", format!("duplicate edge {edge}")).at(edge_locus(edge)),
            );
            continue;
        }
        let source = kinds.get(edge.source.as_str()).copied();
        let target = kinds.get(edge.target.as_str()).copied();
        for (endpoint, kind) in [(&edge.source, source), (&edge.target, target)] {
            if kind.is_none() {
                diags.push(
                    Diagnostic::error(
                        "GSN004",
                        format!("edge {edge} refers to unknown node '{endpoint}'"),
                    )
                    .at(edge_locus(edge)),
                );
            }
        }
        if edge.source == edge.target {
            diags.push(
                Diagnostic::error("GSN005", format!("edge {edge} is a self-loop"))
                    .at(edge_locus(edge)),
            );
            continue;
        }
        let (Some(sk), Some(tk)) = (source, target) else {
            continue;
        };
        if !edge.kind.allows(sk, tk) {
            diags.push(
                Diagnostic::error(
                    "GSN007",
                    format!("{} edge from {sk} to {tk} is not allowed", edge.kind),
                )
                .at(edge_locus(edge)),
            );
        }
        if edge.kind == EdgeKind::SupportedBy {
            support
                .entry(edge.source.as_str())
                .or_default()
                .push(edge.target.as_str());
        }
    }

    for (source, target) in back_edges(&support) {
        diags.push(
            Diagnostic::error(
                "GSN008",
                format!("SupportedBy edge {source} -> {target} closes a cycle"),
            )
            .at(Locus::Edge {
                source: source.to_string(),
                target: target.to_string(),
                kind: EdgeKind::SupportedBy.to_string(),
            }),
        );
    }

    if let Some(mode) = mode {
        argument_rules(graph, mode, &kinds, &mut diags);
    }

    sort_diagnostics(&mut diags);
    diags
}

fn argument_rules(
    graph: &ArgumentGraph,
    mode: ValidationMode,
    kinds: &BTreeMap<&str, NodeKind>,
    diags: &mut Vec<Diagnostic>,
) {
    let mut has_support: BTreeSet<&str> = BTreeSet::new();
    let mut has_context: BTreeSet<&str> = BTreeSet::new();
    let mut contextualised: BTreeSet<&str> = BTreeSet::new();
    for edge in graph.edges() {
        match edge.kind {
            EdgeKind::SupportedBy => {
                has_support.insert(edge.source.as_str());
            }
            EdgeKind::InContextOf => {
                has_context.insert(edge.source.as_str());
                contextualised.insert(edge.target.as_str());
            }
        }
    }

    let roots = graph.roots();
    match roots.len() {
        0 => diags.push(Diagnostic::error(
            "GSN012",
            "argument has no root goal (empty graph or every node is supported)",
        )),
        1 => {
            let root = roots[0].as_str();
            let kind = kinds[root];
            let allowed = match mode {
                ValidationMode::Case => kind == NodeKind::Goal,
                ValidationMode::Fragment => kind.is_claim(),
            };
            if !allowed {
                diags.push(
                    Diagnostic::error("GSN013", format!("root '{root}' is a {kind}, not a goal"))
                        .at(node_locus(root)),
                );
            }
            if mode == ValidationMode::Case && !has_context.contains(root) {
                diags.push(
                    Diagnostic::warning(
                        "GSN023",
                        format!("root goal '{root}' has no context, assumption or justification"),
                    )
                    .at(node_locus(root)),
                );
            }
        }
        n => {
            let names: Vec<&str> = roots.iter().map(|r| r.as_str()).collect();
            diags.push(Diagnostic::error(
                "GSN011",
                format!("argument has {n} roots: {}", names.join(", ")),
            ));
        }
    }

    for node in graph.nodes() {
        let id = node.id.as_str();
        match node.kind {
            NodeKind::Goal if !has_support.contains(id) => {
                if node.undeveloped {
                    diags.push(
                        Diagnostic::warning("GSN020", format!("goal '{id}' is undeveloped"))
                            .at(node_locus(id)),
                    );
                } else {
                    diags.push(
                        Diagnostic::error(
                            "GSN010",
                            format!("goal '{id}' has no support and is not marked undeveloped"),
                        )
                        .at(node_locus(id)),
                    );
                }
            }
            NodeKind::Strategy if !has_support.contains(id) => {
                let message = if node.undeveloped {
                    format!("strategy '{id}' is undeveloped")
                } else {
                    format!("strategy '{id}' decomposes into nothing")
                };
                diags.push(Diagnostic::warning("GSN024", message).at(node_locus(id)));
            }
            k if k.is_contextual() && !contextualised.contains(id) => {
                diags.push(
                    Diagnostic::warning(
                        "GSN022",
                        format!("{k} '{id}' is not attached to any claim"),
                    )
                    .at(node_locus(id)),
                );
            }
            _ => {}
        }
        if node.uninstantiated {
            diags.push(
                Diagnostic::warning("GSN021", format!("{} '{id}' is uninstantiated", node.kind))
                    .at(node_locus(id)),
            );
        }
    }
}

/// Edges that close a cycle in a depth-first walk, visiting sources and
/// successors in sorted order so the result is deterministic.
fn back_edges<'a>(support: &BTreeMap<&'a str, Vec<&'a str>>) -> Vec<(&'a str, &'a str)> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    let mut marks: BTreeMap<&str, Mark> = BTreeMap::new();
    let mut found = Vec::new();
    let successors = |n: &str| -> Vec<&'a str> {
        let mut next = support.get(n).cloned().unwrap_or_default();
        next.sort_unstable();
        next.dedup();
        next
    };
    for &start in support.keys() {
        if marks.contains_key(start) {
            continue;
        }
        marks.insert(start, Mark::Active);
        let mut stack: Vec<(&str, Vec<&str>, usize)> = vec![(start, successors(start), 0)];
        while let Some((node, next, idx)) = stack.last_mut() {
            if *idx == next.len() {
                marks.insert(node, Mark::Done);
                stack.pop();
                continue;
            }
            let child = next[*idx];
            *idx += 1;
            let node = *node;
            match marks.get(child) {
                Some(Mark::Active) => found.push((node, child)),
                Some(Mark::Done) => {}
                None => {
                    marks.insert(child, Mark::Active);
                    stack.push((child, successors(child), 0));
                }
            }
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gsn::{id, GsnNode};

    fn codes(diags: &[Diagnostic]) -> Vec<&'static str> {
        diags.iter().map(|d| d.code).collect()
    }

    fn small_case() -> ArgumentGraph {
        ArgumentGraph::from_parts(
            vec![
                GsnNode::new(id("G1"), NodeKind::Goal, "system is safe"),
                GsnNode::new(id("C1"), NodeKind::Context, "operating context"),
                GsnNode::new(id("S1"), NodeKind::Strategy, "argue over hazards"),
                GsnNode::new(id("G2"), NodeKind::Goal, "hazard mitigated"),
                GsnNode::new(id("Sn1"), NodeKind::Solution, "test report"),
            ],
            vec![
                GsnEdge::in_context_of(id("G1"), id("C1")),
                GsnEdge::supported_by(id("G1"), id("S1")),
                GsnEdge::supported_by(id("S1"), id("G2")),
                GsnEdge::supported_by(id("G2"), id("Sn1")),
            ],
        )
    }

    #[test]
    fn well_formed_case_is_clean() {
        assert!(validate_graph(&small_case()).is_empty());
    }

    #[test]
    fn unsupported_goal() {
        let g = small_case().without_subtree("Sn1");
        assert_eq!(codes(&validate_graph(&g)), vec!["GSN010"]);
    }

    #[test]
    fn two_roots() {
        let g = small_case()
            .add_node(GsnNode::new(id("G9"), NodeKind::Goal, "stray").undeveloped())
            .unwrap();
        let diags = validate_graph(&g);
        assert!(codes(&diags).contains(&"GSN011"));
    }

    #[test]
    fn undeveloped_goal_is_a_warning() {
        let mut g = small_case().without_subtree("Sn1");
        g.node_mut("G2").unwrap().undeveloped = true;
        let diags = validate_graph(&g);
        assert_eq!(codes(&diags), vec!["GSN020"]);
        assert!(!diags[0].is_error());
    }

    #[test]
    fn cycle_detected_once() {
        let (nodes, mut edges) = small_case().into_parts();
        edges.push(GsnEdge::supported_by(id("G2"), id("G1")));
        let diags = validate_graph(&ArgumentGraph::from_parts(nodes, edges));
        assert_eq!(diags.iter().filter(|d| d.code == "GSN008").count(), 1);
    }

    #[test]
    fn strategy_root_allowed_only_in_fragments() {
        let g = ArgumentGraph::from_parts(
            vec![
                GsnNode::new(id("S1"), NodeKind::Strategy, "s"),
                GsnNode::new(id("Sn1"), NodeKind::Solution, "e"),
            ],
            vec![GsnEdge::supported_by(id("S1"), id("Sn1"))],
        );
        assert!(validate_fragment(&g).is_empty());
        assert!(codes(&validate_graph(&g)).contains(&"GSN013"));
    }

    #[test]
    fn empty_graph_has_no_root() {
        assert_eq!(
            codes(&validate_graph(&ArgumentGraph::new())),
            vec!["GSN012"]
        );
    }

    #[test]
    fn diagnostics_are_sorted() {
        let (mut nodes, mut edges) = small_case().into_parts();
        nodes.push(GsnNode::new(id("G1"), NodeKind::Goal, " "));
        edges.push(GsnEdge::supported_by(id("Sn1"), id("G2")));
        let diags = validate_graph(&ArgumentGraph::from_parts(nodes, edges));
        let mut sorted = diags.clone();
        sort_diagnostics(&mut sorted);
        assert_eq!(diags, sorted);
        assert!(codes(&diags).contains(&"GSN001"));
        assert!(codes(&diags).contains(&"GSN003"));
        assert!(codes(&diags).contains(&"GSN007"));
    }
}
