use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diag::{has_errors, Diagnostic, Locus};
use crate::gsn::{
    structural_diagnostics, validate_graph, ArgumentGraph, EdgeKind, GsnEdge, GsnNode, NodeId,
    NodeKind,
};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    format_version: String,
    system_name: String,
    nodes: Vec<NodeRecord>,
    edges: Vec<EdgeRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeRecord {
    id: NodeId,
    kind: NodeKind,
    statement: String,
    undeveloped: bool,
    uninstantiated: bool,
    tags: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    source: NodeId,
    target: NodeId,
    kind: EdgeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("graph does not validate: {}", .0.iter().filter(|d| d.is_error()).map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidGraph(Vec<Diagnostic>),
}

/// A loaded exchange document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exchange {
    pub system_name: String,
    pub graph: ArgumentGraph,
}

/// Canonical JSON: fixed key order, nodes by id, edges by
/// (source, target, kind), two-space indent, trailing newline.
pub fn emit_exchange(case: &ArgumentGraph, system_name: &str) -> Result<String, EmitError> {
    let diags = validate_graph(case);
    if has_errors(&diags) {
        return Err(EmitError::InvalidGraph(diags));
    }
    Ok(render(case, system_name))
}

fn render(case: &ArgumentGraph, system_name: &str) -> String {
    let (nodes, edges) = case.canonical().into_parts();
    let doc = Document {
        format_version: FORMAT_VERSION.into(),
        system_name: system_name.into(),
        nodes: nodes
            .into_iter()
            .map(|n| NodeRecord {
                id: n.id,
                kind: n.kind,
                statement: n.statement,
                undeveloped: n.undeveloped,
                uninstantiated: n.uninstantiated,
                tags: n.tags,
            })
            .collect(),
        edges: edges
            .into_iter()
            .map(|e| EdgeRecord {
                source: e.source,
                target: e.target,
                kind: e.kind,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
    text.push('\n');
    text
}

fn malformed(message: impl Into<String>) -> Vec<Diagnostic> {
    vec![Diagnostic::error("EXC001", message).at(Locus::File("exchange".into()))]
}

/// Parses an exchange document. Structural damage (dangling edges,
/// duplicate ids, cycles, kind mismatches) is rejected; argument-level
/// findings such as undeveloped goals are left to the validator.
pub fn load_exchange_document(text: &str) -> Result<Exchange, Vec<Diagnostic>> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| malformed(format!("not a JSON document: {e}")))?;
    match value.get("format_version") {
        Some(serde_json::Value::String(v)) if v == FORMAT_VERSION => {}
        Some(serde_json::Value::String(v)) => {
            return Err(vec![Diagnostic::error(
                "EXC002",
                format!("unsupported format_version '{v}', expected '{FORMAT_VERSION}'"),
            )])
        }
        Some(_) => return Err(malformed("format_version must be a string")),
        None => return Err(malformed("missing field `format_version`")),
    }
    let doc: Document = serde_json::from_value(value).map_err(|e| malformed(e.to_string()))?;
    let graph = ArgumentGraph::from_parts(
        doc.nodes
            .into_iter()
            .map(|n| GsnNode {
                id: n.id,
                kind: n.kind,
                statement: n.statement,
                undeveloped: n.undeveloped,
                uninstantiated: n.uninstantiated,
                tags: n.tags,
            })
            .collect(),
        doc.edges
            .into_iter()
            .map(|e| GsnEdge::new(e.source, e.target, e.kind))
            .collect(),
    );
    let broken: Vec<Diagnostic> = structural_diagnostics(&graph)
        .into_iter()
        .filter(Diagnostic::is_error)
        .collect();
    if !broken.is_empty() {
        let mut diags = vec![Diagnostic::error(
            "EXC003",
            format!(
                "document encodes an ill-formed graph ({} errors)",
                broken.len()
            ),
        )];
        diags.extend(broken);
        return Err(diags);
    }
    Ok(Exchange {
        system_name: doc.system_name,
        graph,
    })
}

pub fn load_exchange(text: &str) -> Result<ArgumentGraph, Vec<Diagnostic>> {
    load_exchange_document(text).map(|doc| doc.graph)
}
