use std::fmt::Write;

use crate::gsn::{ArgumentGraph, EdgeKind, GsnNode, NodeKind};

/// Maximum label line width, in characters.
pub const LABEL_WIDTH: usize = 28;

pub const UNDEVELOPED_MARK: &str = "\u{25C7}";
pub const UNINSTANTIATED_MARK: &str = "\u{25B3}";

/// Greedy word wrap; words longer than `width` are split.
pub fn wrap(text: &str, width: usize) -> Vec<String> {
    let mut lines = Vec::new();
    let mut line = String::new();
    let mut len = 0;
    for word in text.split_whitespace() {
        let mut chars: Vec<char> = word.chars().collect();
        while chars.len() > width {
            if len > 0 {
                lines.push(std::mem::take(&mut line));
                len = 0;
            }
            lines.push(chars.drain(..width).collect());
        }
        if chars.is_empty() {
            continue;
        }
        let word: String = chars.iter().collect();
        if len > 0 && len + 1 + chars.len() > width {
            lines.push(std::mem::take(&mut line));
            len = 0;
        }
        if len > 0 {
            line.push(' ');
            len += 1;
        }
        line.push_str(&word);
        len += chars.len();
    }
    if len > 0 || lines.is_empty() {
        lines.push(line);
    }
    lines
}

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

fn quote(text: &str) -> String {
    format!("\"{}\"", escape(text))
}

fn attributes(node: &GsnNode) -> String {
    let (shape, style) = match node.kind {
        NodeKind::Goal => ("box", None),
        NodeKind::Strategy => ("parallelogram", None),
        NodeKind::Solution => ("circle", None),
        NodeKind::Context => ("box", Some("rounded")),
        NodeKind::Assumption | NodeKind::Justification => ("ellipse", None),
    };
    let mut lines = vec![node.id.to_string()];
    lines.extend(wrap(&node.statement, LABEL_WIDTH));
    let mut marks = Vec::new();
    match node.kind {
        NodeKind::Assumption => marks.push("A"),
        NodeKind::Justification => marks.push("J"),
        _ => {}
    }
    if node.undeveloped {
        marks.push(UNDEVELOPED_MARK);
    }
    if node.uninstantiated {
        marks.push(UNINSTANTIATED_MARK);
    }
    if !marks.is_empty() {
        lines.push(marks.join(" "));
    }
    let label = lines
        .iter()
        .map(|l| escape(l))
        .collect::<Vec<_>>()
        .join("\\n");
    let mut attrs = format!("shape={shape}");
    if let Some(style) = style {
        write!(attrs, ", style={style}").unwrap();
    }
    write!(attrs, ", label=\"{label}\"").unwrap();
    attrs
}

/// GraphViz rendering with GSN shapes. Nodes and edges are emitted in
/// canonical order, so equal graphs give identical text.
pub fn emit_dot(case: &ArgumentGraph) -> String {
    let case = case.canonical();
    let mut out = String::new();
    out.push_str("digraph gsn {\n");
    out.push_str("  rankdir=TB;\n");
    out.push_str("  node [fontname=\"Helvetica\", fontsize=10];\n");
    for node in case.nodes() {
        writeln!(out, "  {} [{}];", quote(node.id.as_str()), attributes(node)).unwrap();
    }
    for edge in case.edges() {
        let head = match edge.kind {
            EdgeKind::SupportedBy => "normal",
            EdgeKind::InContextOf => "empty",
        };
        writeln!(
            out,
            "  {} -> {} [arrowhead={head}];",
            quote(edge.source.as_str()),
            quote(edge.target.as_str())
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
