use std::fmt::Write;

use super::parser::arrow;
use super::{Expansion, Pattern};

fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        if matches!(c, '"' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Prints `pattern` in the canonical layout: header, objective, hot spots,
/// nodes and edges, with a blank line between sections. Declaration order
/// is preserved.
pub fn print_pattern(pattern: &Pattern) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "pattern {} v{}", pattern.name, pattern.version);
    let _ = writeln!(out, "objective {}", pattern.objective.as_str());

    if !pattern.params.is_empty() {
        out.push('\n');
        for p in &pattern.params {
            let _ = writeln!(
                out,
                "param {}: {}{}{}",
                p.name,
                p.sort.as_str(),
                if p.collection { "*" } else { "" },
                if p.required { "" } else { "?" }
            );
        }
    }

    if !pattern.template.nodes().is_empty() {
        out.push('\n');
        for node in pattern.template.nodes() {
            let _ = write!(
                out,
                "node {}: {} {}",
                node.id,
                node.kind,
                quote(&node.statement)
            );
            if node.undeveloped {
                out.push_str(" undeveloped");
            }
            match pattern.expansions.get(&node.id) {
                Some(Expansion::Multiplicity { over }) => {
                    let _ = write!(out, " multiplicity over {over}");
                }
                Some(Expansion::Choice { min, max }) => {
                    let _ = write!(out, " choice {min}..{max}");
                }
                None => {}
            }
            for (key, value) in &node.tags {
                let _ = write!(out, " tag {key}={}", quote(value));
            }
            out.push('\n');
        }
    }

    if !pattern.template.edges().is_empty() {
        out.push('\n');
        for edge in pattern.template.edges() {
            let _ = writeln!(
                out,
                "edge {} {} {}",
                edge.source,
                arrow(edge.kind),
                edge.target
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::parse_pattern;

    #[test]
    fn reprints_quotes_and_braces() {
        let src =
            "pattern P v1\nobjective generic\n\nnode G1: Goal \"say \\\"hi\\\" {{x}} \\\\\"\n";
        let p = parse_pattern(src).unwrap();
        assert_eq!(p.template.nodes()[0].statement, "say \"hi\" {{x}} \\");
        assert_eq!(print_pattern(&p), src);
    }
}
