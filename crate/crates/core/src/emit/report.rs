use std::fmt::Write;

use crate::builder::{Branch, CoverageReport, HARA_REF_TAG};
use crate::gsn::{validate_graph, ArgumentGraph, NodeKind};
use crate::hara::{compare_ids, HaraModel};

fn cell(text: &str) -> String {
    text.replace('|', "\\|")
}

/// Markdown build report: verdict, per-branch scenario coverage, safety
/// goal traceability and validator diagnostics.
pub fn emit_report(case: &ArgumentGraph, hara: &HaraModel, coverage: &CoverageReport) -> String {
    let mut out = String::new();
    let title = if hara.system_name.is_empty() {
        "Safety case report".to_string()
    } else {
        format!("Safety case report: {}", hara.system_name)
    };
    writeln!(out, "# {}\n", cell(&title)).unwrap();

    let count = |kind: NodeKind| case.nodes().iter().filter(|n| n.kind == kind).count();
    let covered = coverage
        .scenario_coverage
        .iter()
        .filter(|r| r.covered)
        .count();
    let list = |items: &[String]| {
        if items.is_empty() {
            "none".to_string()
        } else {
            items.join(", ")
        }
    };
    out.push_str("## Summary\n\n");
    writeln!(out, "Verdict: **{}**\n", coverage.verdict).unwrap();
    let kinds: Vec<String> = NodeKind::ALL
        .iter()
        .map(|k| format!("{k} {}", count(*k)))
        .collect();
    writeln!(
        out,
        "- Nodes: {} ({})",
        case.nodes().len(),
        kinds.join(", ")
    )
    .unwrap();
    writeln!(out, "- Edges: {}", case.edges().len()).unwrap();
    writeln!(
        out,
        "- Scenario rows covered: {covered} of {}",
        coverage.scenario_coverage.len()
    )
    .unwrap();
    writeln!(
        out,
        "- Unsupported safety goals: {}",
        list(&coverage.unsupported_safety_goals)
    )
    .unwrap();
    writeln!(
        out,
        "- Unbound hot spots: {}\n",
        list(&coverage.unbound_hotspots)
    )
    .unwrap();

    out.push_str("## Scenario coverage\n\n");
    out.push_str("| Scenario | Branch | Status | Description |\n");
    out.push_str("|---|---|---|---|\n");
    for branch in Branch::ALL {
        for row in coverage.rows(branch) {
            let description = hara
                .scenario(&row.scenario_id)
                .map(|s| s.description.as_str())
                .unwrap_or_default();
            writeln!(
                out,
                "| {} | {} | {} | {} |",
                cell(&row.scenario_id),
                branch,
                if row.covered { "covered" } else { "MISSING" },
                cell(description)
            )
            .unwrap();
        }
    }
    out.push('\n');

    out.push_str("## Safety goal traceability\n\n");
    out.push_str("| Safety goal | Priority | Node | Statement |\n");
    out.push_str("|---|---|---|---|\n");
    let mut goals: Vec<_> = hara.safety_goals.iter().collect();
    goals.sort_by(|a, b| compare_ids(&a.id, &b.id));
    for goal in goals {
        let mut nodes: Vec<&str> = case
            .nodes()
            .iter()
            .filter(|n| {
                n.kind == NodeKind::Goal && n.tag_value(HARA_REF_TAG) == Some(goal.id.as_str())
            })
            .map(|n| n.id.as_str())
            .collect();
        nodes.sort();
        let node = if !nodes.is_empty() {
            nodes.join(", ")
        } else if coverage.unsupported_safety_goals.contains(&goal.id) {
            "MISSING".to_string()
        } else {
            "not required".to_string()
        };
        writeln!(
            out,
            "| {} | {} | {} | {} |",
            cell(&goal.id),
            goal.priority,
            node,
            cell(&goal.statement)
        )
        .unwrap();
    }
    out.push('\n');

    out.push_str("## Diagnostics\n\n");
    let diags = validate_graph(case);
    if diags.is_empty() {
        out.push_str("None.\n");
    } else {
        for d in diags {
            writeln!(out, "- {}", d.to_string().replace('\n', " ")).unwrap();
        }
    }
    out
}
