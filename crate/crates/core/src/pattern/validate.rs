use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::template::{parse_template, placeholders};
use super::{Expansion, Objective, Pattern, Sort};
use crate::diag::{sort_diagnostics, Diagnostic, Locus};
use crate::gsn::{validate_fragment, EdgeKind, NodeId, NodeKind};

/// A multiplicity node, the collection it ranges over, and every template
/// node it replicates (itself included).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub over: String,
    pub members: BTreeSet<NodeId>,
}

pub fn multiplicity_regions(pattern: &Pattern) -> BTreeMap<NodeId, Region> {
    pattern
        .expansions
        .iter()
        .filter_map(|(id, e)| match e {
            Expansion::Multiplicity { over } => Some((
                id.clone(),
                Region {
                    over: over.clone(),
                    members: pattern
                        .template
                        .descendants(id.as_str())
                        .into_iter()
                        .collect(),
                },
            )),
            Expansion::Choice { .. } => None,
        })
        .collect()
}

fn at(id: &NodeId) -> Locus {
    Locus::Node(id.to_string())
}

/// Lints a pattern before instantiation.
///
/// Runs the fragment graph rules (without the uninstantiated-node warning,
/// which every template node with a placeholder would trigger) plus the
/// hot-spot, multiplicity and choice rules.
pub fn validate_pattern(pattern: &Pattern) -> Vec<Diagnostic> {
    let mut diags: Vec<Diagnostic> = validate_fragment(&pattern.template)
        .into_iter()
        .filter(|d| d.code != "GSN021")
        .collect();

    let mut names = HashSet::new();
    for p in &pattern.params {
        if !names.insert(p.name.as_str()) {
            diags.push(
                Diagnostic::error("PAT029", format!("hot spot '{}' is declared twice", p.name))
                    .at(Locus::Item(p.name.clone())),
            );
        }
    }

    if matches!(
        pattern.objective,
        Objective::RejectDangerous | Objective::AcceptSafe
    ) && !pattern
        .params
        .iter()
        .any(|p| p.sort == Sort::Scenario && p.collection)
    {
        diags.push(Diagnostic::error(
            "PAT025",
            format!(
                "{} pattern '{}' must declare a Scenario collection hot spot",
                pattern.objective.as_str(),
                pattern.name
            ),
        ));
    }

    let regions = multiplicity_regions(pattern);
    let mut used: HashSet<String> = HashSet::new();

    for (id, expansion) in &pattern.expansions {
        let Some(node) = pattern.template.node(id.as_str()) else {
            diags.push(
                Diagnostic::error("PAT021", format!("expansion on unknown node '{id}'")).at(at(id)),
            );
            continue;
        };
        match expansion {
            Expansion::Multiplicity { over } => {
                used.insert(over.clone());
                if !matches!(node.kind, NodeKind::Goal | NodeKind::Strategy) {
                    diags.push(
                        Diagnostic::error(
                            "PAT021",
                            format!("multiplicity is only allowed on goals and strategies, '{id}' is a {}", node.kind),
                        )
                        .at(at(id)),
                    );
                }
                match pattern.param(over) {
                    Some(p) if p.collection => {}
                    Some(_) => diags.push(
                        Diagnostic::error(
                            "PAT022",
                            format!("multiplicity of '{id}' ranges over scalar hot spot '{over}'"),
                        )
                        .at(at(id)),
                    ),
                    None => diags.push(
                        Diagnostic::error(
                            "PAT022",
                            format!(
                                "multiplicity of '{id}' ranges over undeclared hot spot '{over}'"
                            ),
                        )
                        .at(at(id)),
                    ),
                }
            }
            Expansion::Choice { min, max } => {
                let alternatives = pattern
                    .template
                    .children(id.as_str(), EdgeKind::SupportedBy)
                    .count();
                if !(1 <= *min && min <= max && (*max as usize) <= alternatives) {
                    diags.push(
                        Diagnostic::error(
                            "PAT023",
                            format!(
                                "choice {min}..{max} on '{id}' needs 1 <= min <= max <= {alternatives} alternatives"
                            ),
                        )
                        .at(at(id)),
                    );
                }
            }
        }
    }

    for (head, region) in &regions {
        for (other, _) in regions.iter().filter(|(o, _)| *o != head) {
            if region.members.contains(other) {
                diags.push(
                    Diagnostic::error(
                        "PAT026",
                        format!("multiplicity node '{other}' is nested inside the multiplicity of '{head}'"),
                    )
                    .at(at(other)),
                );
            }
        }
        for edge in pattern.template.edges() {
            if region.members.contains(&edge.target)
                && &edge.target != head
                && !region.members.contains(&edge.source)
            {
                diags.push(
                    Diagnostic::error(
                        "PAT027",
                        format!(
                            "'{}' is replicated by the multiplicity of '{head}' but is also reached from '{}'",
                            edge.target, edge.source
                        ),
                    )
                    .at(at(&edge.target)),
                );
            }
        }
    }

    for node in pattern.template.nodes() {
        let texts =
            std::iter::once(node.statement.as_str()).chain(node.tags.values().map(String::as_str));
        for text in texts {
            let segments = match parse_template(text) {
                Ok(s) => s,
                Err(e) => {
                    diags.push(
                        Diagnostic::error("PAT024", format!("'{}': {}", node.id, e.message))
                            .at(at(&node.id)),
                    );
                    continue;
                }
            };
            for ph in placeholders(&segments) {
                used.insert(ph.name.clone());
                let Some(param) = pattern.param(&ph.name) else {
                    diags.push(
                        Diagnostic::error(
                            "PAT024",
                            format!("undeclared placeholder '{}'", ph.name),
                        )
                        .at(at(&node.id)),
                    );
                    continue;
                };
                if param.collection
                    && !regions
                        .values()
                        .any(|r| r.over == param.name && r.members.contains(&node.id))
                {
                    diags.push(
                        Diagnostic::error(
                            "PAT028",
                            format!(
                                "collection hot spot '{}' is used outside a multiplicity over it",
                                param.name
                            ),
                        )
                        .at(at(&node.id)),
                    );
                }
            }
        }
    }

    for p in &pattern.params {
        if !used.contains(&p.name) {
            diags.push(
                Diagnostic::warning("PAT020", format!("hot spot '{}' is never used", p.name))
                    .at(Locus::Item(p.name.clone())),
            );
        }
    }

    sort_diagnostics(&mut diags);
    diags.dedup();
    diags
}
