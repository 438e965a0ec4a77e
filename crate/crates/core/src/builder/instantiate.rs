use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::diag::{has_errors, Diagnostic};
use crate::gsn::{
    validate_fragment, ArgumentGraph, EdgeKind, GraphError, GsnEdge, GsnNode, NodeId,
};
use crate::pattern::template::{parse_template, Segment};
use crate::pattern::{multiplicity_regions, validate_pattern, Expansion, Pattern, Region};

/// One element of a collection binding, e.g. a scenario row. `{name}`
/// renders the `text` field; `{name.field}` renders any other field.
pub type Record = BTreeMap<String, String>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BindingSet {
    pub scalars: BTreeMap<String, String>,
    pub collections: BTreeMap<String, Vec<Record>>,
    /// Choice node id to the ids of the alternatives to keep.
    pub choices: BTreeMap<String, Vec<String>>,
}

impl BindingSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn scalar(mut self, name: impl Into<String>, value: impl Into<String>) -> Self {
        self.scalars.insert(name.into(), value.into());
        self
    }

    pub fn collection(mut self, name: impl Into<String>, records: Vec<Record>) -> Self {
        self.collections.insert(name.into(), records);
        self
    }

    pub fn choose(mut self, node: impl Into<String>, keep: Vec<String>) -> Self {
        self.choices.insert(node.into(), keep);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstantiateError {
    #[error("pattern has errors: {}", summarize(.0))]
    InvalidPattern(Vec<Diagnostic>),
    #[error("required hot spot '{0}' is not bound")]
    MissingBinding(String),
    #[error("collection hot spot '{0}' is bound to an empty collection")]
    EmptyCollection(String),
    #[error(
        "placeholder '{placeholder}' in node '{node}' names a field the binding does not have"
    )]
    PlaceholderFieldUnknown { node: String, placeholder: String },
    #[error("choice node '{0}' needs an explicit selection")]
    ChoiceUnresolved(String),
    #[error("invalid selection for choice node '{node}': {reason}")]
    InvalidChoice { node: String, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("instantiated fragment is ill-formed: {}", summarize(.0))]
    InvalidResult(Vec<Diagnostic>),
}

fn summarize(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .filter(|d| d.is_error())
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

struct Element<'a> {
    param: &'a str,
    record: &'a Record,
}

/// Substitutes `text`; returns the rendered text and whether every
/// placeholder was bound.
fn render(
    text: &str,
    node: &str,
    bindings: &BindingSet,
    element: Option<&Element>,
) -> Result<(String, bool), InstantiateError> {
    let segments = parse_template(text).map_err(|e| {
        InstantiateError::InvalidPattern(vec![Diagnostic::error("PAT024", e.message)])
    })?;
    let mut out = String::new();
    let mut complete = true;
    for segment in segments {
        let p = match segment {
            Segment::Literal(s) => {
                out.push_str(&s);
                continue;
            }
            Segment::Placeholder(p) => p,
        };
        let unknown = || InstantiateError::PlaceholderFieldUnknown {
            node: node.to_string(),
            placeholder: p.to_string(),
        };
        match element {
            Some(el) if el.param == p.name => {
                let field = p.field.as_deref().unwrap_or("text");
                out.push_str(el.record.get(field).ok_or_else(unknown)?);
            }
            _ => match bindings.scalars.get(&p.name) {
                Some(value) => match p.field.as_deref() {
                    None | Some("text") => out.push_str(value),
                    Some(_) => return Err(unknown()),
                },
                None => {
                    out.push_str(&p.to_string());
                    complete = false;
                }
            },
        }
    }
    Ok((out, complete))
}

/// Which alternatives survive each choice node.
fn removed_choice_edges(
    pattern: &Pattern,
    bindings: &BindingSet,
) -> Result<HashSet<(NodeId, NodeId)>, InstantiateError> {
    let mut removed = HashSet::new();
    for node in bindings.choices.keys() {
        if !matches!(
            pattern.expansions.get(node.as_str()),
            Some(Expansion::Choice { .. })
        ) {
            return Err(InstantiateError::InvalidChoice {
                node: node.clone(),
                reason: "not a choice node".into(),
            });
        }
    }
    for (id, expansion) in &pattern.expansions {
        let Expansion::Choice { min, max } = expansion else {
            continue;
        };
        let alternatives: Vec<&NodeId> = pattern
            .template
            .children(id.as_str(), EdgeKind::SupportedBy)
            .collect();
        let selected: BTreeSet<&str> = match bindings.choices.get(id.as_str()) {
            Some(keep) => {
                let set: BTreeSet<&str> = keep.iter().map(String::as_str).collect();
                if set.len() != keep.len() {
                    return Err(InstantiateError::InvalidChoice {
                        node: id.to_string(),
                        reason: "an alternative is selected twice".into(),
                    });
                }
                if let Some(bad) = set
                    .iter()
                    .find(|s| !alternatives.iter().any(|a| a.as_str() == **s))
                {
                    return Err(InstantiateError::InvalidChoice {
                        node: id.to_string(),
                        reason: format!("'{bad}' is not an alternative"),
                    });
                }
                if set.len() < *min as usize || set.len() > *max as usize {
                    return Err(InstantiateError::InvalidChoice {
                        node: id.to_string(),
                        reason: format!("{} selected, expected {min}..{max}", set.len()),
                    });
                }
                set
            }
            None if alternatives.len() <= *max as usize => {
                alternatives.iter().map(|a| a.as_str()).collect()
            }
            None => return Err(InstantiateError::ChoiceUnresolved(id.to_string())),
        };
        for alt in alternatives {
            if !selected.contains(alt.as_str()) {
                removed.insert((id.clone(), alt.clone()));
            }
        }
    }
    Ok(removed)
}

/// Instantiates `pattern` with `bindings`.
///
/// Placeholders are replaced by their bindings; a multiplicity node and the
/// nodes below it are copied once per collection element with ids suffixed
/// `.1`, `.2`, ...; unselected choice alternatives are dropped. Every id
/// gets `id_prefix` prepended. Nodes keep `uninstantiated` only when an
/// optional hot spot was left unbound.
pub fn instantiate_pattern(
    pattern: &Pattern,
    bindings: &BindingSet,
    id_prefix: &str,
) -> Result<ArgumentGraph, InstantiateError> {
    let diags = validate_pattern(pattern);
    if has_errors(&diags) {
        return Err(InstantiateError::InvalidPattern(diags));
    }

    let regions = multiplicity_regions(pattern);
    for hs in &pattern.params {
        if hs.collection {
            match bindings.collections.get(&hs.name) {
                None if hs.required => {
                    return Err(InstantiateError::MissingBinding(hs.name.clone()))
                }
                Some(items) if items.is_empty() => {
                    return Err(InstantiateError::EmptyCollection(hs.name.clone()))
                }
                _ => {}
            }
        } else if hs.required && !bindings.scalars.contains_key(&hs.name) {
            return Err(InstantiateError::MissingBinding(hs.name.clone()));
        }
    }

    let removed = removed_choice_edges(pattern, bindings)?;
    let kept_edges: Vec<&GsnEdge> = pattern
        .template
        .edges()
        .iter()
        .filter(|e| !removed.contains(&(e.source.clone(), e.target.clone())))
        .collect();
    let kept_nodes: HashSet<NodeId> = {
        let pruned = ArgumentGraph::from_parts(
            pattern.template.nodes().to_vec(),
            kept_edges.iter().map(|e| (*e).clone()).collect(),
        );
        let roots = pattern.template.roots();
        roots
            .iter()
            .flat_map(|r| pruned.descendants(r.as_str()))
            .collect()
    };

    // Template node id -> the region that replicates it, when its collection is bound.
    let mut expanded: HashMap<&NodeId, (&Region, &Vec<Record>)> = HashMap::new();
    for region in regions.values() {
        if let Some(items) = bindings.collections.get(&region.over) {
            for member in &region.members {
                expanded.insert(member, (region, items));
            }
        }
    }

    let copies = |id: &NodeId| -> Result<Vec<(NodeId, Option<Element>)>, InstantiateError> {
        match expanded.get(id) {
            Some((region, items)) => items
                .iter()
                .enumerate()
                .map(|(i, record)| {
                    let new_id = NodeId::new(format!("{id_prefix}{id}.{}", i + 1))?;
                    Ok((
                        new_id,
                        Some(Element {
                            param: region.over.as_str(),
                            record,
                        }),
                    ))
                })
                .collect(),
            None => Ok(vec![(id.prefixed(id_prefix)?, None)]),
        }
    };

    let mut nodes = Vec::new();
    for template in pattern.template.nodes() {
        if !kept_nodes.contains(&template.id) {
            continue;
        }
        for (new_id, element) in copies(&template.id)? {
            let (statement, mut complete) = render(
                &template.statement,
                template.id.as_str(),
                bindings,
                element.as_ref(),
            )?;
            let mut tags = BTreeMap::new();
            for (key, value) in &template.tags {
                let (value, ok) = render(value, template.id.as_str(), bindings, element.as_ref())?;
                complete &= ok;
                tags.insert(key.clone(), value);
            }
            nodes.push(GsnNode {
                id: new_id,
                kind: template.kind,
                statement,
                undeveloped: template.undeveloped,
                uninstantiated: !complete,
                tags,
            });
        }
    }

    let mut edges = Vec::new();
    for edge in kept_edges {
        if !kept_nodes.contains(&edge.source) || !kept_nodes.contains(&edge.target) {
            continue;
        }
        let sources = copies(&edge.source)?;
        let targets = copies(&edge.target)?;
        if sources.len() == targets.len() {
            for ((s, _), (t, _)) in sources.into_iter().zip(targets) {
                edges.push(GsnEdge::new(s, t, edge.kind));
            }
        } else {
            for (s, _) in &sources {
                for (t, _) in &targets {
                    edges.push(GsnEdge::new(s.clone(), t.clone(), edge.kind));
                }
            }
        }
    }

    let graph = ArgumentGraph::from_parts(nodes, edges);
    let diags = validate_fragment(&graph);
    if has_errors(&diags) {
        return Err(InstantiateError::InvalidResult(diags));
    }
    Ok(graph)
}
