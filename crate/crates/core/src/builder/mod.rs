//! Safety-case construction: top-level argument from the HARA, pattern
//! instantiation under the instruction goals, and coverage checking.

mod config;
mod coverage;
mod instantiate;

use thiserror::Error;

pub use config::{
    BuildConfig, ConfigError, ConfigFile, PatternNames, DEFAULT_ACCEPT_PATTERN,
    DEFAULT_REJECT_PATTERN,
};
pub use coverage::{
    accept_domain, coverage_check, reject_domain, Branch, CoverageReport, ScenarioCoverage, Verdict,
};
pub use instantiate::{instantiate_pattern, BindingSet, InstantiateError, Record};

use crate::diag::{has_errors, Diagnostic};
use crate::gsn::{validate_graph, ArgumentGraph, GraphError, GsnEdge, GsnNode, NodeId, NodeKind};
use crate::hara::{compare_ids, top_priority_hazards, validate_hara, HaraModel, SystemFunction};
use crate::pattern::PatternLibrary;

/// Tag holding the HARA id (SF, OS, HE, SE or SG) a node stands for.
pub const HARA_REF_TAG: &str = "hara-ref";
/// Tag marking the reject / accept instruction goals.
pub const BRANCH_TAG: &str = "branch";
/// Tag holding a display alias for a generated id.
pub const ALIAS_TAG: &str = "alias";

pub const EVIDENCE_TEXT: &str = "Closed-loop simulation test results";
pub const OUTCOME_TEXT: &str = "the expected outcome recorded for each Safe Event";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("HARA has errors: {}", summarize(.0))]
    InvalidHara(Vec<Diagnostic>),
    #[error("cannot determine the reject-instructions function: {0}")]
    RejectFunctionUnresolved(String),
    #[error("pattern '{0}' not found in the library")]
    PatternNotFound(String),
    #[error("instantiating {pattern}: {source}")]
    Instantiate {
        pattern: String,
        #[source]
        source: InstantiateError,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("alias given for unknown node '{0}'")]
    UnknownAliasTarget(String),
    #[error("assembled case is ill-formed: {}", summarize(.0))]
    InvalidCase(Vec<Diagnostic>),
}

fn summarize(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .filter(|d| d.is_error())
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

fn reject_function<'a>(
    cfg: &BuildConfig,
    hara: &'a HaraModel,
) -> Result<&'a SystemFunction, BuildError> {
    if let Some(id) = &cfg.reject_function {
        return hara.functions.iter().find(|f| &f.id == id).ok_or_else(|| {
            BuildError::RejectFunctionUnresolved(format!("no system function '{id}'"))
        });
    }
    let candidates: Vec<&SystemFunction> = hara
        .functions
        .iter()
        .filter(|f| f.description.to_lowercase().contains("reject"))
        .collect();
    match candidates.as_slice() {
        [only] => Ok(only),
        [] => Err(BuildError::RejectFunctionUnresolved(
            "no system function mentions rejecting instructions; set reject_function".into(),
        )),
        _ => Err(BuildError::RejectFunctionUnresolved(
            "several system functions mention rejecting instructions; set reject_function".into(),
        )),
    }
}

/// Turns a function description into a goal about the system.
fn function_goal(system: &str, description: &str) -> String {
    if description.starts_with(system) {
        return description.to_string();
    }
    match description.strip_prefix("Able") {
        Some(rest) => format!("{system} is able{rest}"),
        None => format!("{system}: {description}"),
    }
}

fn nid(s: String) -> Result<NodeId, BuildError> {
    Ok(NodeId::new(s)?)
}

fn apply_aliases(
    case: &mut ArgumentGraph,
    cfg: &BuildConfig,
    strict: bool,
) -> Result<(), BuildError> {
    for (target, alias) in &cfg.aliases {
        match case.node_mut(target) {
            Some(node) => {
                node.tags.insert(ALIAS_TAG.into(), alias.clone());
            }
            None if strict => return Err(BuildError::UnknownAliasTarget(target.clone())),
            None => {}
        }
    }
    Ok(())
}

/// Ids of the reject and accept goals in a top-level graph.
pub fn branch_goals(case: &ArgumentGraph) -> (Option<&NodeId>, Option<&NodeId>) {
    let find = |branch: Branch| {
        case.nodes()
            .iter()
            .find(|n| n.tag_value(BRANCH_TAG) == Some(branch.as_str()))
            .map(|n| &n.id)
    };
    (find(Branch::Reject), find(Branch::Accept))
}

/// Root goal, contexts and assumptions, a strategy over the system
/// functions, one undeveloped goal per function, and the accept-instructions
/// goal next to the reject-instructions goal.
///
/// Ids: `G.1` root, `C.<n>` contexts, `A.<n>` assumptions, `S.1` strategy,
/// then `G.2`.. for the function goals in id order.
pub fn build_top_level(cfg: &BuildConfig, hara: &HaraModel) -> Result<ArgumentGraph, BuildError> {
    let diags = validate_hara(hara, cfg.priority_threshold);
    if has_errors(&diags) {
        return Err(BuildError::InvalidHara(diags));
    }
    let reject = reject_function(cfg, hara)?;
    let system = &cfg.system_name;

    let mut g = ArgumentGraph::new();
    let root = nid("G.1".into())?;
    g.insert_node(GsnNode::new(
        root.clone(),
        NodeKind::Goal,
        format!("{system} is sufficiently safe to use"),
    ))?;
    for (i, text) in cfg.contexts.iter().enumerate() {
        let id = nid(format!("C.{}", i + 1))?;
        g.insert_node(GsnNode::new(id.clone(), NodeKind::Context, text.clone()))?;
        g.insert_edge(GsnEdge::in_context_of(root.clone(), id))?;
    }
    for (i, text) in cfg.assumptions.iter().enumerate() {
        let id = nid(format!("A.{}", i + 1))?;
        g.insert_node(GsnNode::new(id.clone(), NodeKind::Assumption, text.clone()))?;
        g.insert_edge(GsnEdge::in_context_of(root.clone(), id))?;
    }
    let strategy = nid("S.1".into())?;
    g.insert_node(GsnNode::new(
        strategy.clone(),
        NodeKind::Strategy,
        "Argument over system functions",
    ))?;
    g.insert_edge(GsnEdge::supported_by(root, strategy.clone()))?;

    let mut functions: Vec<&SystemFunction> = hara.functions.iter().collect();
    functions.sort_by(|a, b| compare_ids(&a.id, &b.id));
    let mut next = 2;
    let add_goal = |g: &mut ArgumentGraph, node: GsnNode| -> Result<(), BuildError> {
        let id = node.id.clone();
        g.insert_node(node)?;
        g.insert_edge(GsnEdge::supported_by(strategy.clone(), id))?;
        Ok(())
    };
    for f in functions {
        let mut goal = GsnNode::new(
            nid(format!("G.{next}"))?,
            NodeKind::Goal,
            function_goal(system, &f.description),
        )
        .undeveloped()
        .tag(HARA_REF_TAG, f.id.clone());
        next += 1;
        if f.id == reject.id {
            goal = goal.tag(BRANCH_TAG, Branch::Reject.as_str());
            add_goal(&mut g, goal)?;
            let accept = GsnNode::new(
                nid(format!("G.{next}"))?,
                NodeKind::Goal,
                format!("{system} is able to accept safe instructions"),
            )
            .undeveloped()
            .tag(BRANCH_TAG, Branch::Accept.as_str());
            next += 1;
            add_goal(&mut g, accept)?;
        } else {
            add_goal(&mut g, goal)?;
        }
    }
    apply_aliases(&mut g, cfg, false)?;
    Ok(g)
}

fn record(pairs: [(&str, &str); 6]) -> Record {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// One record per scenario of a top-priority hazard, in scenario id order.
/// A scenario with several such hazards is bound to the worst one; the rest
/// are added by `argue_remaining_hazards`.
pub fn reject_bindings(cfg: &BuildConfig, hara: &HaraModel) -> BindingSet {
    let hazards = top_priority_hazards(hara, cfg.priority_threshold);
    let records = reject_domain(hara, cfg)
        .iter()
        .filter_map(|scenario_id| {
            let scenario = hara.scenario(scenario_id)?;
            let he = hazards.iter().find(|e| &e.scenario_id == scenario_id)?;
            let goal_id = he.safety_goal_id.as_deref().unwrap_or_default();
            let goal = hara
                .safety_goal(goal_id)
                .map(|g| g.statement.as_str())
                .unwrap_or_default();
            let mut r = record([
                ("id", scenario_id),
                ("description", &scenario.description),
                ("text", &scenario.description),
                ("hazard", &he.id),
                ("effect", &he.effect),
                ("safety_goal_id", goal_id),
            ]);
            r.insert("safety_goal".into(), goal.to_string());
            r.insert("rating".into(), he.risk.rating.to_string());
            Some(r)
        })
        .collect();
    BindingSet::new()
        .scalar("system", cfg.system_name.clone())
        .scalar("evidence", EVIDENCE_TEXT)
        .collection("scenario", records)
}

/// One record per safe event, in event id order.
pub fn accept_bindings(cfg: &BuildConfig, hara: &HaraModel) -> BindingSet {
    let mut events: Vec<_> = hara.safe_events.iter().collect();
    events.sort_by(|a, b| compare_ids(&a.id, &b.id));
    let records = events
        .into_iter()
        .filter_map(|e| {
            let scenario = hara.scenario(&e.scenario_id)?;
            let mut r = record([
                ("id", &e.scenario_id),
                ("description", &scenario.description),
                ("text", &scenario.description),
                ("event", &e.id),
                ("instruction", &e.instruction),
                ("outcome", &e.expected_outcome),
            ]);
            r.insert("scenario_id".into(), e.scenario_id.clone());
            Some(r)
        })
        .collect();
    BindingSet::new()
        .scalar("system", cfg.system_name.clone())
        .scalar("evidence", EVIDENCE_TEXT)
        .scalar("outcome", OUTCOME_TEXT)
        .collection("scenario", records)
}

/// Adds a safety-goal Goal and an evidence Solution for each top-priority
/// hazard that shares its scenario with a worse one, under that scenario's
/// goal in the reject branch. Scenarios whose goal cannot be found (user
/// patterns without `hara-ref` on the scenario goal) are left to coverage.
fn argue_remaining_hazards(
    case: &mut ArgumentGraph,
    reject_goal: &NodeId,
    cfg: &BuildConfig,
    hara: &HaraModel,
) -> Result<(), BuildError> {
    let under = case.descendants(reject_goal.as_str());
    let mut bound = std::collections::HashSet::new();
    let mut extra = Vec::new();
    for he in top_priority_hazards(hara, cfg.priority_threshold) {
        if !bound.insert(he.scenario_id.as_str()) {
            extra.push(he);
        }
    }
    extra.sort_by(|a, b| compare_ids(&a.id, &b.id));
    for he in extra {
        let Some(sg) = he
            .safety_goal_id
            .as_deref()
            .and_then(|id| hara.safety_goal(id))
        else {
            continue;
        };
        let mut scenario_goals: Vec<NodeId> = case
            .nodes()
            .iter()
            .filter(|n| n.kind == NodeKind::Goal && under.contains(&n.id))
            .filter(|n| n.tag_value(HARA_REF_TAG) == Some(he.scenario_id.as_str()))
            .map(|n| n.id.clone())
            .collect();
        scenario_goals.sort();
        let Some(parent) = scenario_goals.into_iter().next() else {
            continue;
        };
        let goal = nid(format!("{parent}.{}", he.id))?;
        let solution = nid(format!("{parent}.{}.Sn", he.id))?;
        case.insert_node(
            GsnNode::new(goal.clone(), NodeKind::Goal, &sg.statement).tag(HARA_REF_TAG, &sg.id),
        )?;
        case.insert_node(
            GsnNode::new(
                solution.clone(),
                NodeKind::Solution,
                format!(
                    "{EVIDENCE_TEXT}: {} declines instructions whose effect would be: {}",
                    cfg.system_name, he.effect
                ),
            )
            .tag(HARA_REF_TAG, &he.id),
        )?;
        case.insert_edge(GsnEdge::supported_by(parent, goal.clone()))?;
        case.insert_edge(GsnEdge::supported_by(goal, solution))?;
    }
    Ok(())
}

/// Builds the full case and checks its coverage.
pub fn build_safety_case(
    cfg: &BuildConfig,
    hara: &HaraModel,
    lib: &PatternLibrary,
) -> Result<(ArgumentGraph, CoverageReport), BuildError> {
    let mut case = build_top_level(cfg, hara)?;
    let (reject_goal, accept_goal) = branch_goals(&case);
    let (reject_goal, accept_goal) = (
        reject_goal.cloned().expect("top level has a reject goal"),
        accept_goal.cloned().expect("top level has an accept goal"),
    );

    let branches = [
        (
            &cfg.pattern_names.reject,
            reject_goal.clone(),
            reject_bindings(cfg, hara),
        ),
        (
            &cfg.pattern_names.accept,
            accept_goal,
            accept_bindings(cfg, hara),
        ),
    ];
    for (name, at, bindings) in branches {
        let pattern = lib
            .get(name)
            .ok_or_else(|| BuildError::PatternNotFound(name.clone()))?;
        let fragment = instantiate_pattern(pattern, &bindings, "").map_err(|source| {
            BuildError::Instantiate {
                pattern: name.clone(),
                source,
            }
        })?;
        case = case.graft_subtree(at.as_str(), &fragment, &cfg.prefix_for(name))?;
    }
    argue_remaining_hazards(&mut case, &reject_goal, cfg, hara)?;
    apply_aliases(&mut case, cfg, true)?;

    let diags = validate_graph(&case);
    if has_errors(&diags) {
        return Err(BuildError::InvalidCase(diags));
    }
    let report = coverage_check(&case, hara, cfg);
    Ok((case, report))
}
