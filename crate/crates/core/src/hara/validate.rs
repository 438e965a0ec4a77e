use std::collections::HashSet;

use super::{compare_ids, HaraModel, HazardousEvent, Threshold};
use crate::diag::{sort_diagnostics, Diagnostic, Locus};

fn item(id: &str) -> Locus {
    Locus::Item(id.to_string())
}

/// Checks referential integrity, safety-goal assignment for events at or
/// above `threshold`, and scenario usage.
pub fn validate_hara(model: &HaraModel, threshold: Threshold) -> Vec<Diagnostic> {
    let mut diags = Vec::new();

    let mut all_ids = HashSet::new();
    let ids = model
        .functions
        .iter()
        .map(|f| &f.id)
        .chain(model.malfunctions.iter().map(|m| &m.id))
        .chain(model.scenarios.iter().map(|s| &s.id))
        .chain(model.hazardous_events.iter().map(|e| &e.id))
        .chain(model.safe_events.iter().map(|e| &e.id))
        .chain(model.safety_goals.iter().map(|g| &g.id));
    for id in ids {
        if !all_ids.insert(id.as_str()) {
            diags.push(Diagnostic::error("HAR003", format!("duplicate id '{id}'")).at(item(id)));
        }
    }

    let resolves =
        |id: &str, exists: bool, what: &str, owner: &str, diags: &mut Vec<Diagnostic>| {
            if !exists {
                diags.push(
                    Diagnostic::error("HAR004", format!("{owner} refers to unknown {what} '{id}'"))
                        .at(item(owner)),
                );
            }
        };

    for m in &model.malfunctions {
        let exists = model.functions.iter().any(|f| f.id == m.function_id);
        resolves(&m.function_id, exists, "system function", &m.id, &mut diags);
    }
    for e in &model.hazardous_events {
        let exists = model.malfunctions.iter().any(|m| m.id == e.malfunction_id);
        resolves(&e.malfunction_id, exists, "malfunction", &e.id, &mut diags);
        resolves(
            &e.scenario_id,
            model.scenario(&e.scenario_id).is_some(),
            "scenario",
            &e.id,
            &mut diags,
        );
        match &e.safety_goal_id {
            Some(goal) => {
                resolves(goal, model.safety_goal(goal).is_some(), "safety goal", &e.id, &mut diags);
            }
            None if threshold.admits(e.risk.rating) => diags.push(
                Diagnostic::error(
                    "HAR030",
                    format!(
                        "hazardous event {} is rated {} (threshold {threshold}) but has no safety goal",
                        e.id, e.risk.rating
                    ),
                )
                .at(item(&e.id)),
            ),
            None => {}
        }
    }
    for e in &model.safe_events {
        resolves(
            &e.scenario_id,
            model.scenario(&e.scenario_id).is_some(),
            "scenario",
            &e.id,
            &mut diags,
        );
    }
    for g in &model.safety_goals {
        let linked = model
            .hazardous_events
            .iter()
            .any(|e| e.safety_goal_id.as_deref() == Some(g.id.as_str()));
        if !linked {
            diags.push(
                Diagnostic::error(
                    "HAR032",
                    format!("safety goal {} is not linked to any hazardous event", g.id),
                )
                .at(item(&g.id)),
            );
        }
    }

    let used: HashSet<&str> = model
        .hazardous_events
        .iter()
        .map(|e| e.scenario_id.as_str())
        .chain(model.safe_events.iter().map(|e| e.scenario_id.as_str()))
        .collect();
    for s in &model.scenarios {
        if !used.contains(s.id.as_str()) {
            diags.push(
                Diagnostic::warning(
                    "HAR031",
                    format!(
                        "scenario {} is not used by any hazardous or safe event",
                        s.id
                    ),
                )
                .at(item(&s.id)),
            );
        }
    }

    sort_diagnostics(&mut diags);
    diags
}

/// Hazardous events rated at or above `threshold`, worst first, then by id.
pub fn top_priority_hazards(model: &HaraModel, threshold: Threshold) -> Vec<&HazardousEvent> {
    let mut events: Vec<&HazardousEvent> = model
        .hazardous_events
        .iter()
        .filter(|e| threshold.admits(e.risk.rating))
        .collect();
    events.sort_by(|a, b| {
        b.risk
            .rating
            .cmp(&a.risk.rating)
            .then_with(|| compare_ids(&a.id, &b.id))
    });
    events
}
