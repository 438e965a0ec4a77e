use std::collections::{BTreeSet, HashSet};
use std::fmt;

use super::{BuildConfig, BRANCH_TAG, HARA_REF_TAG};
use crate::gsn::{ArgumentGraph, NodeId, NodeKind};
use crate::hara::{compare_ids, top_priority_hazards, HaraModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Reject,
    Accept,
}

impl Branch {
    pub const ALL: [Branch; 2] = [Branch::Reject, Branch::Accept];

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Reject => "reject",
            Branch::Accept => "accept",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioCoverage {
    pub branch: Branch,
    pub scenario_id: String,
    pub covered: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    /// Reject rows then accept rows, each in scenario id order.
    pub scenario_coverage: Vec<ScenarioCoverage>,
    pub unbound_hotspots: Vec<String>,
    pub unsupported_safety_goals: Vec<String>,
    pub verdict: Verdict,
}

impl CoverageReport {
    pub fn covered(&self, branch: Branch, scenario: &str) -> Option<bool> {
        self.scenario_coverage
            .iter()
            .find(|r| r.branch == branch && r.scenario_id == scenario)
            .map(|r| r.covered)
    }

    pub fn rows(&self, branch: Branch) -> impl Iterator<Item = &ScenarioCoverage> {
        self.scenario_coverage
            .iter()
            .filter(move |r| r.branch == branch)
    }

    pub fn uncovered(&self) -> impl Iterator<Item = &ScenarioCoverage> {
        self.scenario_coverage.iter().filter(|r| !r.covered)
    }
}

/// Scenarios the reject branch must cover: those of top-priority hazards.
pub fn reject_domain(hara: &HaraModel, cfg: &BuildConfig) -> Vec<String> {
    sorted_unique(
        top_priority_hazards(hara, cfg.priority_threshold)
            .into_iter()
            .map(|e| e.scenario_id.clone()),
    )
}

/// Scenarios the accept branch must cover: those of the safe events.
pub fn accept_domain(hara: &HaraModel) -> Vec<String> {
    sorted_unique(hara.safe_events.iter().map(|e| e.scenario_id.clone()))
}

fn sorted_unique(ids: impl Iterator<Item = String>) -> Vec<String> {
    let mut ids: Vec<String> = ids.collect::<BTreeSet<_>>().into_iter().collect();
    ids.sort_by(|a, b| compare_ids(a, b));
    ids
}

fn branch_region(case: &ArgumentGraph, branch: Branch) -> HashSet<NodeId> {
    case.nodes()
        .iter()
        .filter(|n| n.tag_value(BRANCH_TAG) == Some(branch.as_str()))
        .flat_map(|n| case.descendants(n.id.as_str()))
        .collect()
}

/// Checks `case` against the HARA: every required scenario reached by an
/// event tag under its branch, every top-priority safety goal stated by a
/// tagged Goal, and no unbound hot spots.
pub fn coverage_check(case: &ArgumentGraph, hara: &HaraModel, cfg: &BuildConfig) -> CoverageReport {
    let mut scenario_coverage = Vec::new();
    for branch in Branch::ALL {
        let region = branch_region(case, branch);
        let reached: HashSet<&str> = region
            .iter()
            .filter_map(|id| case.node(id.as_str())?.tag_value(HARA_REF_TAG))
            .filter_map(|r| match branch {
                Branch::Reject => hara.hazardous_event(r).map(|e| e.scenario_id.as_str()),
                Branch::Accept => hara.safe_event(r).map(|e| e.scenario_id.as_str()),
            })
            .collect();
        let domain = match branch {
            Branch::Reject => reject_domain(hara, cfg),
            Branch::Accept => accept_domain(hara),
        };
        for scenario_id in domain {
            scenario_coverage.push(ScenarioCoverage {
                branch,
                covered: reached.contains(scenario_id.as_str()),
                scenario_id,
            });
        }
    }

    let stated: HashSet<&str> = case
        .nodes()
        .iter()
        .filter(|n| n.kind == NodeKind::Goal)
        .filter_map(|n| n.tag_value(HARA_REF_TAG))
        .collect();
    let unsupported_safety_goals = sorted_unique(
        top_priority_hazards(hara, cfg.priority_threshold)
            .into_iter()
            .filter_map(|e| e.safety_goal_id.clone())
            .filter(|g| !stated.contains(g.as_str())),
    );

    let mut unbound_hotspots: Vec<String> = case
        .nodes()
        .iter()
        .filter(|n| n.uninstantiated)
        .map(|n| n.id.to_string())
        .collect();
    unbound_hotspots.sort();

    let pass = scenario_coverage.iter().all(|r| r.covered)
        && unbound_hotspots.is_empty()
        && unsupported_safety_goals.is_empty();
    CoverageReport {
        scenario_coverage,
        unbound_hotspots,
        unsupported_safety_goals,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
    }
}
