//! Brute-force reference computations used to cross-check the library.

use std::collections::{BTreeMap, BTreeSet};

use raise_forge::gsn::{ArgumentGraph, NodeKind};
use raise_forge::hara::{HaraModel, Threshold};

/// The expected coverage result, in a shape that is easy to compare.
#[derive(Debug, PartialEq, Eq)]
pub struct Expected {
    pub rows: Vec<(String, String, bool)>,
    pub unbound: Vec<String>,
    pub unsupported: Vec<String>,
    pub pass: bool,
}

fn numeric_key(id: &str) -> (String, u64) {
    let split = id.find(|c: char| c.is_ascii_digit()).unwrap_or(id.len());
    (id[..split].to_string(), id[split..].parse().unwrap_or(0))
}

fn reachable(case: &ArgumentGraph, start: &[String]) -> BTreeSet<String> {
    let mut seen: BTreeSet<String> = start.iter().cloned().collect();
    loop {
        let before = seen.len();
        for e in case.edges() {
            if seen.contains(e.source.as_str()) {
                seen.insert(e.target.to_string());
            }
        }
        if seen.len() == before {
            return seen;
        }
    }
}

/// Coverage by tag-set difference: the HARA ids each branch must mention
/// minus the ids its nodes actually carry.
pub fn coverage(case: &ArgumentGraph, hara: &HaraModel, threshold: Threshold) -> Expected {
    let admitted: Vec<_> = hara
        .hazardous_events
        .iter()
        .filter(|e| match threshold {
            Threshold::AtLeast(r) => e.risk.rating >= r,
            Threshold::Unreachable => false,
        })
        .collect();

    let tags_under = |branch: &str| -> BTreeSet<String> {
        let heads: Vec<String> = case
            .nodes()
            .iter()
            .filter(|n| n.tags.get("branch").map(String::as_str) == Some(branch))
            .map(|n| n.id.to_string())
            .collect();
        let region = reachable(case, &heads);
        case.nodes()
            .iter()
            .filter(|n| region.contains(n.id.as_str()))
            .filter_map(|n| n.tags.get("hara-ref").cloned())
            .collect()
    };

    let mut rows = Vec::new();
    let reject_tags = tags_under("reject");
    let mut wanted: BTreeMap<(String, u64), String> = BTreeMap::new();
    for e in &admitted {
        wanted.insert(numeric_key(&e.scenario_id), e.scenario_id.clone());
    }
    for s in wanted.values() {
        let hit = hara
            .hazardous_events
            .iter()
            .any(|e| &e.scenario_id == s && reject_tags.contains(&e.id));
        rows.push(("reject".to_string(), s.clone(), hit));
    }
    let accept_tags = tags_under("accept");
    let mut wanted: BTreeMap<(String, u64), String> = BTreeMap::new();
    for e in &hara.safe_events {
        wanted.insert(numeric_key(&e.scenario_id), e.scenario_id.clone());
    }
    for s in wanted.values() {
        let hit = hara
            .safe_events
            .iter()
            .any(|e| &e.scenario_id == s && accept_tags.contains(&e.id));
        rows.push(("accept".to_string(), s.clone(), hit));
    }

    let goal_tags: BTreeSet<String> = case
        .nodes()
        .iter()
        .filter(|n| n.kind == NodeKind::Goal)
        .filter_map(|n| n.tags.get("hara-ref").cloned())
        .collect();
    let required: BTreeSet<String> = admitted
        .iter()
        .filter_map(|e| e.safety_goal_id.clone())
        .collect();
    let mut unsupported: Vec<String> = required.difference(&goal_tags).cloned().collect();
    unsupported.sort_by_key(|id| numeric_key(id));

    let mut unbound: Vec<String> = case
        .nodes()
        .iter()
        .filter(|n| n.uninstantiated)
        .map(|n| n.id.to_string())
        .collect();
    unbound.sort();

    let pass = rows.iter().all(|r| r.2) && unbound.is_empty() && unsupported.is_empty();
    Expected {
        rows,
        unbound,
        unsupported,
        pass,
    }
}

/// Whether the SupportedBy relation admits a topological order (Kahn).
pub fn supported_by_is_acyclic(case: &ArgumentGraph) -> bool {
    use raise_forge::gsn::EdgeKind;
    let mut indegree: BTreeMap<String, usize> =
        case.nodes().iter().map(|n| (n.id.to_string(), 0)).collect();
    let edges: Vec<(String, String)> = case
        .edges()
        .iter()
        .filter(|e| e.kind == EdgeKind::SupportedBy)
        .map(|e| (e.source.to_string(), e.target.to_string()))
        .collect();
    for (_, t) in &edges {
        *indegree.entry(t.clone()).or_default() += 1;
    }
    let mut ready: Vec<String> = indegree
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(k, _)| k.clone())
        .collect();
    let mut done = 0;
    while let Some(n) = ready.pop() {
        done += 1;
        for (s, t) in &edges {
            if *s == n {
                let d = indegree.get_mut(t).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.push(t.clone());
                }
            }
        }
    }
    done == indegree.len()
}

/// Rating by the sum rule the shipped table encodes: any class 0 gives QM;
/// otherwise S+E+C of 10, 9, 8, 7 gives D, C, B, A and lower sums give QM.
pub fn rating_by_sum(s: u8, e: u8, c: u8) -> &'static str {
    if s == 0 || e == 0 || c == 0 {
        return "QM";
    }
    match s + e + c {
        10 => "D",
        9 => "C",
        8 => "B",
        7 => "A",
        _ => "QM",
    }
}
