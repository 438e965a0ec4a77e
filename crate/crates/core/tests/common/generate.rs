//! Random inputs for property tests: valid cases, HARA models and pattern
//! sources. Generators take a seeded RNG so failures replay from the seed.

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use raise_forge::gsn::{ArgumentGraph, EdgeKind, GsnEdge, GsnNode, NodeId, NodeKind};
use raise_forge::hara::{
    Controllability, Exposure, HaraModel, HazardousEvent, Malfunction, OperationalScenario, Rating,
    RiskAssessment, SafeEvent, SafetyGoal, Severity, SystemFunction, Threshold,
};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

const WORDS: &[&str] = &[
    "vehicle",
    "rejects",
    "\"quoted\"",
    "back\\slash",
    "{brace}",
    "}}",
    "ünïcode",
    "→",
    "lane",
    "a-very-long-hyphenated-word-that-exceeds-the-wrap-width",
    "x",
    "OS1",
    "\u{25C7}",
    "safe",
];

pub fn statement(rng: &mut StdRng) -> String {
    let n = rng.gen_range(1..8);
    (0..n)
        .map(|_| *WORDS.choose(rng).unwrap())
        .collect::<Vec<_>>()
        .join(" ")
}

fn node_id(rng: &mut StdRng, index: usize) -> NodeId {
    const HEAD: &[u8] = b"ABCGSNxyz";
    const TAIL: &[u8] = b"abc019_.-";
    let mut id = format!("{}{index}x", *HEAD.choose(rng).unwrap() as char);
    for _ in 0..rng.gen_range(0..4) {
        id.push(*TAIL.choose(rng).unwrap() as char);
    }
    NodeId::new(id).unwrap()
}

/// A case that passes `validate_graph` with no errors: a single root goal,
/// a SupportedBy DAG over goals and strategies, every goal either supported
/// or undeveloped, plus contextual nodes.
pub fn valid_case(rng: &mut StdRng) -> ArgumentGraph {
    let claims = rng.gen_range(1..14);
    let mut nodes: Vec<GsnNode> = Vec::new();
    let mut edges: BTreeSet<GsnEdge> = BTreeSet::new();
    let mut index = 0;
    let mut fresh = |rng: &mut StdRng| {
        index += 1;
        node_id(rng, index)
    };
    for i in 0..claims {
        let kind = if i == 0 || rng.gen_bool(0.6) {
            NodeKind::Goal
        } else {
            NodeKind::Strategy
        };
        let mut node = GsnNode::new(fresh(rng), kind, statement(rng));
        if rng.gen_bool(0.3) {
            node = node.tag("hara-ref", format!("HE{}", rng.gen_range(1..5)));
        }
        node.uninstantiated = rng.gen_bool(0.1);
        if i > 0 {
            let parent = rng.gen_range(0..i);
            edges.insert(GsnEdge::supported_by(
                nodes[parent].id.clone(),
                node.id.clone(),
            ));
            if i > 1 && rng.gen_bool(0.2) {
                let other = rng.gen_range(0..i);
                edges.insert(GsnEdge::supported_by(
                    nodes[other].id.clone(),
                    node.id.clone(),
                ));
            }
        }
        nodes.push(node);
    }
    let claim_ids: Vec<NodeId> = nodes.iter().map(|n| n.id.clone()).collect();
    for i in 0..claims {
        let has_child = edges.iter().any(|e| e.source == claim_ids[i]);
        if nodes[i].kind == NodeKind::Goal && !has_child {
            if rng.gen_bool(0.5) {
                nodes[i].undeveloped = true;
            } else {
                let sn = GsnNode::new(fresh(rng), NodeKind::Solution, statement(rng))
                    .tag("hara-ref", format!("SE{}", rng.gen_range(1..5)));
                edges.insert(GsnEdge::supported_by(claim_ids[i].clone(), sn.id.clone()));
                nodes.push(sn);
            }
        }
    }
    for _ in 0..rng.gen_range(0..4) {
        let kind = *[
            NodeKind::Context,
            NodeKind::Assumption,
            NodeKind::Justification,
        ]
        .choose(rng)
        .unwrap();
        let ctx = GsnNode::new(fresh(rng), kind, statement(rng));
        let owner = claim_ids.choose(rng).unwrap().clone();
        edges.insert(GsnEdge::in_context_of(owner, ctx.id.clone()));
        nodes.push(ctx);
    }
    nodes.shuffle(rng);
    let mut edges: Vec<GsnEdge> = edges.into_iter().collect();
    edges.shuffle(rng);
    ArgumentGraph::from_parts(nodes, edges)
}

/// A HARA model that passes `validate_hara` at `threshold` without
/// errors. Function ids, scenario ids and event ids may be sparse.
pub fn hara(rng: &mut StdRng, threshold: Threshold) -> HaraModel {
    let mut m = HaraModel {
        system_name: "Rover".into(),
        definition: "test system".into(),
        ..Default::default()
    };
    let functions = rng.gen_range(1..5);
    for i in 1..=functions {
        let description = if i == functions {
            "Able to reject dangerous instructions".to_string()
        } else {
            format!("Able to perform task {i}")
        };
        m.functions.push(SystemFunction {
            id: format!("SF{i}"),
            description,
        });
        m.malfunctions.push(Malfunction {
            id: format!("MF{i}"),
            function_id: format!("SF{i}"),
            description: format!("task {i} fails"),
        });
    }
    let scenarios = rng.gen_range(1..9);
    let mut scenario_ids = Vec::new();
    let mut next = 0;
    for _ in 0..scenarios {
        next += rng.gen_range(1..4);
        let id = format!("OS{next}");
        m.scenarios.push(OperationalScenario {
            id: id.clone(),
            description: format!("scenario {next}"),
        });
        scenario_ids.push(id);
    }
    let mut goals: Vec<String> = Vec::new();
    for i in 1..=rng.gen_range(0..11) {
        let risk = RiskAssessment::rated(
            Severity::new(rng.gen_range(0..=3)).unwrap(),
            Exposure::new(rng.gen_range(0..=4)).unwrap(),
            Controllability::new(rng.gen_range(0..=3)).unwrap(),
        );
        let safety_goal_id = if threshold.admits(risk.rating) || rng.gen_bool(0.5) {
            if !goals.is_empty() && rng.gen_bool(0.25) {
                Some(goals.choose(rng).unwrap().clone())
            } else {
                let id = format!("SG{}", goals.len() + 1);
                goals.push(id.clone());
                Some(id)
            }
        } else {
            None
        };
        m.hazardous_events.push(HazardousEvent {
            id: format!("HE{i}"),
            malfunction_id: format!("MF{}", rng.gen_range(1..=functions)),
            scenario_id: scenario_ids.choose(rng).unwrap().clone(),
            effect: format!("effect {i}"),
            risk,
            safety_goal_id,
        });
    }
    m.safety_goals = goals
        .iter()
        .map(|id| SafetyGoal {
            id: id.clone(),
            statement: format!("avoid hazard {id}"),
            priority: Rating::QM,
        })
        .collect();
    m.refresh_goal_priorities();
    for i in 1..=rng.gen_range(0..9) {
        m.safe_events.push(SafeEvent {
            id: format!("SE{i}"),
            instruction: format!("do thing {i}"),
            scenario_id: scenario_ids.choose(rng).unwrap().clone(),
            expected_outcome: format!("thing {i} done"),
        });
    }
    m
}

pub fn threshold(rng: &mut StdRng) -> Threshold {
    match rng.gen_range(0..6) {
        5 => Threshold::Unreachable,
        r => Threshold::AtLeast(Rating::ALL[r]),
    }
}

const SORTS: &[&str] = &[
    "Scenario",
    "Instruction",
    "Outcome",
    "SystemName",
    "EvidenceRef",
    "FreeText",
];
const KINDS: &[&str] = &[
    "Goal",
    "Strategy",
    "Solution",
    "Context",
    "Assumption",
    "Justification",
];
const LITERALS: &[&str] = &[
    "safe",
    " ",
    "{{",
    "}}",
    "\\\"",
    "\\\\",
    "é→",
    "x y",
    "#not-a-comment",
    ".",
];

fn template_text(rng: &mut StdRng, params: &[String]) -> String {
    let mut s = String::new();
    for _ in 0..rng.gen_range(1..6) {
        if !params.is_empty() && rng.gen_bool(0.4) {
            let p = params.choose(rng).unwrap();
            if rng.gen_bool(0.3) {
                s.push_str(&format!("{{{p}.field}}"));
            } else {
                s.push_str(&format!("{{{p}}}"));
            }
        } else {
            s.push_str(LITERALS.choose(rng).unwrap());
        }
    }
    s
}

/// Syntactically valid pattern source. It need not pass the pattern
/// validator.
pub fn pattern_source(rng: &mut StdRng) -> String {
    let mut out = format!(
        "pattern P{} v{}\n",
        rng.gen_range(0..100),
        rng.gen_range(1..5)
    );
    if rng.gen_bool(0.7) {
        let objective = ["reject-dangerous", "accept-safe", "generic"]
            .choose(rng)
            .unwrap();
        out.push_str(&format!("objective {objective}\n"));
    }
    let mut params = Vec::new();
    let mut collections = Vec::new();
    for i in 0..rng.gen_range(0..5) {
        let name = format!("p{i}");
        let collection = rng.gen_bool(0.4);
        out.push_str(&format!(
            "param {name}: {}{}{}\n",
            SORTS.choose(rng).unwrap(),
            if collection { "*" } else { "" },
            if rng.gen_bool(0.2) { "?" } else { "" }
        ));
        if collection {
            collections.push(name.clone());
        }
        params.push(name);
    }
    if rng.gen_bool(0.5) {
        out.push_str("# a comment line\n\n");
    }
    let count = rng.gen_range(1..9);
    let ids: Vec<String> = (0..count)
        .map(|i| format!("N{i}.x-{}", rng.gen_range(0..3)))
        .collect();
    for id in &ids {
        out.push_str(&format!(
            "node {id}: {} \"{}\"",
            KINDS.choose(rng).unwrap(),
            template_text(rng, &params)
        ));
        if rng.gen_bool(0.2) {
            out.push_str(" undeveloped");
        }
        match rng.gen_range(0..4) {
            0 if !collections.is_empty() => out.push_str(&format!(
                " multiplicity over {}",
                collections.choose(rng).unwrap()
            )),
            1 => {
                let min = rng.gen_range(1..3);
                out.push_str(&format!(" choice {min}..{}", min + rng.gen_range(0..2)));
            }
            _ => {}
        }
        for key in ["ref", "k-1", "x.y"] {
            if rng.gen_bool(0.25) {
                out.push_str(&format!(" tag {key}=\"{}\"", template_text(rng, &params)));
            }
        }
        out.push('\n');
    }
    let mut seen = BTreeSet::new();
    for _ in 0..rng.gen_range(0..count * 2) {
        let a = ids.choose(rng).unwrap();
        let b = ids.choose(rng).unwrap();
        let kind = if rng.gen_bool(0.7) {
            "supportedBy"
        } else {
            "inContextOf"
        };
        if seen.insert((a.clone(), b.clone(), kind)) {
            out.push_str(&format!("edge {a} -{kind}-> {b}\n"));
        }
    }
    out
}

/// Random kind for an edge, used by mutation tests.
pub fn edge_kind(rng: &mut StdRng) -> EdgeKind {
    if rng.gen_bool(0.5) {
        EdgeKind::SupportedBy
    } else {
        EdgeKind::InContextOf
    }
}
