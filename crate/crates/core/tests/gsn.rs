mod common;

use proptest::prelude::*;
use rand::Rng;

use common::{generate, oracle};
use raise_forge::gsn::{
    id, validate_fragment, validate_graph, ArgumentGraph, EdgeKind, GraphError, GsnEdge, GsnNode,
    NodeId, NodeKind,
};

fn codes(g: &ArgumentGraph) -> Vec<&'static str> {
    validate_graph(g).iter().map(|d| d.code).collect()
}

fn goal(name: &str, text: &str) -> GsnNode {
    GsnNode::new(id(name), NodeKind::Goal, text)
}

fn simlingo_top() -> ArgumentGraph {
    let mut g = ArgumentGraph::new();
    g.insert_node(goal("G1.1", "SimLingo is sufficiently safe to use"))
        .unwrap();
    g.insert_node(GsnNode::new(
        id("S1.1"),
        NodeKind::Strategy,
        "Argument over system functions",
    ))
    .unwrap();
    g.insert_node(GsnNode::new(
        id("C1.1"),
        NodeKind::Context,
        "CARLA simulator",
    ))
    .unwrap();
    g
}

#[test]
fn add_edge_builds_a_new_value() {
    let g = simlingo_top();
    let e = GsnEdge::supported_by(id("G1.1"), id("S1.1"));
    let h = g.add_edge(e.clone()).unwrap();
    assert!(h.contains_edge(&e));
    assert!(!g.contains_edge(&e));
    assert_eq!(h.remove_edge(&e), g);
}

#[test]
fn add_edge_errors() {
    let g = simlingo_top();
    assert!(matches!(
        g.add_edge(GsnEdge::supported_by(id("G1.1"), id("G1.1"))),
        Err(GraphError::CycleIntroduced(_))
    ));
    assert!(matches!(
        g.add_edge(GsnEdge::supported_by(id("G1.1"), id("C1.1"))),
        Err(GraphError::KindIncompatible { .. })
    ));
    assert!(matches!(
        g.add_edge(GsnEdge::supported_by(id("G1.1"), id("nope"))),
        Err(GraphError::UnknownEndpoint(_))
    ));
    let h = g
        .add_edge(GsnEdge::supported_by(id("G1.1"), id("S1.1")))
        .unwrap();
    assert!(matches!(
        h.add_edge(GsnEdge::supported_by(id("G1.1"), id("S1.1"))),
        Err(GraphError::DuplicateEdge(_))
    ));
    assert!(matches!(
        h.add_edge(GsnEdge::supported_by(id("S1.1"), id("G1.1"))),
        Err(GraphError::CycleIntroduced(_))
    ));
}

#[test]
fn node_ids_follow_the_identifier_grammar() {
    for ok in ["G1", "G1.1", "a_b-c.d", "RI.G3.12"] {
        assert!(NodeId::new(ok).is_ok(), "{ok}");
    }
    for bad in ["", "1G", ".G", "G 1", "G/1", "Ǵ1"] {
        assert!(NodeId::new(bad).is_err(), "{bad:?}");
    }
}

#[test]
fn unsupported_goal_and_multiple_roots() {
    let g = ArgumentGraph::from_parts(vec![goal("G1", "claim")], vec![]);
    assert!(codes(&g).contains(&"GSN010"));

    let g = ArgumentGraph::from_parts(
        vec![goal("G1", "a").undeveloped(), goal("G2", "b").undeveloped()],
        vec![],
    );
    assert!(codes(&g).contains(&"GSN011"));
}

#[test]
fn undeveloped_goals_are_warnings_only() {
    let g = ArgumentGraph::from_parts(
        vec![
            goal("G1", "root"),
            goal("G2", "leaf").undeveloped(),
            GsnNode::new(id("C1"), NodeKind::Context, "ctx"),
        ],
        vec![
            GsnEdge::supported_by(id("G1"), id("G2")),
            GsnEdge::in_context_of(id("G1"), id("C1")),
        ],
    );
    let diags = validate_graph(&g);
    assert!(diags.iter().all(|d| !d.is_error()), "{diags:?}");
    assert!(diags.iter().any(|d| d.code == "GSN020"));
}

#[test]
fn fragment_mode_still_checks_kinds() {
    let g = ArgumentGraph::from_parts(
        vec![
            goal("G1", "root"),
            GsnNode::new(id("Sn1"), NodeKind::Solution, "ev"),
        ],
        vec![GsnEdge::in_context_of(id("G1"), id("Sn1"))],
    );
    assert!(validate_fragment(&g).iter().any(|d| d.code == "GSN007"));
}

#[test]
fn golden_case_is_clean() {
    let (case, _) = common::fixture_case();
    let errors: Vec<_> = validate_graph(&case)
        .into_iter()
        .filter(|d| d.is_error())
        .collect();
    assert!(errors.is_empty(), "{errors:?}");
}

#[test]
fn graft_under_reject_goal_with_prefix() {
    let base = ArgumentGraph::from_parts(
        vec![goal(
            "G3.2",
            "SimLingo is able to reject dangerous instructions",
        )],
        vec![],
    );
    let sub = ArgumentGraph::from_parts(
        vec![
            goal("G1", "rejects"),
            goal("G2", "per scenario").undeveloped(),
        ],
        vec![GsnEdge::supported_by(id("G1"), id("G2"))],
    );
    let g = base.graft_subtree("G3.2", &sub, "RI.").unwrap();
    assert!(g.contains_edge(&GsnEdge::supported_by(id("G3.2"), id("RI.G1"))));
    assert!(g.contains_edge(&GsnEdge::supported_by(id("RI.G1"), id("RI.G2"))));
    assert_eq!(g.nodes().len(), 3);
    assert_eq!(g.edges().len(), 2);
}

#[test]
fn graft_errors() {
    let base = ArgumentGraph::from_parts(vec![goal("G1", "root"), goal("G2", "other")], vec![]);
    assert!(matches!(
        base.graft_subtree("G1", &ArgumentGraph::new(), "X."),
        Err(GraphError::MultiRootSubtree(0))
    ));
    let sub = ArgumentGraph::from_parts(vec![goal("G2", "clash")], vec![]);
    assert!(matches!(
        base.graft_subtree("G1", &sub, ""),
        Err(GraphError::IdCollision(_))
    ));
    assert!(matches!(
        base.graft_subtree("G9", &sub, "X."),
        Err(GraphError::UnknownAttachPoint(_))
    ));
}

#[test]
fn equality_ignores_insertion_order() {
    let a = ArgumentGraph::from_parts(
        vec![goal("G1", "a"), goal("G2", "b")],
        vec![GsnEdge::supported_by(id("G1"), id("G2"))],
    );
    let b = ArgumentGraph::from_parts(
        vec![goal("G2", "b"), goal("G1", "a")],
        vec![GsnEdge::supported_by(id("G1"), id("G2"))],
    );
    assert_eq!(a, b);
    assert_eq!(a.canonical().nodes()[0].id.as_str(), "G1");
}

#[test]
fn edge_kind_matrix() {
    use NodeKind::*;
    let claims = [Goal, Strategy];
    for s in NodeKind::ALL {
        for t in NodeKind::ALL {
            let supported = claims.contains(&s) && matches!(t, Goal | Strategy | Solution);
            let context = claims.contains(&s) && matches!(t, Context | Assumption | Justification);
            assert_eq!(
                EdgeKind::SupportedBy.allows(s, t),
                supported,
                "{s:?}->{t:?}"
            );
            assert_eq!(EdgeKind::InContextOf.allows(s, t), context, "{s:?}->{t:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn generated_cases_are_valid_and_acyclic(seed in any::<u64>()) {
        let g = generate::valid_case(&mut generate::rng(seed));
        let errors: Vec<_> = validate_graph(&g).into_iter().filter(|d| d.is_error()).collect();
        prop_assert!(errors.is_empty(), "{:?}", errors);
        prop_assert!(oracle::supported_by_is_acyclic(&g));
    }

    #[test]
    fn any_graph_without_errors_is_acyclic(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let (nodes, mut edges) = generate::valid_case(&mut rng).into_parts();
        for _ in 0..rng.gen_range(0..3) {
            let a = nodes[rng.gen_range(0..nodes.len())].id.clone();
            let b = nodes[rng.gen_range(0..nodes.len())].id.clone();
            edges.push(GsnEdge::new(a, b, generate::edge_kind(&mut rng)));
        }
        let g = ArgumentGraph::from_parts(nodes, edges);
        if !validate_graph(&g).iter().any(|d| d.is_error()) {
            prop_assert!(oracle::supported_by_is_acyclic(&g));
        }
    }

    #[test]
    fn validation_is_deterministic(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let g = generate::valid_case(&mut rng);
        let (mut nodes, mut edges) = g.clone().into_parts();
        nodes.reverse();
        edges.reverse();
        let h = ArgumentGraph::from_parts(nodes, edges);
        prop_assert_eq!(validate_graph(&g), validate_graph(&g));
        prop_assert_eq!(validate_graph(&g), validate_graph(&h));
    }

    #[test]
    fn add_then_remove_is_identity(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let g = generate::valid_case(&mut rng);
        let nodes = g.nodes();
        let a = nodes[rng.gen_range(0..nodes.len())].id.clone();
        let b = nodes[rng.gen_range(0..nodes.len())].id.clone();
        let e = GsnEdge::new(a, b, generate::edge_kind(&mut rng));
        if let Ok(h) = g.add_edge(e.clone()) {
            prop_assert_eq!(h.remove_edge(&e), g);
        }
    }

    #[test]
    fn graft_counts_add_up(s1 in any::<u64>(), s2 in any::<u64>()) {
        let g = generate::valid_case(&mut generate::rng(s1));
        let sub = generate::valid_case(&mut generate::rng(s2));
        let at = g.roots()[0].clone();
        let grafted = g.graft_subtree(at.as_str(), &sub, "Sub.").unwrap();
        prop_assert_eq!(grafted.nodes().len(), g.nodes().len() + sub.nodes().len());
        prop_assert_eq!(grafted.edges().len(), g.edges().len() + sub.edges().len() + 1);
        let root = sub.roots()[0].prefixed("Sub.").unwrap();
        prop_assert!(grafted.contains_edge(&GsnEdge::supported_by(at, root)));
    }
}
