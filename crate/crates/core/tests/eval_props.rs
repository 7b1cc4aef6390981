//! Algebraic laws of the evaluator on random graphs and expressions.

mod common;

use gxrepair_core::datagraph::{DataGraph, EdgeLabel, NodeId};
use gxrepair_core::eval::{eval_node, eval_path, PairSet};
use gxrepair_core::gxpath::{classify_node, classify_path, parse_path, PathExpr};

const LABELS: [&str; 2] = ["a", "b"];
const VALUES: [&str; 3] = ["x", "y", "z"];

fn full_relation(g: &DataGraph) -> PairSet {
    g.iter_nodes()
        .flat_map(|(v, _)| g.iter_nodes().map(move |(w, _)| (v.clone(), w.clone())))
        .collect()
}

#[test]
fn complement_is_an_involution() {
    let mut rng = common::rng(31);
    for _ in 0..200 {
        let g = common::random_graph(&mut rng, 5, &LABELS, &VALUES, 0.3);
        let p = common::random_path_expr(&mut rng, 3, &LABELS, &VALUES, false);
        let twice = p.clone().complement().complement();
        assert_eq!(eval_path(&g, &twice), eval_path(&g, &p));
    }
}

#[test]
fn intersection_obeys_de_morgan() {
    let mut rng = common::rng(32);
    for _ in 0..200 {
        let g = common::random_graph(&mut rng, 5, &LABELS, &VALUES, 0.3);
        let a = common::random_path_expr(&mut rng, 2, &LABELS, &VALUES, false);
        let b = common::random_path_expr(&mut rng, 2, &LABELS, &VALUES, false);
        let direct = a.clone().intersect(b.clone());
        let rewritten = a
            .clone()
            .complement()
            .union(b.clone().complement())
            .complement();
        assert_eq!(eval_path(&g, &direct), eval_path(&g, &rewritten));
    }
}

#[test]
fn star_is_a_fixpoint_of_one_unfolding() {
    let mut rng = common::rng(33);
    for _ in 0..200 {
        let g = common::random_graph(&mut rng, 5, &LABELS, &VALUES, 0.3);
        let a = common::random_path_expr(&mut rng, 2, &LABELS, &VALUES, false);
        let star = a.clone().star();
        let unfolded = PathExpr::Epsilon.union(a.clone().concat(a.clone().star()));
        assert_eq!(eval_path(&g, &star), eval_path(&g, &unfolded));
    }
}

#[test]
fn repeat_agrees_with_its_expansions() {
    let mut rng = common::rng(34);
    for _ in 0..150 {
        let g = common::random_graph(&mut rng, 5, &LABELS, &VALUES, 0.3);
        let a = common::random_path_expr(&mut rng, 2, &LABELS, &VALUES, false);
        assert_eq!(
            eval_path(&g, &a.clone().repeat(0, 0)),
            eval_path(&g, &PathExpr::Epsilon)
        );
        assert_eq!(eval_path(&g, &a.clone().repeat(1, 1)), eval_path(&g, &a));
        let bounded = eval_path(&g, &a.clone().repeat(1, 3));
        let unrolled = eval_path(
            &g,
            &a.clone()
                .union(a.clone().concat(a.clone()))
                .union(a.clone().concat(a.clone()).concat(a.clone())),
        );
        assert_eq!(bounded, unrolled);
        assert!(bounded.is_subset(&eval_path(&g, &a.clone().star())));
    }
}

#[test]
fn exists_is_the_domain_of_the_path() {
    let mut rng = common::rng(35);
    for _ in 0..200 {
        let g = common::random_graph(&mut rng, 5, &LABELS, &VALUES, 0.3);
        let a = common::random_path_expr(&mut rng, 3, &LABELS, &VALUES, false);
        let pairs = eval_path(&g, &a);
        let domain: std::collections::BTreeSet<_> =
            pairs.iter().map(|(v, _)| v.clone()).collect();
        let exists = eval_node(&g, &gxrepair_core::gxpath::NodeExpr::exists(a));
        assert_eq!(exists, domain);
    }
}

/// Adds one random edge to a nonempty graph.
fn with_random_edge(rng: &mut rand::rngs::StdRng, g: &DataGraph) -> Option<DataGraph> {
    use rand::seq::IteratorRandom;
    let nodes: Vec<NodeId> = g.iter_nodes().map(|(id, _)| id.clone()).collect();
    if nodes.is_empty() {
        return None;
    }
    let mut extended = g.clone();
    for _ in 0..20 {
        let from = nodes.iter().choose(rng).unwrap().clone();
        let to = nodes.iter().choose(rng).unwrap().clone();
        let label = EdgeLabel::new(*["a", "b"].iter().choose(rng).unwrap());
        if !extended.has_edge(&from, &to, &label) {
            extended.add_edge(from, to, label).unwrap();
            return Some(extended);
        }
    }
    None
}

#[test]
fn positive_expressions_are_monotone_under_edge_additions() {
    let mut rng = common::rng(36);
    let mut checked = 0;
    while checked < 200 {
        let g = common::random_graph(&mut rng, 5, &LABELS, &VALUES, 0.2);
        let Some(bigger) = with_random_edge(&mut rng, &g) else {
            continue;
        };
        let p = common::random_path_expr(&mut rng, 3, &LABELS, &VALUES, true);
        assert!(classify_path(&p).positive);
        assert!(
            eval_path(&g, &p).is_subset(&eval_path(&bigger, &p)),
            "{p} must grow with the graph"
        );
        let n = common::random_node_expr(&mut rng, 3, &LABELS, &VALUES, true);
        assert!(classify_node(&n).positive);
        assert!(eval_node(&g, &n).is_subset(&eval_node(&bigger, &n)));
        checked += 1;
    }
}

#[test]
fn complement_breaks_monotonicity_on_a_witness() {
    // One concrete counterexample pinning the negative direction: the
    // complement of an edge label shrinks when the edge appears.
    let mut g = DataGraph::empty();
    g.add_node(NodeId::new("u"), "x".into()).unwrap();
    g.add_node(NodeId::new("v"), "y".into()).unwrap();
    let p = parse_path("!a").unwrap();
    let before = eval_path(&g, &p);
    assert_eq!(before.len(), 4);
    let mut bigger = g.clone();
    bigger
        .add_edge(NodeId::new("u"), NodeId::new("v"), EdgeLabel::new("a"))
        .unwrap();
    let after = eval_path(&bigger, &p);
    assert!(!before.is_subset(&after));
    assert!(!after.contains(&(NodeId::new("u"), NodeId::new("v"))));
}
