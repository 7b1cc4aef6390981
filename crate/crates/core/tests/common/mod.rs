//! Seeded random generators shared by the integration suites.

#![allow(dead_code)]

use gxrepair_core::datagraph::{
    DataGraph, DataValue, EdgeLabel, NodeId, SymbolOrder, WeightSpec,
};
use gxrepair_core::gxpath::{Constraint, ConstraintSet, NodeExpr, PathExpr};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A random graph over `n0..` ids, the given label pool and value pool.
pub fn random_graph(
    rng: &mut StdRng,
    max_nodes: usize,
    labels: &[&str],
    values: &[&str],
    edge_density: f64,
) -> DataGraph {
    let n = rng.gen_range(0..=max_nodes);
    let mut g = DataGraph::empty();
    for i in 0..n {
        let value = values.choose(rng).copied().unwrap_or("x");
        g.add_node(NodeId::new(format!("n{i}")), DataValue::new(value))
            .unwrap();
    }
    for i in 0..n {
        for j in 0..n {
            for label in labels {
                if rng.gen_bool(edge_density) {
                    g.add_edge(
                        NodeId::new(format!("n{i}")),
                        NodeId::new(format!("n{j}")),
                        EdgeLabel::new(*label),
                    )
                    .unwrap();
                }
            }
        }
    }
    g
}

pub fn random_path_expr(
    rng: &mut StdRng,
    depth: usize,
    labels: &[&str],
    values: &[&str],
    positive_only: bool,
) -> PathExpr {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        match rng.gen_range(0..5) {
            0 => PathExpr::Epsilon,
            1 => PathExpr::Wildcard,
            2 => PathExpr::inverse(*labels.choose(rng).unwrap()),
            _ => PathExpr::label(*labels.choose(rng).unwrap()),
        }
    } else {
        let max = if positive_only { 6 } else { 8 };
        match rng.gen_range(0..max) {
            0 => random_path_expr(rng, depth - 1, labels, values, positive_only)
                .concat(random_path_expr(rng, depth - 1, labels, values, positive_only)),
            1 => random_path_expr(rng, depth - 1, labels, values, positive_only)
                .union(random_path_expr(rng, depth - 1, labels, values, positive_only)),
            2 => random_path_expr(rng, depth - 1, labels, values, positive_only)
                .intersect(random_path_expr(rng, depth - 1, labels, values, positive_only)),
            3 => random_path_expr(rng, depth - 1, labels, values, positive_only).star(),
            4 => PathExpr::node_test(random_node_expr(
                rng,
                depth - 1,
                labels,
                values,
                positive_only,
            )),
            5 => {
                let lo = rng.gen_range(0..3u32);
                let hi = lo + rng.gen_range(0..3u32);
                random_path_expr(rng, depth - 1, labels, values, positive_only).repeat(lo, hi)
            }
            _ => random_path_expr(rng, depth - 1, labels, values, positive_only).complement(),
        }
    }
}

pub fn random_node_expr(
    rng: &mut StdRng,
    depth: usize,
    labels: &[&str],
    values: &[&str],
    positive_only: bool,
) -> NodeExpr {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        if rng.gen_bool(0.5) {
            NodeExpr::data_eq(*values.choose(rng).unwrap())
        } else {
            NodeExpr::data_neq(*values.choose(rng).unwrap())
        }
    } else {
        let max = if positive_only { 5 } else { 6 };
        match rng.gen_range(0..max) {
            0 => random_node_expr(rng, depth - 1, labels, values, positive_only)
                .or(random_node_expr(rng, depth - 1, labels, values, positive_only)),
            1 => random_node_expr(rng, depth - 1, labels, values, positive_only)
                .and(random_node_expr(rng, depth - 1, labels, values, positive_only)),
            2 => NodeExpr::exists(random_path_expr(
                rng,
                depth - 1,
                labels,
                values,
                positive_only,
            )),
            3 => NodeExpr::exists_eq(
                random_path_expr(rng, depth - 1, labels, values, positive_only),
                random_path_expr(rng, depth - 1, labels, values, positive_only),
            ),
            4 => NodeExpr::exists_neq(
                random_path_expr(rng, depth - 1, labels, values, positive_only),
                random_path_expr(rng, depth - 1, labels, values, positive_only),
            ),
            _ => random_node_expr(rng, depth - 1, labels, values, positive_only).negate(),
        }
    }
}

pub fn random_constraints(
    rng: &mut StdRng,
    count: usize,
    depth: usize,
    labels: &[&str],
    values: &[&str],
    positive_only: bool,
) -> ConstraintSet {
    let constraints = (0..count)
        .map(|_| {
            if rng.gen_bool(0.5) {
                Constraint::Node(random_node_expr(rng, depth, labels, values, positive_only))
            } else {
                Constraint::Path(random_path_expr(rng, depth, labels, values, positive_only))
            }
        })
        .collect();
    ConstraintSet::new(constraints)
}

pub fn random_weights(rng: &mut StdRng, labels: &[&str], values: &[&str]) -> WeightSpec {
    WeightSpec {
        edge_weights: labels
            .iter()
            .map(|l| (EdgeLabel::new(*l), rng.gen_range(0..5)))
            .collect(),
        data_weights: values
            .iter()
            .map(|v| (DataValue::new(*v), rng.gen_range(0..5)))
            .collect(),
        default_edge: rng.gen_range(0..3),
        default_data: rng.gen_range(0..3),
    }
}

/// A random strict partial order over the combined symbol pool: sample
/// pairs over a random permutation so the relation is acyclic, then let
/// the constructor close it.
pub fn random_order(rng: &mut StdRng, labels: &[&str], values: &[&str]) -> SymbolOrder {
    let mut symbols: Vec<String> = labels
        .iter()
        .chain(values.iter())
        .map(|s| s.to_string())
        .collect();
    symbols.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..symbols.len() {
        for j in i + 1..symbols.len() {
            if rng.gen_bool(0.4) {
                pairs.push((symbols[i].clone(), symbols[j].clone()));
            }
        }
    }
    SymbolOrder::try_new(symbols, pairs).expect("pairs follow a permutation, hence acyclic")
}
