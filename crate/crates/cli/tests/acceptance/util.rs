//! Seeded generators and fixture loading for the acceptance criteria.

use gxrepair_core::datagraph::{
    DataGraph, DataValue, EdgeLabel, NodeId, SymbolOrder, WeightSpec,
};
use gxrepair_core::gxpath::{Constraint, ConstraintSet, NodeExpr, PathExpr};
use gxrepair_core::reductions::Cnf3;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use std::path::PathBuf;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn fixture_path(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

pub fn fixture_graph(name: &str) -> DataGraph {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    gxrepair::formats::graph_from_json(&text).expect("fixture parses")
}

pub fn fixture_constraints(name: &str) -> ConstraintSet {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    ConstraintSet::parse(&text).expect("fixture parses")
}

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
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..5) {
            0 => PathExpr::Epsilon,
            1 => PathExpr::Wildcard,
            2 => PathExpr::inverse(*labels.choose(rng).unwrap()),
            _ => PathExpr::label(*labels.choose(rng).unwrap()),
        };
    }
    let max = if positive_only { 6 } else { 8 };
    match rng.gen_range(0..max) {
        0 => random_path_expr(rng, depth - 1, labels, values, positive_only)
            .concat(random_path_expr(rng, depth - 1, labels, values, positive_only)),
        1 => random_path_expr(rng, depth - 1, labels, values, positive_only)
            .union(random_path_expr(rng, depth - 1, labels, values, positive_only)),
        2 => random_path_expr(rng, depth - 1, labels, values, positive_only)
            .intersect(random_path_expr(rng, depth - 1, labels, values, positive_only)),
        3 => random_path_expr(rng, depth - 1, labels, values, positive_only).star(),
        4 => PathExpr::node_test(random_node_expr(rng, depth - 1, labels, values, positive_only)),
        5 => {
            let lo = rng.gen_range(0..3u32);
            let hi = lo + rng.gen_range(0..3u32);
            random_path_expr(rng, depth - 1, labels, values, positive_only).repeat(lo, hi)
        }
        _ => random_path_expr(rng, depth - 1, labels, values, positive_only).complement(),
    }
}

pub fn random_node_expr(
    rng: &mut StdRng,
    depth: usize,
    labels: &[&str],
    values: &[&str],
    positive_only: bool,
) -> NodeExpr {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.5) {
            NodeExpr::data_eq(*values.choose(rng).unwrap())
        } else {
            NodeExpr::data_neq(*values.choose(rng).unwrap())
        };
    }
    let max = if positive_only { 5 } else { 6 };
    match rng.gen_range(0..max) {
        0 => random_node_expr(rng, depth - 1, labels, values, positive_only)
            .or(random_node_expr(rng, depth - 1, labels, values, positive_only)),
        1 => random_node_expr(rng, depth - 1, labels, values, positive_only)
            .and(random_node_expr(rng, depth - 1, labels, values, positive_only)),
        2 => NodeExpr::exists(random_path_expr(rng, depth - 1, labels, values, positive_only)),
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

pub fn random_constraints(
    rng: &mut StdRng,
    count: usize,
    depth: usize,
    labels: &[&str],
    values: &[&str],
    positive_only: bool,
) -> ConstraintSet {
    ConstraintSet::new(
        (0..count)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Constraint::Node(random_node_expr(rng, depth, labels, values, positive_only))
                } else {
                    Constraint::Path(random_path_expr(rng, depth, labels, values, positive_only))
                }
            })
            .collect(),
    )
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
    SymbolOrder::try_new(symbols, pairs).expect("acyclic by construction")
}

/// Assignment enumeration: the satisfiability ground truth.
pub fn brute_force_sat(phi: &Cnf3) -> bool {
    let n = phi.num_vars() as usize;
    (0..1u32 << n).any(|mask| {
        let assignment: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        phi.satisfied_by(&assignment)
    })
}

/// The formula corpus: handcrafted seeds (unsatisfiable cores, units,
/// duplicate literals, tautological clauses) plus seeded random draws,
/// at least 200 formulas with up to 5 variables and 6 clauses.
pub fn formula_corpus(seed: u64) -> Vec<Cnf3> {
    let mut corpus = vec![
        Cnf3::new(1, vec![vec![1]]).unwrap(),
        Cnf3::new(1, vec![vec![-1]]).unwrap(),
        Cnf3::new(1, vec![vec![1], vec![-1]]).unwrap(),
        Cnf3::new(1, vec![vec![1, -1, 1]]).unwrap(),
        Cnf3::new(2, vec![vec![1, 2], vec![1, -2], vec![-1, 2], vec![-1, -2]]).unwrap(),
        Cnf3::new(2, vec![vec![1, 1, 1], vec![-1, -1, -1]]).unwrap(),
        Cnf3::new(3, vec![vec![1, 2, 3], vec![-1, -2, -3]]).unwrap(),
        Cnf3::new(
            3,
            vec![
                vec![1, 2, 3],
                vec![1, 2, -3],
                vec![1, -2, 3],
                vec![1, -2, -3],
                vec![-1, 2, 3],
                vec![-1, -2, -3],
            ],
        )
        .unwrap(),
        Cnf3::new(
            4,
            vec![
                vec![1, 2, 2],
                vec![1, -2, -2],
                vec![-1, 2, 2],
                vec![-1, -2, -2],
                vec![3, 4, 3],
                vec![-3, -4, 4],
            ],
        )
        .unwrap(),
        Cnf3::new(
            5,
            vec![
                vec![1, 1, 1],
                vec![-1, -1, -1],
                vec![2, 3, 4],
                vec![5, -5, 1],
                vec![-2, 3, 1],
                vec![4, 5, -3],
            ],
        )
        .unwrap(),
        Cnf3::new(
            5,
            vec![
                vec![1, 2, 2],
                vec![1, -2, -2],
                vec![-1, 2, 2],
                vec![-1, -2, -2],
                vec![3, 4, 5],
                vec![-3, -4, -5],
            ],
        )
        .unwrap(),
        Cnf3::new(5, vec![vec![1, -1, 2], vec![3, 4, 5]]).unwrap(),
    ];
    let mut rng = rng(seed);
    // A sweep over every shape, then extra draws at the largest shapes.
    for n in 1..=5u32 {
        for m in 1..=6usize {
            for _ in 0..2 {
                corpus.push(random_formula(&mut rng, n, m));
            }
        }
    }
    for _ in 0..140 {
        let n = rng.gen_range(3..=5u32);
        let m = rng.gen_range(4..=6usize);
        corpus.push(random_formula(&mut rng, n, m));
    }
    assert!(corpus.len() >= 200);
    corpus
}

fn random_formula(rng: &mut StdRng, n: u32, m: usize) -> Cnf3 {
    let clauses: Vec<Vec<i32>> = (0..m)
        .map(|_| {
            let width = rng.gen_range(1..=3usize);
            let mut lits: Vec<i32> = (0..width)
                .map(|_| {
                    let var = rng.gen_range(1..=n) as i32;
                    if rng.gen_bool(0.5) {
                        var
                    } else {
                        -var
                    }
                })
                .collect();
            // Pad narrow clauses by repetition.
            while lits.len() < 3 {
                lits.push(lits[0]);
            }
            lits
        })
        .collect();
    Cnf3::new(n, clauses).expect("generated clauses are well formed")
}
