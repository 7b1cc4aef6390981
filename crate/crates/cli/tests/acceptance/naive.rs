//! Independent reference evaluator: a literal transcription of the
//! denotation table over plain sorted sets. No sharing with the engine's
//! bit-matrix evaluator, no memoization; used only to cross-check it.

use gxrepair_core::datagraph::{DataGraph, NodeId};
use gxrepair_core::gxpath::{NodeExpr, PathExpr};
use std::collections::BTreeSet;

pub type Pairs = BTreeSet<(NodeId, NodeId)>;
pub type Nodes = BTreeSet<NodeId>;

fn all_nodes(g: &DataGraph) -> Vec<NodeId> {
    g.iter_nodes().map(|(id, _)| id.clone()).collect()
}

fn compose(a: &Pairs, b: &Pairs) -> Pairs {
    let mut out = Pairs::new();
    for (x, y) in a {
        for (y2, z) in b {
            if y == y2 {
                out.insert((x.clone(), z.clone()));
            }
        }
    }
    out
}

fn identity(g: &DataGraph) -> Pairs {
    all_nodes(g).into_iter().map(|v| (v.clone(), v)).collect()
}

fn universe(g: &DataGraph) -> Pairs {
    let nodes = all_nodes(g);
    nodes
        .iter()
        .flat_map(|v| nodes.iter().map(move |w| (v.clone(), w.clone())))
        .collect()
}

pub fn eval_path(g: &DataGraph, p: &PathExpr) -> Pairs {
    match p {
        PathExpr::Epsilon => identity(g),
        PathExpr::Wildcard => {
            let mut out = Pairs::new();
            for (from, to, _) in g.iter_edges() {
                out.insert((from.clone(), to.clone()));
            }
            out
        }
        PathExpr::Label(l) => g
            .iter_edges()
            .filter(|(_, _, label)| *label == l)
            .map(|(from, to, _)| (from.clone(), to.clone()))
            .collect(),
        PathExpr::Inverse(l) => g
            .iter_edges()
            .filter(|(_, _, label)| *label == l)
            .map(|(from, to, _)| (to.clone(), from.clone()))
            .collect(),
        PathExpr::Concat(a, b) => compose(&eval_path(g, a), &eval_path(g, b)),
        PathExpr::Union(a, b) => eval_path(g, a).union(&eval_path(g, b)).cloned().collect(),
        PathExpr::Intersect(a, b) => eval_path(g, a)
            .intersection(&eval_path(g, b))
            .cloned()
            .collect(),
        PathExpr::Star(a) => {
            let step = eval_path(g, a);
            let mut closure = identity(g);
            loop {
                let mut next = closure.clone();
                next.extend(compose(&closure, &step));
                if next == closure {
                    return closure;
                }
                closure = next;
            }
        }
        PathExpr::Complement(a) => universe(g).difference(&eval_path(g, a)).cloned().collect(),
        PathExpr::NodeTest(n) => eval_node(g, n)
            .into_iter()
            .map(|v| (v.clone(), v))
            .collect(),
        PathExpr::Repeat(a, low, high) => {
            let step = eval_path(g, a);
            let mut power = identity(g);
            let mut out = Pairs::new();
            for k in 0..=*high {
                if k >= *low {
                    out.extend(power.iter().cloned());
                }
                if k < *high {
                    power = compose(&power, &step);
                }
            }
            out
        }
    }
}

pub fn eval_node(g: &DataGraph, e: &NodeExpr) -> Nodes {
    match e {
        NodeExpr::DataEq(c) => g
            .iter_nodes()
            .filter(|(_, data)| *data == c)
            .map(|(id, _)| id.clone())
            .collect(),
        NodeExpr::DataNeq(c) => g
            .iter_nodes()
            .filter(|(_, data)| *data != c)
            .map(|(id, _)| id.clone())
            .collect(),
        NodeExpr::Not(a) => {
            let sat = eval_node(g, a);
            all_nodes(g).into_iter().filter(|v| !sat.contains(v)).collect()
        }
        NodeExpr::Or(a, b) => eval_node(g, a).union(&eval_node(g, b)).cloned().collect(),
        NodeExpr::And(a, b) => eval_node(g, a)
            .intersection(&eval_node(g, b))
            .cloned()
            .collect(),
        NodeExpr::Exists(p) => eval_path(g, p).into_iter().map(|(v, _)| v).collect(),
        NodeExpr::ExistsEq(a, b) => data_join(g, a, b, true),
        NodeExpr::ExistsNeq(a, b) => data_join(g, a, b, false),
    }
}

fn data_join(g: &DataGraph, a: &PathExpr, b: &PathExpr, equal: bool) -> Nodes {
    let ra = eval_path(g, a);
    let rb = eval_path(g, b);
    let mut out = Nodes::new();
    for v in all_nodes(g) {
        'search: for (x, u) in &ra {
            if *x != v {
                continue;
            }
            for (y, w) in &rb {
                if *y != v {
                    continue;
                }
                let du = g.data(u).expect("target exists");
                let dw = g.data(w).expect("target exists");
                if (du == dw) == equal {
                    out.insert(v.clone());
                    break 'search;
                }
            }
        }
    }
    out
}
