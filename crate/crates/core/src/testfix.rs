//! Hand-built example graphs shared by the unit tests: a small film
//! catalog and a four-node network with two connection qualities.

use crate::datagraph::{DataGraph, DataValue, EdgeLabel, NodeId, SymbolOrder, WeightSpec};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

fn graph(nodes: &[(&str, &str)], edges: &[(&str, &str, &str)]) -> DataGraph {
    DataGraph::from_parts(
        nodes
            .iter()
            .map(|(id, data)| (NodeId::new(*id), DataValue::new(*data)))
            .collect::<Vec<_>>(),
        edges
            .iter()
            .map(|(f, t, l)| (NodeId::new(*f), NodeId::new(*t), EdgeLabel::new(*l)))
            .collect::<Vec<_>>(),
    )
    .expect("fixture graph is well formed")
}

/// Film catalog: people, two films, type tags.
pub fn film() -> DataGraph {
    graph(
        &[
            ("Actor", "Actor"),
            ("Anderson", "Anderson"),
            ("Babylon", "Babylon"),
            ("Chazelle", "Chazelle"),
            ("Film", "Film"),
            ("Hoffman", "Hoffman"),
            ("Phoenix", "Joaquin Phoenix"),
            ("Robbie", "Margot Robbie"),
            ("TheMaster", "The Master"),
        ],
        &[
            ("Hoffman", "Actor", "type"),
            ("Phoenix", "Actor", "type"),
            ("Robbie", "Actor", "type"),
            ("Phoenix", "TheMaster", "acts_in"),
            ("Hoffman", "TheMaster", "acts_in"),
            ("TheMaster", "Anderson", "directed_by"),
            ("Babylon", "Chazelle", "directed_by"),
            ("Robbie", "Babylon", "acts_in"),
            ("Babylon", "Film", "type"),
            ("TheMaster", "Film", "type"),
        ],
    )
}

/// The film constraint: everyone typed as an actor must have acted with
/// Hoffman in a film directed by Anderson.
pub fn film_constraint_text() -> &'static str {
    r#"<type.[="Actor"]> => <acts_in.[<directed_by.[="Anderson"]>].acts_in^-.[="Hoffman"]>"#
}

/// Network with a missing entry into `b` and a double-low path `c -> e`.
pub fn fig3a() -> DataGraph {
    graph(
        &[("b", "b"), ("c", "c"), ("d", "d"), ("e", "e")],
        &[
            ("b", "c", "low"),
            ("e", "c", "high"),
            ("c", "d", "low"),
            ("b", "d", "high"),
            ("d", "e", "low"),
        ],
    )
}

/// fig3a plus {low b->b, high c->e, low c->b}; extra weight 7.
pub fn fig3b() -> DataGraph {
    graph(
        &[("b", "b"), ("c", "c"), ("d", "d"), ("e", "e")],
        &[
            ("b", "c", "low"),
            ("e", "c", "high"),
            ("c", "d", "low"),
            ("b", "d", "high"),
            ("d", "e", "low"),
            ("b", "b", "low"),
            ("c", "e", "high"),
            ("c", "b", "low"),
        ],
    )
}

/// fig3a plus {low b->b, low c->e, low c->b}; extra weight 3.
pub fn fig3c() -> DataGraph {
    graph(
        &[("b", "b"), ("c", "c"), ("d", "d"), ("e", "e")],
        &[
            ("b", "c", "low"),
            ("e", "c", "high"),
            ("c", "d", "low"),
            ("b", "d", "high"),
            ("d", "e", "low"),
            ("b", "b", "low"),
            ("c", "e", "low"),
            ("c", "b", "low"),
        ],
    )
}

/// Directed connectivity plus "two lows imply a good path".
pub fn network_constraints_text() -> &'static str {
    "path: _*\npath: low.low => high.low + low.high + high.high + high + low\n"
}

/// Node cost 20, low edges 1, high edges 5.
pub fn ex3_weights() -> WeightSpec {
    WeightSpec {
        edge_weights: [
            (EdgeLabel::new("low"), 1),
            (EdgeLabel::new("high"), 5),
        ]
        .into_iter()
        .collect(),
        data_weights: Default::default(),
        default_edge: 1,
        default_data: 20,
    }
}

/// low > high: the order prefers trading low edges away.
pub fn ex4_order() -> SymbolOrder {
    SymbolOrder::try_new(
        vec![String::from("high"), String::from("low")],
        vec![(String::from("high"), String::from("low"))],
    )
    .expect("valid order")
}
