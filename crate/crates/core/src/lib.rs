//! Core engine for data-graph integrity constraints and repairs.
//!
//! A *data-graph* is a directed graph whose edges carry labels and whose
//! nodes each hold a single data value. Constraints over a data-graph are
//! written in a navigational expression language with two sorts:
//!
//! * **path expressions** denote sets of node pairs (regular operators,
//!   inverses, complement, node tests, bounded repetition), and
//! * **node expressions** denote sets of nodes (data tests, boolean
//!   connectives, existential path tests and data joins).
//!
//! A graph is consistent with a constraint set when every node expression
//! holds at every node and every path expression holds at every ordered
//! node pair. When it is not, the [`repair`] module searches for subset
//! repairs (maximal consistent subgraphs) and superset repairs (minimal
//! consistent supergraphs within a bounded candidate space), optionally
//! ranked by a weight function or by the Dershowitz–Manna multiset
//! ordering over edge labels and data values.
//!
//! The crate is `no_std` (it allocates, but performs no IO); parsing,
//! file formats and the command-line front end live in the companion
//! `gxrepair` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod consistency;
pub mod datagraph;
pub mod eval;
pub mod gxpath;
pub mod reductions;
pub mod repair;

pub use datagraph::{
    graph_less, is_subgraph, multiset_less, Alphabets, DataGraph, DataValue, EdgeLabel,
    GraphMultiset, NodeId, PreferenceCriterion, Symbol, SymbolOrder, WeightSpec,
};
pub use gxpath::{
    classify_node, classify_path, parse_node, parse_path, pretty_node, pretty_path,
    Classification, Constraint, ConstraintSet, Fragment, NodeExpr, PathExpr,
};

#[cfg(test)]
pub(crate) mod testfix;
