//! Hardness instances: encoding 3-CNF formulas as superset-repair
//! problems, and decoding bounded repairs back into assignments.
//!
//! The instance has one node per variable (valued `var`), one per clause
//! (valued `clause`), plus boolean nodes `T` and `F`. Occurrence edges
//! `appears_in` / `appears_negated_in` connect variables to clauses. Two
//! positive node constraints drive the repair: every variable node needs
//! a `value_of` edge to a boolean node, and every clause node needs an
//! occurrence edge from a variable whose `value_of` edge matches the
//! polarity. With `value_of` weighing 1 and everything else 2, the
//! formula is satisfiable exactly when some superset repair stays within
//! weight `w(G) + n`; under the chain order rooted at `value_of`, exactly
//! when some multiset-preferred repair carries at most `n` `value_of`
//! edges.

use crate::datagraph::{
    DataGraph, DataValue, EdgeLabel, NodeId, SymbolOrder, WeightOverflow, WeightSpec,
};
use crate::gxpath::{Constraint, ConstraintSet, NodeExpr, PathExpr};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub const LABEL_VALUE_OF: &str = "value_of";
pub const LABEL_APPEARS_IN: &str = "appears_in";
pub const LABEL_APPEARS_NEGATED_IN: &str = "appears_negated_in";
pub const VALUE_VAR: &str = "var";
pub const VALUE_CLAUSE: &str = "clause";
pub const VALUE_TRUE: &str = "T";
pub const VALUE_FALSE: &str = "F";

/// A 3-CNF formula: clauses of at most three nonzero literals (signed
/// 1-based variable indices; repetition may pad shorter clauses).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf3 {
    num_vars: u32,
    clauses: Vec<Vec<i32>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CnfError {
    EmptyClause(usize),
    TooManyLiterals(usize),
    ZeroLiteral(usize),
    VariableOutOfRange { clause: usize, literal: i32 },
}

impl fmt::Display for CnfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CnfError::EmptyClause(c) => write!(f, "clause {c} is empty"),
            CnfError::TooManyLiterals(c) => write!(f, "clause {c} has more than 3 literals"),
            CnfError::ZeroLiteral(c) => write!(f, "clause {c} contains the literal 0"),
            CnfError::VariableOutOfRange { clause, literal } => {
                write!(f, "clause {clause} mentions {literal}, beyond the declared variables")
            }
        }
    }
}

impl core::error::Error for CnfError {}

impl Cnf3 {
    pub fn new(num_vars: u32, clauses: Vec<Vec<i32>>) -> Result<Self, CnfError> {
        for (i, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(CnfError::EmptyClause(i + 1));
            }
            if clause.len() > 3 {
                return Err(CnfError::TooManyLiterals(i + 1));
            }
            for &lit in clause {
                if lit == 0 {
                    return Err(CnfError::ZeroLiteral(i + 1));
                }
                if lit.unsigned_abs() > num_vars {
                    return Err(CnfError::VariableOutOfRange {
                        clause: i + 1,
                        literal: lit,
                    });
                }
            }
        }
        Ok(Cnf3 { num_vars, clauses })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// Whether `assignment` (true at index i-1 for variable i) satisfies
    /// the formula.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let value = assignment[(lit.unsigned_abs() - 1) as usize];
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        })
    }
}

/// A generated repair instance with its bounds.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub graph: DataGraph,
    pub constraints: ConstraintSet,
    pub weights: WeightSpec,
    pub order: SymbolOrder,
    /// Weight bound: the instance weight plus one unit per variable.
    pub k_w: u64,
    /// Label-count bound for the multiset problem: one `value_of` edge
    /// per variable.
    pub k_mset: u64,
    pub label: EdgeLabel,
    pub num_vars: u32,
    pub num_clauses: u32,
}

fn var_node(i: u32) -> NodeId {
    NodeId::new(format!("x{i}"))
}

fn clause_node(j: u32) -> NodeId {
    NodeId::new(format!("c{j}"))
}

/// The constraint requiring every variable node to carry a boolean
/// `value_of` edge.
pub fn value_assignment_constraint() -> NodeExpr {
    NodeExpr::exists(
        PathExpr::node_test(NodeExpr::data_neq(VALUE_VAR))
            .union(
                PathExpr::label(LABEL_VALUE_OF)
                    .concat(PathExpr::node_test(NodeExpr::data_eq(VALUE_TRUE))),
            )
            .union(
                PathExpr::label(LABEL_VALUE_OF)
                    .concat(PathExpr::node_test(NodeExpr::data_eq(VALUE_FALSE))),
            ),
    )
}

/// The constraint requiring every clause node to be satisfied through a
/// polarity-matching occurrence edge.
pub fn clause_satisfaction_constraint() -> NodeExpr {
    NodeExpr::exists(
        PathExpr::node_test(NodeExpr::data_neq(VALUE_CLAUSE))
            .union(
                PathExpr::inverse(LABEL_APPEARS_IN)
                    .concat(PathExpr::label(LABEL_VALUE_OF))
                    .concat(PathExpr::node_test(NodeExpr::data_eq(VALUE_TRUE))),
            )
            .union(
                PathExpr::inverse(LABEL_APPEARS_NEGATED_IN)
                    .concat(PathExpr::label(LABEL_VALUE_OF))
                    .concat(PathExpr::node_test(NodeExpr::data_eq(VALUE_FALSE))),
            ),
    )
}

/// Builds the repair instance for a formula.
pub fn encode(phi: &Cnf3) -> Result<ReductionInstance, WeightOverflow> {
    let mut graph = DataGraph::empty();
    for i in 1..=phi.num_vars {
        graph
            .add_node(var_node(i), DataValue::new(VALUE_VAR))
            .expect("variable ids are distinct");
    }
    for j in 1..=phi.clauses.len() as u32 {
        graph
            .add_node(clause_node(j), DataValue::new(VALUE_CLAUSE))
            .expect("clause ids are distinct");
    }
    graph
        .add_node(NodeId::new(VALUE_TRUE), DataValue::new(VALUE_TRUE))
        .expect("unique");
    graph
        .add_node(NodeId::new(VALUE_FALSE), DataValue::new(VALUE_FALSE))
        .expect("unique");
    for (j, clause) in phi.clauses.iter().enumerate() {
        let cj = clause_node(j as u32 + 1);
        let mut seen: BTreeMap<(u32, bool), ()> = BTreeMap::new();
        for &lit in clause {
            let var = lit.unsigned_abs();
            let negated = lit < 0;
            if seen.insert((var, negated), ()).is_some() {
                continue; // padding by repetition adds no edge
            }
            let label = if negated {
                EdgeLabel::new(LABEL_APPEARS_NEGATED_IN)
            } else {
                EdgeLabel::new(LABEL_APPEARS_IN)
            };
            graph
                .add_edge(var_node(var), cj.clone(), label)
                .expect("occurrence edges are deduplicated");
        }
    }

    let constraints = ConstraintSet::new(alloc::vec![
        Constraint::Node(value_assignment_constraint()),
        Constraint::Node(clause_satisfaction_constraint()),
    ]);

    // value_of weighs 1; occurrence labels and every data value weigh 2.
    let weights = WeightSpec {
        edge_weights: [
            (EdgeLabel::new(LABEL_VALUE_OF), 1),
            (EdgeLabel::new(LABEL_APPEARS_IN), 2),
            (EdgeLabel::new(LABEL_APPEARS_NEGATED_IN), 2),
        ]
        .into_iter()
        .collect(),
        data_weights: BTreeMap::new(),
        default_edge: 2,
        default_data: 2,
    };

    let order = SymbolOrder::chain(
        [
            LABEL_VALUE_OF,
            LABEL_APPEARS_IN,
            LABEL_APPEARS_NEGATED_IN,
            VALUE_CLAUSE,
            VALUE_VAR,
            VALUE_TRUE,
            VALUE_FALSE,
        ]
        .into_iter()
        .map(String::from),
    )
    .expect("the chain has distinct symbols");

    let base_weight = weights.weight_of(&graph)?;
    Ok(ReductionInstance {
        graph,
        constraints,
        weights,
        order,
        k_w: base_weight + u64::from(phi.num_vars),
        k_mset: u64::from(phi.num_vars),
        label: EdgeLabel::new(LABEL_VALUE_OF),
        num_vars: phi.num_vars,
        num_clauses: phi.clauses.len() as u32,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeError {
    /// The candidate is not a superset of the instance graph.
    NotASuperset,
    /// The candidate added a node.
    ExtraNode(NodeId),
    /// The candidate added an edge other than a boolean `value_of` edge
    /// out of a variable node.
    ExtraEdge(NodeId, NodeId, EdgeLabel),
    /// A variable node carries no added `value_of` edge, or two.
    NotAnAssignment(NodeId),
}

impl fmt::Display for DecodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeError::NotASuperset => f.write_str("repair is not a superset of the instance"),
            DecodeError::ExtraNode(n) => write!(f, "repair adds node {n}"),
            DecodeError::ExtraEdge(a, b, l) => {
                write!(f, "repair adds a non-assignment edge ({a}, {l}, {b})")
            }
            DecodeError::NotAnAssignment(n) => {
                write!(f, "variable {n} does not carry exactly one value edge")
            }
        }
    }
}

impl core::error::Error for DecodeError {}

/// Reads the assignment off a weight-bounded repair: such a repair is
/// the instance plus exactly one boolean `value_of` edge per variable.
pub fn decode(
    instance: &ReductionInstance,
    repair: &DataGraph,
) -> Result<BTreeMap<u32, bool>, DecodeError> {
    if !crate::datagraph::is_subgraph(&instance.graph, repair) {
        return Err(DecodeError::NotASuperset);
    }
    for (id, _) in repair.iter_nodes() {
        if !instance.graph.contains_node(id) {
            return Err(DecodeError::ExtraNode(id.clone()));
        }
    }
    let value_of = EdgeLabel::new(LABEL_VALUE_OF);
    let mut assignment: BTreeMap<u32, bool> = BTreeMap::new();
    for (from, to, label) in repair.iter_edges() {
        if instance.graph.has_edge(from, to, label) {
            continue;
        }
        let var = from
            .as_str()
            .strip_prefix('x')
            .and_then(|d| d.parse::<u32>().ok())
            .filter(|&i| 1 <= i && i <= instance.num_vars);
        let value = match to.as_str() {
            VALUE_TRUE => Some(true),
            VALUE_FALSE => Some(false),
            _ => None,
        };
        match (var, value) {
            (Some(i), Some(v)) if *label == value_of => {
                if assignment.insert(i, v).is_some() {
                    return Err(DecodeError::NotAnAssignment(from.clone()));
                }
            }
            _ => return Err(DecodeError::ExtraEdge(from.clone(), to.clone(), label.clone())),
        }
    }
    for i in 1..=instance.num_vars {
        if !assignment.contains_key(&i) {
            return Err(DecodeError::NotAnAssignment(var_node(i)));
        }
    }
    Ok(assignment)
}
