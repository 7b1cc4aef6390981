//! Deciding whether a graph satisfies a constraint set, with violation
//! witnesses.
//!
//! A node constraint is satisfied when its denotation is all of V; a
//! path constraint when its denotation is all of V × V. Witnesses are
//! enumerated exhaustively in node-id order so output is reproducible;
//! [`check_first`] stops at the first violation for callers that only
//! need the verdict.

use crate::datagraph::{DataGraph, NodeId};
use crate::eval::Evaluator;
use crate::gxpath::{Constraint, ConstraintSet};
use alloc::vec::Vec;
use core::fmt;

/// What falsifies a constraint: a node (node constraints) or an ordered
/// node pair (path constraints).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Witness {
    Node(NodeId),
    Pair(NodeId, NodeId),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Node(v) => write!(f, "{v}"),
            Witness::Pair(v, w) => write!(f, "({v}, {w})"),
        }
    }
}

/// One failed constraint instance: the constraint's index in the set
/// plus a witness that falsifies it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub constraint: usize,
    pub witness: Witness,
}

/// Result of a consistency check. `consistent` holds exactly when
/// `violations` is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub consistent: bool,
    pub violations: Vec<Violation>,
}

impl Verdict {
    fn from_violations(violations: Vec<Violation>) -> Self {
        Verdict {
            consistent: violations.is_empty(),
            violations,
        }
    }
}

fn violations_of(
    ev: &mut Evaluator<'_>,
    idx: usize,
    constraint: &Constraint,
    first_only: bool,
    out: &mut Vec<Violation>,
) {
    match constraint {
        Constraint::Node(expr) => {
            let sat = ev.node_bits(expr);
            let bad = sat.complement();
            for i in bad.iter_ones() {
                out.push(Violation {
                    constraint: idx,
                    witness: Witness::Node(ev.node_id(i).clone()),
                });
                if first_only {
                    return;
                }
            }
        }
        Constraint::Path(expr) => {
            let rel = ev.path_bits(expr);
            let bad = rel.complement();
            for (i, j) in bad.iter_pairs() {
                out.push(Violation {
                    constraint: idx,
                    witness: Witness::Pair(ev.node_id(i).clone(), ev.node_id(j).clone()),
                });
                if first_only {
                    return;
                }
            }
        }
    }
}

/// Witnesses falsifying one constraint, in deterministic order. Lets
/// callers distribute constraints across workers and merge verdicts by
/// index.
pub fn constraint_witnesses(g: &DataGraph, constraint: &Constraint) -> Vec<Witness> {
    let mut ev = Evaluator::new(g);
    let mut out = Vec::new();
    violations_of(&mut ev, 0, constraint, false, &mut out);
    out.into_iter().map(|v| v.witness).collect()
}

/// Checks every constraint and reports every violation, ordered by
/// constraint index and then witness.
pub fn check(g: &DataGraph, r: &ConstraintSet) -> Verdict {
    let mut ev = Evaluator::new(g);
    let mut violations = Vec::new();
    for (idx, c) in r.iter().enumerate() {
        violations_of(&mut ev, idx, c, false, &mut violations);
    }
    Verdict::from_violations(violations)
}

/// Stops at the first violating constraint and reports one witness.
pub fn check_first(g: &DataGraph, r: &ConstraintSet) -> Verdict {
    let mut ev = Evaluator::new(g);
    let mut violations = Vec::new();
    for (idx, c) in r.iter().enumerate() {
        violations_of(&mut ev, idx, c, true, &mut violations);
        if !violations.is_empty() {
            break;
        }
    }
    Verdict::from_violations(violations)
}

/// The bare verdict, with no witness materialization beyond the first.
pub fn is_consistent(g: &DataGraph, r: &ConstraintSet) -> bool {
    let mut ev = Evaluator::new(g);
    r.iter().all(|c| match c {
        Constraint::Node(expr) => ev.node_bits(expr).complement().is_empty(),
        Constraint::Path(expr) => ev.path_bits(expr).is_full(),
    })
}
