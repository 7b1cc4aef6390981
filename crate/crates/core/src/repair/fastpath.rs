//! Polynomial subset repair for positive node constraints.
//!
//! With node constraints free of negation, a node's membership in a
//! constraint's denotation only shrinks when graph elements are removed,
//! and removing edges never helps a violating node. The unique maximal
//! consistent subgraph is therefore the greatest fixpoint of "keep the
//! nodes that satisfy every constraint in the graph induced by the kept
//! nodes": iteratively deleting every violating node (with its incident
//! edges) converges to it. Every consistent subgraph embeds into the
//! result, which is what makes the repair unique and criterion-free.

use crate::consistency::{check, Witness};
use crate::datagraph::{DataGraph, NodeId};
use crate::gxpath::ConstraintSet;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

/// The unique subset repair for an all-positive-node constraint set.
/// `explored` counts fixpoint iterations (each evaluates the whole set).
pub(crate) fn positive_node_unique_subset_repair(
    g: &DataGraph,
    r: &ConstraintSet,
    explored: &mut u64,
) -> DataGraph {
    debug_assert!(r.all_positive_node());
    let mut current = g.clone();
    loop {
        *explored += 1;
        let verdict = check(&current, r);
        if verdict.consistent {
            return current;
        }
        let violating: BTreeSet<NodeId> = verdict
            .violations
            .into_iter()
            .map(|v| match v.witness {
                Witness::Node(id) => id,
                Witness::Pair(..) => unreachable!("node constraints have node witnesses"),
            })
            .collect();
        for id in &violating {
            current.remove_node(id);
        }
    }
}

/// All nodes ever deleted by the fixpoint, in deletion order per round.
/// Exposed for diagnostics in the repair result.
#[allow(dead_code)]
pub(crate) fn deleted_nodes(g: &DataGraph, repair: &DataGraph) -> Vec<NodeId> {
    g.iter_nodes()
        .filter(|(id, _)| !repair.contains_node(id))
        .map(|(id, _)| id.clone())
        .collect()
}
