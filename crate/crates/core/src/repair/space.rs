//! Candidate spaces for the two repair directions.
//!
//! A subset search deletes *elements* of the input graph: nodes (taking
//! their incident edges along) and individual edge triples. A superset
//! search adds elements from a bounded candidate pool: missing labeled
//! edges over the active nodes, plus up to a budgeted number of fresh
//! nodes whose data values come from the configured domain. Every
//! candidate graph corresponds to exactly one closed atom set, which
//! keeps enumeration duplicate-free.

use super::bits::AtomBits;
use super::{RepairError, SearchBudget};
use crate::datagraph::{
    DataGraph, DataValue, EdgeLabel, NodeId, Symbol, WeightOverflow, WeightSpec,
};
use crate::gxpath::ConstraintSet;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

/// One deletable element of the input graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum SubsetAtom {
    Node(NodeId, DataValue),
    Edge(NodeId, NodeId, EdgeLabel),
}

pub(crate) struct SubsetSpace {
    base: DataGraph,
    atoms: Vec<SubsetAtom>,
    /// For node atoms: the indices of their incident edge atoms.
    incident: Vec<Vec<usize>>,
    node_atoms: usize,
}

impl SubsetSpace {
    pub(crate) fn new(g: &DataGraph) -> Self {
        let mut atoms: Vec<SubsetAtom> = g
            .iter_nodes()
            .map(|(id, data)| SubsetAtom::Node(id.clone(), data.clone()))
            .collect();
        let node_atoms = atoms.len();
        let mut edge_index_of: BTreeMap<(NodeId, NodeId, EdgeLabel), usize> = BTreeMap::new();
        for (from, to, label) in g.iter_edges() {
            edge_index_of.insert((from.clone(), to.clone(), label.clone()), atoms.len());
            atoms.push(SubsetAtom::Edge(from.clone(), to.clone(), label.clone()));
        }
        let mut incident = Vec::with_capacity(node_atoms);
        for atom in &atoms[..node_atoms] {
            let SubsetAtom::Node(id, _) = atom else {
                unreachable!()
            };
            let touching: Vec<usize> = edge_index_of
                .iter()
                .filter(|((from, to, _), _)| from == id || to == id)
                .map(|(_, &idx)| idx)
                .collect();
            incident.push(touching);
        }
        SubsetSpace {
            base: g.clone(),
            atoms,
            incident,
            node_atoms,
        }
    }

    pub(crate) fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// A deletion set is closed when deleting a node also deletes its
    /// incident edges.
    pub(crate) fn is_closed(&self, deleted: &AtomBits) -> bool {
        (0..self.node_atoms).all(|i| {
            !deleted.contains(i) || self.incident[i].iter().all(|&e| deleted.contains(e))
        })
    }

    /// Extends a deletion set to its closure.
    #[cfg(test)]
    pub(crate) fn close(&self, deleted: &AtomBits) -> AtomBits {
        let mut out = deleted.clone();
        for i in 0..self.node_atoms {
            if out.contains(i) {
                for &e in &self.incident[i] {
                    out.insert(e);
                }
            }
        }
        out
    }

    pub(crate) fn apply(&self, deleted: &AtomBits) -> DataGraph {
        debug_assert!(self.is_closed(deleted));
        let mut g = self.base.clone();
        for idx in deleted.iter_ones() {
            match &self.atoms[idx] {
                SubsetAtom::Node(id, _) => g.remove_node(id),
                SubsetAtom::Edge(from, to, label) => g.remove_edge(from, to, label),
            }
        }
        g
    }

    pub(crate) fn delta_weight(
        &self,
        deleted: &AtomBits,
        w: &WeightSpec,
    ) -> Result<u64, WeightOverflow> {
        let mut total: u64 = 0;
        for idx in deleted.iter_ones() {
            let aw = match &self.atoms[idx] {
                SubsetAtom::Node(_, data) => w.data_weight(data),
                SubsetAtom::Edge(_, _, label) => w.edge_weight(label),
            };
            total = total.checked_add(aw).ok_or(WeightOverflow)?;
        }
        Ok(total)
    }
}

/// One addable element: a missing labeled edge, or a fresh node bound to
/// one data value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum AddAtom {
    FreshNode(NodeId, DataValue),
    Edge(NodeId, NodeId, EdgeLabel),
}

pub(crate) struct SupersetSpace {
    base: DataGraph,
    atoms: Vec<AddAtom>,
    /// Number of leading fresh-node atoms.
    fresh_atoms: usize,
    /// Fresh-node atoms grouped by fresh node id (each group lists atom
    /// indices bearing the alternative data values).
    fresh_groups: Vec<Vec<usize>>,
    /// For each edge atom: the fresh node ids (as group indices) it
    /// touches.
    edge_requires: Vec<Vec<usize>>,
    /// Lookup from (from, to, label) to edge atom index, over node
    /// indices of the base graph only (used by the guided search, which
    /// runs without fresh nodes).
    edge_atom_by_base: BTreeMap<(usize, usize, EdgeLabel), usize>,
    labels: Vec<EdgeLabel>,
}

impl SupersetSpace {
    /// Builds the candidate pool for `g` under `budget`: labels are
    /// those of the graph and the constraints, fresh-node values come
    /// from the budget's data domain (the active domain by default), and
    /// candidate edges are every missing labeled pair over existing plus
    /// fresh nodes. Errors when the pool exceeds the configured cap.
    pub(crate) fn new(
        g: &DataGraph,
        r: &ConstraintSet,
        budget: &SearchBudget,
    ) -> Result<Self, RepairError> {
        let mut labels: BTreeSet<EdgeLabel> = g.edge_labels();
        labels.extend(r.edge_labels());

        let mut fresh_values: BTreeSet<DataValue> = match &budget.data_domain {
            super::DataDomain::Active => {
                let mut values = g.data_values();
                values.extend(r.data_constants());
                values
            }
            super::DataDomain::Explicit(values) => values.iter().cloned().collect(),
        };
        if budget.max_new_nodes > 0 && fresh_values.is_empty() {
            // A node must hold some value; give the domain one default.
            fresh_values.insert(DataValue::new("fresh"));
        }

        let mut fresh_ids: Vec<NodeId> = Vec::new();
        for i in 1..=budget.max_new_nodes {
            let mut candidate = format!("new{i}");
            while g.contains_node(&NodeId::new(candidate.clone())) {
                candidate.push('_');
            }
            fresh_ids.push(NodeId::new(candidate));
        }

        let mut atoms: Vec<AddAtom> = Vec::new();
        let mut fresh_groups: Vec<Vec<usize>> = Vec::new();
        for id in &fresh_ids {
            let group: Vec<usize> = fresh_values
                .iter()
                .map(|v| {
                    atoms.push(AddAtom::FreshNode(id.clone(), v.clone()));
                    atoms.len() - 1
                })
                .collect();
            fresh_groups.push(group);
        }
        let fresh_atoms = atoms.len();

        let base_node_ids: Vec<NodeId> = g.iter_nodes().map(|(id, _)| id.clone()).collect();
        let mut universe: Vec<(NodeId, Option<usize>)> = base_node_ids
            .iter()
            .map(|id| (id.clone(), None))
            .collect();
        universe.extend(
            fresh_ids
                .iter()
                .enumerate()
                .map(|(gi, id)| (id.clone(), Some(gi))),
        );

        let mut edge_requires: Vec<Vec<usize>> = Vec::new();
        let mut edge_atom_by_base = BTreeMap::new();
        for (fi, (from, fg)) in universe.iter().enumerate() {
            for (ti, (to, tg)) in universe.iter().enumerate() {
                for label in &labels {
                    if g.has_edge(from, to, label) {
                        continue;
                    }
                    let mut requires = Vec::new();
                    requires.extend(fg.iter());
                    if tg != fg {
                        requires.extend(tg.iter());
                    }
                    if fg.is_none() && tg.is_none() {
                        edge_atom_by_base.insert((fi, ti, label.clone()), atoms.len());
                    }
                    edge_requires.push(requires);
                    atoms.push(AddAtom::Edge(from.clone(), to.clone(), label.clone()));
                }
            }
        }

        if let Some(cap) = budget.max_candidate_edges {
            let candidate_edges = atoms.len() - fresh_atoms;
            if candidate_edges > cap {
                return Err(RepairError::BudgetExceeded(format!(
                    "candidate space has {candidate_edges} edges, cap is {cap}"
                )));
            }
        }

        Ok(SupersetSpace {
            base: g.clone(),
            atoms,
            fresh_atoms,
            fresh_groups,
            edge_requires,
            edge_atom_by_base,
            labels: labels.into_iter().collect(),
        })
    }

    pub(crate) fn base(&self) -> &DataGraph {
        &self.base
    }

    pub(crate) fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub(crate) fn has_fresh(&self) -> bool {
        self.fresh_atoms > 0
    }

    /// Valid addition sets bind each fresh node to at most one value and
    /// only use edges whose fresh endpoints are present.
    pub(crate) fn is_valid(&self, added: &AtomBits) -> bool {
        for group in &self.fresh_groups {
            if group.iter().filter(|&&i| added.contains(i)).count() > 1 {
                return false;
            }
        }
        for idx in added.iter_ones() {
            if idx >= self.fresh_atoms {
                let needs = &self.edge_requires[idx - self.fresh_atoms];
                for &gi in needs {
                    if !self.fresh_groups[gi].iter().any(|&i| added.contains(i)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub(crate) fn apply(&self, added: &AtomBits) -> DataGraph {
        debug_assert!(self.is_valid(added));
        let mut g = self.base.clone();
        for idx in added.iter_ones() {
            if let AddAtom::FreshNode(id, value) = &self.atoms[idx] {
                g.add_node(id.clone(), value.clone())
                    .expect("fresh node ids are unique");
            }
        }
        for idx in added.iter_ones() {
            if let AddAtom::Edge(from, to, label) = &self.atoms[idx] {
                g.add_edge(from.clone(), to.clone(), label.clone())
                    .expect("candidate edges are absent from the base graph");
            }
        }
        g
    }

    pub(crate) fn delta_weight(
        &self,
        added: &AtomBits,
        w: &WeightSpec,
    ) -> Result<u64, WeightOverflow> {
        let mut total: u64 = 0;
        for idx in added.iter_ones() {
            let aw = match &self.atoms[idx] {
                AddAtom::FreshNode(_, value) => w.data_weight(value),
                AddAtom::Edge(_, _, label) => w.edge_weight(label),
            };
            total = total.checked_add(aw).ok_or(WeightOverflow)?;
        }
        Ok(total)
    }

    /// The multiset of symbols an addition set contributes.
    pub(crate) fn delta_counts(&self, added: &AtomBits) -> BTreeMap<Symbol, u64> {
        let mut counts: BTreeMap<Symbol, u64> = BTreeMap::new();
        for idx in added.iter_ones() {
            let sym = match &self.atoms[idx] {
                AddAtom::FreshNode(_, value) => Symbol::Data(value.clone()),
                AddAtom::Edge(_, _, label) => Symbol::Edge(label.clone()),
            };
            *counts.entry(sym).or_insert(0) += 1;
        }
        counts
    }

    /// Number of added edges carrying `label`.
    pub(crate) fn delta_label_count(&self, added: &AtomBits, label: &EdgeLabel) -> u64 {
        added
            .iter_ones()
            .filter(|&idx| matches!(&self.atoms[idx], AddAtom::Edge(_, _, l) if l == label))
            .count() as u64
    }

    #[cfg(test)]
    pub(crate) fn atom(&self, idx: usize) -> &AddAtom {
        &self.atoms[idx]
    }

    /// The multiset symbol an atom contributes.
    pub(crate) fn atom_symbol(&self, idx: usize) -> Symbol {
        match &self.atoms[idx] {
            AddAtom::FreshNode(_, value) => Symbol::Data(value.clone()),
            AddAtom::Edge(_, _, label) => Symbol::Edge(label.clone()),
        }
    }

    /// One representative atom per distinct symbol in the pool.
    pub(crate) fn symbol_representatives(&self) -> Vec<(Symbol, usize)> {
        let mut reps: BTreeMap<Symbol, usize> = BTreeMap::new();
        for idx in 0..self.atoms.len() {
            reps.entry(self.atom_symbol(idx)).or_insert(idx);
        }
        reps.into_iter().collect()
    }

    /// Edge atom index for base-node endpoints given as evaluator node
    /// indices (base nodes sorted by id, matching [`Evaluator`] order).
    pub(crate) fn edge_atom(&self, from: usize, to: usize, label: &EdgeLabel) -> Option<usize> {
        self.edge_atom_by_base
            .get(&(from, to, label.clone()))
            .copied()
    }

    /// The active edge alphabet of the pool.
    pub(crate) fn labels(&self) -> &[EdgeLabel] {
        &self.labels
    }

    /// The full candidate graph: every atom applied, with each fresh
    /// node bound to its first domain value. Used for the monotone
    /// existence probe.
    pub(crate) fn saturated_set(&self) -> AtomBits {
        let mut set = AtomBits::empty(self.atom_count());
        for group in &self.fresh_groups {
            if let Some(&first) = group.first() {
                set.insert(first);
            }
        }
        for idx in self.fresh_atoms..self.atom_count() {
            set.insert(idx);
        }
        // Edges between fresh nodes whose chosen value atom differs from
        // the first are still valid: requirements name groups, not atoms.
        debug_assert!(self.is_valid(&set));
        set
    }

}
