//! Violation-guided superset search for positive constraint sets.
//!
//! With no fresh nodes in the pool, positive constraints are monotone
//! under edge additions: an edge can satisfy obligations but never break
//! them. The search exploits this in two ways.
//!
//! First, instead of branching blindly over the whole candidate pool, a
//! state branches over the *minimal fixes* of its first violation: the
//! inclusion-minimal candidate sets whose addition satisfies the
//! violated constraint at the reported witness. Any repair extending the
//! state contains one of them, so the branching is complete. Minimal
//! fixes are computed compositionally: every sub-expression denotes, per
//! node pair, an antichain of candidate sets that would make the pair
//! (or node) match, combined with union for alternatives and pairwise
//! union for conjunctions, keeping only inclusion-minimal sets.
//!
//! Second, monotonicity makes one-step minimization exact: a consistent
//! addition set with no consistent single-removal is minimal outright,
//! because inconsistency is closed downwards.

use super::bits::AtomBits;
use super::space::SupersetSpace;
use super::{EngineLimits, RepairError};
use crate::consistency::{check_first, Witness};
use crate::datagraph::{DataGraph, WeightSpec};
use crate::eval::Evaluator;
use crate::gxpath::{Constraint, ConstraintSet, NodeExpr, PathExpr};
use alloc::collections::{BTreeMap, BTreeSet, BinaryHeap};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

/// Inclusion-minimal candidate sets, kept sorted for determinism. An
/// empty vector means "unachievable"; a vector holding the empty set
/// means "already satisfied".
type Antichain = Vec<AtomBits>;

fn overflow(what: &str) -> RepairError {
    RepairError::SearchOverflow(String::from(what))
}

struct FixCtx<'a> {
    space: &'a SupersetSpace,
    ev: Evaluator<'a>,
    n: usize,
    limits: &'a EngineLimits,
    /// Skip fix sets heavier than the remaining budget.
    weight_prune: Option<(&'a WeightSpec, u64)>,
    /// Restrict fixes to atoms carrying these symbols. A caller whose
    /// prune is hereditary may drop a symbol once a single atom of it
    /// triggers the prune: any fix using the symbol only breeds pruned
    /// children.
    allowed: Option<&'a alloc::collections::BTreeSet<crate::datagraph::Symbol>>,
    path_memo: BTreeMap<PathExpr, Vec<Antichain>>,
    node_memo: BTreeMap<(NodeExpr, usize), Antichain>,
}

impl<'a> FixCtx<'a> {
    fn new(
        space: &'a SupersetSpace,
        graph: &'a DataGraph,
        limits: &'a EngineLimits,
        weight_prune: Option<(&'a WeightSpec, u64)>,
        allowed: Option<&'a alloc::collections::BTreeSet<crate::datagraph::Symbol>>,
    ) -> Self {
        let ev = Evaluator::new(graph);
        let n = ev.node_count();
        FixCtx {
            space,
            ev,
            n,
            limits,
            weight_prune,
            allowed,
            path_memo: BTreeMap::new(),
            node_memo: BTreeMap::new(),
        }
    }

    fn keeps(&self, set: &AtomBits) -> bool {
        if set.count() as usize > self.limits.fix_size_cap {
            return false;
        }
        if let Some((w, remaining)) = self.weight_prune {
            match self.space.delta_weight(set, w) {
                Ok(weight) => weight <= remaining,
                Err(_) => false,
            }
        } else {
            true
        }
    }

    fn minimalize(&self, mut sets: Vec<AtomBits>) -> Result<Antichain, RepairError> {
        sets.sort();
        sets.dedup();
        let mut out: Vec<AtomBits> = Vec::new();
        'outer: for set in sets {
            if !self.keeps(&set) {
                continue;
            }
            for kept in &out {
                if kept.is_subset_of(&set) {
                    continue 'outer;
                }
            }
            out.retain(|kept| !set.is_subset_of(kept));
            out.push(set);
        }
        out.sort();
        if out.len() > self.limits.fix_width_cap {
            return Err(overflow(
                "fix enumeration exceeded its width cap; the constraint set is too \
                 branchy for the guided search",
            ));
        }
        Ok(out)
    }

    fn ac_union(&self, a: &Antichain, b: &Antichain) -> Result<Antichain, RepairError> {
        let mut all = a.clone();
        all.extend(b.iter().cloned());
        self.minimalize(all)
    }

    fn ac_join(&self, a: &Antichain, b: &Antichain) -> Result<Antichain, RepairError> {
        let mut all = Vec::with_capacity(a.len() * b.len());
        for x in a {
            for y in b {
                all.push(x.with_union(y));
            }
        }
        self.minimalize(all)
    }

    fn top(&self) -> Antichain {
        vec![AtomBits::empty(self.space.atom_count())]
    }

    fn mat_identity(&self) -> Vec<Antichain> {
        let mut m = vec![Vec::new(); self.n * self.n];
        for i in 0..self.n {
            m[i * self.n + i] = self.top();
        }
        m
    }

    fn mat_union(&self, a: &[Antichain], b: &[Antichain]) -> Result<Vec<Antichain>, RepairError> {
        a.iter()
            .zip(b)
            .map(|(x, y)| self.ac_union(x, y))
            .collect()
    }

    fn mat_join(&self, a: &[Antichain], b: &[Antichain]) -> Result<Vec<Antichain>, RepairError> {
        a.iter().zip(b).map(|(x, y)| self.ac_join(x, y)).collect()
    }

    fn mat_compose(&self, a: &[Antichain], b: &[Antichain]) -> Result<Vec<Antichain>, RepairError> {
        let n = self.n;
        let mut out = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                if a[i * n + j].is_empty() {
                    continue;
                }
                for k in 0..n {
                    if b[j * n + k].is_empty() {
                        continue;
                    }
                    let through = self.ac_join(&a[i * n + j], &b[j * n + k])?;
                    out[i * n + k] = self.ac_union(&out[i * n + k], &through)?;
                }
            }
        }
        Ok(out)
    }

    /// Exact matrix power in the antichain semiring, with an early stop
    /// once squaring reaches a fixpoint.
    fn mat_pow(&self, m: &[Antichain], mut k: u32) -> Result<Vec<Antichain>, RepairError> {
        let mut result = self.mat_identity();
        let mut base = m.to_vec();
        while k > 0 {
            if k & 1 == 1 {
                result = self.mat_compose(&result, &base)?;
            }
            k >>= 1;
            if k > 0 {
                let squared = self.mat_compose(&base, &base)?;
                if squared == base {
                    return self.mat_compose(&result, &base);
                }
                base = squared;
            }
        }
        Ok(result)
    }

    fn mat_closure(&self, m: &[Antichain]) -> Result<Vec<Antichain>, RepairError> {
        let mut closure = self.mat_union(&self.mat_identity(), m)?;
        loop {
            let next = self.mat_compose(&closure, &closure)?;
            let next = self.mat_union(&closure, &next)?;
            if next == closure {
                return Ok(closure);
            }
            closure = next;
        }
    }

    fn edge_entry(&self, from: usize, to: usize, label: &crate::datagraph::EdgeLabel) -> Antichain {
        if self.ev_graph_has_edge(from, to, label) {
            return self.top();
        }
        if let Some(allowed) = self.allowed {
            if !allowed.contains(&crate::datagraph::Symbol::Edge(label.clone())) {
                return Vec::new();
            }
        }
        match self.space.edge_atom(from, to, label) {
            Some(atom) => {
                let mut set = AtomBits::empty(self.space.atom_count());
                set.insert(atom);
                if self.keeps(&set) {
                    vec![set]
                } else {
                    Vec::new()
                }
            }
            None => Vec::new(),
        }
    }

    fn ev_graph_has_edge(
        &self,
        from: usize,
        to: usize,
        label: &crate::datagraph::EdgeLabel,
    ) -> bool {
        // Present edges include base edges and additions already applied
        // to the state's graph, which the evaluator was built over.
        self.ev
            .graph()
            .has_edge(self.ev.node_id(from), self.ev.node_id(to), label)
    }

    fn path_matrix(&mut self, p: &PathExpr) -> Result<Vec<Antichain>, RepairError> {
        if let Some(hit) = self.path_memo.get(p) {
            return Ok(hit.clone());
        }
        let n = self.n;
        let result = match p {
            PathExpr::Epsilon => self.mat_identity(),
            PathExpr::Wildcard => {
                let mut m = vec![Vec::new(); n * n];
                for i in 0..n {
                    for j in 0..n {
                        let mut options: Vec<AtomBits> = Vec::new();
                        let mut present = false;
                        for label in self.space.labels() {
                            if self.ev_graph_has_edge(i, j, label) {
                                present = true;
                                break;
                            }
                        }
                        if present {
                            m[i * n + j] = self.top();
                            continue;
                        }
                        for label in self.space.labels() {
                            options.extend(self.edge_entry(i, j, label));
                        }
                        m[i * n + j] = self.minimalize(options)?;
                    }
                }
                m
            }
            PathExpr::Label(l) => {
                let mut m = vec![Vec::new(); n * n];
                for i in 0..n {
                    for j in 0..n {
                        m[i * n + j] = self.edge_entry(i, j, l);
                    }
                }
                m
            }
            PathExpr::Inverse(l) => {
                let mut m = vec![Vec::new(); n * n];
                for i in 0..n {
                    for j in 0..n {
                        m[i * n + j] = self.edge_entry(j, i, l);
                    }
                }
                m
            }
            PathExpr::Concat(a, b) => {
                let ma = self.path_matrix(a)?;
                let mb = self.path_matrix(b)?;
                self.mat_compose(&ma, &mb)?
            }
            PathExpr::Union(a, b) => {
                let ma = self.path_matrix(a)?;
                let mb = self.path_matrix(b)?;
                self.mat_union(&ma, &mb)?
            }
            PathExpr::Intersect(a, b) => {
                let ma = self.path_matrix(a)?;
                let mb = self.path_matrix(b)?;
                self.mat_join(&ma, &mb)?
            }
            PathExpr::Star(a) => {
                let ma = self.path_matrix(a)?;
                self.mat_closure(&ma)?
            }
            PathExpr::Repeat(a, low, high) => {
                let ma = self.path_matrix(a)?;
                let ladder = self.mat_union(&self.mat_identity(), &ma)?;
                let lhs = self.mat_pow(&ma, *low)?;
                let rhs = self.mat_pow(&ladder, high.saturating_sub(*low))?;
                self.mat_compose(&lhs, &rhs)?
            }
            PathExpr::NodeTest(inner) => {
                let mut m = vec![Vec::new(); n * n];
                for i in 0..n {
                    m[i * n + i] = self.node_fixes(inner, i)?;
                }
                m
            }
            PathExpr::Complement(_) => {
                unreachable!("guided search runs on positive constraints only")
            }
        };
        self.path_memo.insert(p.clone(), result.clone());
        Ok(result)
    }

    fn node_fixes(&mut self, e: &NodeExpr, v: usize) -> Result<Antichain, RepairError> {
        if let Some(hit) = self.node_memo.get(&(e.clone(), v)) {
            return Ok(hit.clone());
        }
        let n = self.n;
        let result = match e {
            NodeExpr::DataEq(c) => {
                if self.ev.graph().data(self.ev.node_id(v)) == Some(c) {
                    self.top()
                } else {
                    Vec::new()
                }
            }
            NodeExpr::DataNeq(c) => {
                if self.ev.graph().data(self.ev.node_id(v)) != Some(c) {
                    self.top()
                } else {
                    Vec::new()
                }
            }
            NodeExpr::Or(a, b) => {
                let fa = self.node_fixes(a, v)?;
                let fb = self.node_fixes(b, v)?;
                self.ac_union(&fa, &fb)?
            }
            NodeExpr::And(a, b) => {
                let fa = self.node_fixes(a, v)?;
                let fb = self.node_fixes(b, v)?;
                self.ac_join(&fa, &fb)?
            }
            NodeExpr::Exists(p) => {
                let m = self.path_matrix(p)?;
                let mut out: Antichain = Vec::new();
                for w in 0..n {
                    out = self.ac_union(&out, &m[v * n + w])?;
                }
                out
            }
            NodeExpr::ExistsEq(a, b) => self.join_fixes(a, b, v, true)?,
            NodeExpr::ExistsNeq(a, b) => self.join_fixes(a, b, v, false)?,
            NodeExpr::Not(_) => {
                unreachable!("guided search runs on positive constraints only")
            }
        };
        self.node_memo.insert((e.clone(), v), result.clone());
        Ok(result)
    }

    fn join_fixes(
        &mut self,
        a: &PathExpr,
        b: &PathExpr,
        v: usize,
        equal: bool,
    ) -> Result<Antichain, RepairError> {
        let ma = self.path_matrix(a)?;
        let mb = self.path_matrix(b)?;
        let n = self.n;
        let mut out: Antichain = Vec::new();
        for u in 0..n {
            if ma[v * n + u].is_empty() {
                continue;
            }
            for w in 0..n {
                if mb[v * n + w].is_empty() {
                    continue;
                }
                let du = self.ev.graph().data(self.ev.node_id(u));
                let dw = self.ev.graph().data(self.ev.node_id(w));
                if (du == dw) == equal {
                    let joined = self.ac_join(&ma[v * n + u], &mb[v * n + w])?;
                    out = self.ac_union(&out, &joined)?;
                }
            }
        }
        Ok(out)
    }
}

/// Minimal candidate sets fixing one violation of `constraint` at
/// `witness` on `graph` (the space's base plus the current additions).
pub(crate) fn minimal_fixes(
    space: &SupersetSpace,
    graph: &DataGraph,
    constraint: &Constraint,
    witness: &Witness,
    limits: &EngineLimits,
    weight_prune: Option<(&WeightSpec, u64)>,
    allowed: Option<&alloc::collections::BTreeSet<crate::datagraph::Symbol>>,
) -> Result<Antichain, RepairError> {
    let mut ctx = FixCtx::new(space, graph, limits, weight_prune, allowed);
    let fixes = match (constraint, witness) {
        (Constraint::Node(e), Witness::Node(id)) => {
            let v = ctx
                .ev
                .node_index(id)
                .expect("witness node comes from the same graph");
            ctx.node_fixes(e, v)?
        }
        (Constraint::Path(p), Witness::Pair(a, b)) => {
            let ia = ctx.ev.node_index(a).expect("witness node exists");
            let ib = ctx.ev.node_index(b).expect("witness node exists");
            let m = ctx.path_matrix(p)?;
            m[ia * ctx.n + ib].clone()
        }
        _ => unreachable!("witness sort follows the constraint sort"),
    };
    debug_assert!(
        fixes.iter().all(|f| f.count() > 0),
        "a violated obligation cannot have an empty fix"
    );
    Ok(fixes)
}

/// Exact minimization for monotone constraint sets: drop additions
/// chunk-wise (halving chunk sizes), finishing with single-element
/// removals. The final singleton pass makes the result minimal because
/// inconsistency is closed downwards, so removals never re-enable each
/// other; the chunk passes only accelerate large sets.
pub(crate) fn minimize_monotone(
    space: &SupersetSpace,
    r: &ConstraintSet,
    set: &AtomBits,
    explored: &mut u64,
) -> AtomBits {
    let mut current = set.clone();
    let mut chunk = (current.count() as usize / 2).max(1);
    loop {
        let members: Vec<usize> = current.iter_ones().collect();
        let mut start = 0;
        while start < members.len() {
            let slice = &members[start..(start + chunk).min(members.len())];
            let mut without = current.clone();
            for &idx in slice {
                without.remove(idx);
            }
            if space.is_valid(&without) {
                *explored += 1;
                if crate::consistency::is_consistent(&space.apply(&without), r) {
                    current = without;
                }
            }
            start += chunk;
        }
        if chunk == 1 {
            return current;
        }
        chunk = (chunk / 2).max(1);
    }
}

fn first_violation(
    graph: &DataGraph,
    r: &ConstraintSet,
) -> Option<(usize, Witness)> {
    let verdict = check_first(graph, r);
    verdict
        .violations
        .into_iter()
        .next()
        .map(|v| (v.constraint, v.witness))
}

/// Best-first search for the lightest consistent addition sets, guided
/// by minimal fixes. Returns the optimal delta weight and all repairs
/// attaining it, or `None` when no consistent set exists under `bound`.
pub(crate) fn guided_min_weight(
    space: &SupersetSpace,
    r: &ConstraintSet,
    w: &WeightSpec,
    bound: Option<u64>,
    limits: &EngineLimits,
    explored: &mut u64,
) -> Result<Option<(u64, Vec<AtomBits>)>, RepairError> {
    let n = space.atom_count();
    let mut heap: BinaryHeap<Reverse<(u64, u32, AtomBits)>> = BinaryHeap::new();
    let mut visited: BTreeSet<AtomBits> = BTreeSet::new();
    let empty = AtomBits::empty(n);
    visited.insert(empty.clone());
    heap.push(Reverse((0, 0, empty)));
    let mut work: u64 = 0;
    let mut best: Option<u64> = None;
    let mut hits: Vec<AtomBits> = Vec::new();
    while let Some(Reverse((weight, _, set))) = heap.pop() {
        work += 1;
        if work > limits.work_cap {
            return Err(overflow("guided weight search exhausted its work cap"));
        }
        if bound.is_some_and(|b| weight > b) {
            break;
        }
        if let Some(best_weight) = best {
            if weight > best_weight {
                break;
            }
        }
        let graph = space.apply(&set);
        *explored += 1;
        let Some((idx, witness)) = first_violation(&graph, r) else {
            if best.is_none() {
                best = Some(weight);
            }
            if !hits.iter().any(|c| c.is_subset_of(&set)) {
                hits.push(set.clone());
            }
            continue;
        };
        let remaining = match (bound, best) {
            (Some(b), _) => Some(b - weight),
            (None, Some(best_weight)) => Some(best_weight - weight),
            (None, None) => None,
        };
        let weight_prune = remaining.map(|rem| (w, rem));
        let constraint = r.get(idx).expect("violation indexes the constraint set");
        let fixes = minimal_fixes(space, &graph, constraint, &witness, limits, weight_prune, None)?;
        for fix in fixes {
            let child = set.with_union(&fix);
            if !visited.insert(child.clone()) {
                continue;
            }
            let child_weight = space.delta_weight(&child, w).map_err(RepairError::Weight)?;
            if bound.is_some_and(|b| child_weight > b) {
                continue;
            }
            heap.push(Reverse((child_weight, child.count(), child)));
        }
    }
    match best {
        None => Ok(None),
        Some(weight) => {
            // Guided states may carry redundant fixes; minimize and then
            // drop duplicates. Minimization cannot change the weight:
            // the contained repair is itself reachable, so anything
            // lighter would have popped before the optimum was fixed.
            let mut repairs: Vec<AtomBits> = Vec::new();
            for hit in hits {
                let min = minimize_monotone(space, r, &hit, explored);
                if !repairs.contains(&min) {
                    repairs.push(min);
                }
            }
            repairs.sort_by_key(|s| space.apply(s));
            Ok(Some((weight, repairs)))
        }
    }
}

/// Subset-tree analogue of the blind minimal-repair walk, branching on
/// minimal fixes instead of raw atoms. Requires positive constraints and
/// a fresh-node-free pool. `prune` must be hereditary; because it is,
/// fixes may skip every atom whose symbol alone already trips the prune
/// on this state, which is what `allowed_symbols` reports (`None` for no
/// restriction).
pub(crate) fn for_each_min_repair_guided(
    space: &SupersetSpace,
    r: &ConstraintSet,
    limits: &EngineLimits,
    explored: &mut u64,
    prune: &dyn Fn(&AtomBits) -> bool,
    allowed_symbols: &dyn Fn(
        &AtomBits,
    ) -> Option<alloc::collections::BTreeSet<crate::datagraph::Symbol>>,
    visit: &mut dyn FnMut(&AtomBits) -> bool,
) -> Result<bool, RepairError> {
    let n = space.atom_count();
    let mut heap: BinaryHeap<Reverse<(u32, AtomBits)>> = BinaryHeap::new();
    let mut visited: BTreeSet<AtomBits> = BTreeSet::new();
    let mut reported: BTreeSet<AtomBits> = BTreeSet::new();
    let empty = AtomBits::empty(n);
    visited.insert(empty.clone());
    heap.push(Reverse((0, empty)));
    let mut work: u64 = 0;
    while let Some(Reverse((_, set))) = heap.pop() {
        work += 1;
        if work > limits.work_cap {
            return Err(overflow("guided repair search exhausted its work cap"));
        }
        if prune(&set) {
            continue;
        }
        let graph = space.apply(&set);
        *explored += 1;
        let Some((idx, witness)) = first_violation(&graph, r) else {
            let min = minimize_monotone(space, r, &set, explored);
            if reported.insert(min.clone()) && !visit(&min) {
                return Ok(false);
            }
            continue;
        };
        let constraint = r.get(idx).expect("violation indexes the constraint set");
        let allowed = allowed_symbols(&set);
        let fixes = minimal_fixes(
            space,
            &graph,
            constraint,
            &witness,
            limits,
            None,
            allowed.as_ref(),
        )?;
        for fix in fixes {
            let child = set.with_union(&fix);
            if visited.insert(child.clone()) {
                heap.push(Reverse((child.count(), child)));
            }
        }
    }
    Ok(true)
}
