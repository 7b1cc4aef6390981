//! Exhaustive searches over candidate atom sets, driven by a
//! deterministic order.
//!
//! Candidate sets pop in `(delta, count, set)` order. In that order the
//! first consistent admissible set is always a repair: any consistent
//! set strictly inside it has no larger delta and strictly fewer atoms,
//! so it would have popped first. That argument does not depend on the
//! constraints being monotone, which makes these searches the general
//! fallback for every fragment; their cost is what the work caps guard.

use super::bits::AtomBits;
use super::space::{SubsetSpace, SupersetSpace};
use super::{EngineLimits, RepairError};
use crate::consistency::is_consistent;
use crate::datagraph::{DataGraph, WeightOverflow, WeightSpec};
use crate::gxpath::ConstraintSet;
use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Reverse;

/// The two candidate spaces presented uniformly to the blind searches.
pub(crate) trait AtomSpace {
    fn atom_count(&self) -> usize;
    /// Whether the set denotes a graph (deletions closed over incident
    /// edges; additions with fresh endpoints bound to one value).
    fn is_admissible(&self, set: &AtomBits) -> bool;
    fn materialize(&self, set: &AtomBits) -> DataGraph;
    fn delta_weight(&self, set: &AtomBits, w: &WeightSpec) -> Result<u64, WeightOverflow>;
}

impl AtomSpace for SubsetSpace {
    fn atom_count(&self) -> usize {
        SubsetSpace::atom_count(self)
    }

    fn is_admissible(&self, set: &AtomBits) -> bool {
        self.is_closed(set)
    }

    fn materialize(&self, set: &AtomBits) -> DataGraph {
        self.apply(set)
    }

    fn delta_weight(&self, set: &AtomBits, w: &WeightSpec) -> Result<u64, WeightOverflow> {
        SubsetSpace::delta_weight(self, set, w)
    }
}

impl AtomSpace for SupersetSpace {
    fn atom_count(&self) -> usize {
        SupersetSpace::atom_count(self)
    }

    fn is_admissible(&self, set: &AtomBits) -> bool {
        self.is_valid(set)
    }

    fn materialize(&self, set: &AtomBits) -> DataGraph {
        self.apply(set)
    }

    fn delta_weight(&self, set: &AtomBits, w: &WeightSpec) -> Result<u64, WeightOverflow> {
        SupersetSpace::delta_weight(self, set, w)
    }
}

fn overflow(what: &str) -> RepairError {
    RepairError::SearchOverflow(alloc::format!(
        "{what} exhausted its work cap; tighten the search budget"
    ))
}

/// Lexicographic k-combinations of `0..n`.
struct Combinations {
    n: usize,
    k: usize,
    indices: Vec<usize>,
    started: bool,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            k,
            indices: (0..k).collect(),
            started: false,
            done: k > n,
        }
    }

    fn next(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.indices);
        }
        let mut i = self.k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.indices[i] < self.n - (self.k - i) {
                self.indices[i] += 1;
                for j in i + 1..self.k {
                    self.indices[j] = self.indices[j - 1] + 1;
                }
                return Some(&self.indices);
            }
        }
    }
}

/// Enumerates every minimal consistent candidate set (the repairs of the
/// space), level by level: all sets of `k` atoms before any of `k + 1`,
/// the canonical graph order breaking ties within a level. Stops early
/// at `limit` repairs, at `max_delta` atoms, or when a whole level is
/// dominated by found repairs (every deeper set then contains one).
pub(crate) fn enumerate_minimal_sets(
    space: &dyn AtomSpace,
    r: &ConstraintSet,
    max_delta: usize,
    limit: Option<usize>,
    limits: &EngineLimits,
    explored: &mut u64,
) -> Result<Vec<AtomBits>, RepairError> {
    let n = space.atom_count();
    let mut work: u64 = 0;
    let mut found: Vec<AtomBits> = Vec::new();
    let mut ordered: Vec<AtomBits> = Vec::new();
    for k in 0..=max_delta.min(n) {
        if limit.is_some_and(|l| ordered.len() >= l) {
            break;
        }
        let mut level: Vec<(DataGraph, AtomBits)> = Vec::new();
        let mut all_dominated = k > 0;
        let mut combos = Combinations::new(n, k);
        while let Some(indices) = combos.next() {
            work += 1;
            if work > limits.work_cap {
                return Err(overflow("repair enumeration"));
            }
            let set = AtomBits::from_indices(n, indices);
            if found.iter().any(|f| f.is_subset_of(&set)) {
                continue;
            }
            all_dominated = false;
            if !space.is_admissible(&set) {
                continue;
            }
            *explored += 1;
            let graph = space.materialize(&set);
            if is_consistent(&graph, r) {
                level.push((graph, set));
            }
        }
        // Sets within one level cannot contain each other, so they join
        // the found list together, sorted for deterministic output.
        level.sort();
        for (_, set) in &level {
            found.push(set.clone());
        }
        ordered.extend(level.into_iter().map(|(_, set)| set));
        if all_dominated {
            break;
        }
    }
    if let Some(limit) = limit {
        ordered.truncate(limit);
    }
    Ok(ordered)
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct HeapKey {
    weight: u64,
    count: u32,
    set: AtomBits,
}

/// Finds the minimum-delta-weight repairs by best-first search over the
/// subset tree (children extend a set past its largest atom, so every
/// set is generated once). Returns the optimum weight and every repair
/// attaining it, or `None` when the (optionally bounded) space holds no
/// consistent set.
pub(crate) fn best_first_min_weight(
    space: &dyn AtomSpace,
    r: &ConstraintSet,
    w: &WeightSpec,
    bound: Option<u64>,
    limits: &EngineLimits,
    explored: &mut u64,
) -> Result<Option<(u64, Vec<AtomBits>)>, RepairError> {
    let n = space.atom_count();
    let mut heap: BinaryHeap<Reverse<HeapKey>> = BinaryHeap::new();
    let empty = AtomBits::empty(n);
    heap.push(Reverse(HeapKey {
        weight: 0,
        count: 0,
        set: empty,
    }));
    let mut work: u64 = 0;
    let mut best: Option<u64> = None;
    let mut consistent_hits: Vec<AtomBits> = Vec::new();
    while let Some(Reverse(key)) = heap.pop() {
        work += 1;
        if work > limits.work_cap {
            return Err(overflow("weight-ordered repair search"));
        }
        if bound.is_some_and(|b| key.weight > b) {
            break;
        }
        if let Some(best_weight) = best {
            if key.weight > best_weight {
                break;
            }
        }
        if space.is_admissible(&key.set) {
            *explored += 1;
            if is_consistent(&space.materialize(&key.set), r) {
                if best.is_none() {
                    best = Some(key.weight);
                }
                // Minimal unless a previously collected consistent set
                // sits strictly inside it.
                if !consistent_hits
                    .iter()
                    .any(|c| c != &key.set && c.is_subset_of(&key.set))
                {
                    consistent_hits.push(key.set.clone());
                }
                continue;
            }
        }
        let from = key.set.max_one().map_or(0, |m| m + 1);
        for i in from..n {
            let child = key.set.with_inserted(i);
            let weight = space.delta_weight(&child, w).map_err(RepairError::Weight)?;
            if bound.is_some_and(|b| weight > b) {
                continue;
            }
            if best.is_some_and(|best_weight| weight > best_weight) {
                continue;
            }
            heap.push(Reverse(HeapKey {
                weight,
                count: child.count(),
                set: child,
            }));
        }
    }
    match best {
        None => Ok(None),
        Some(weight) => {
            let mut sets = consistent_hits;
            sets.sort_by_key(|s| space.materialize(s));
            Ok(Some((weight, sets)))
        }
    }
}

/// Subset-tree search in `(count, set)` order with a hereditary prune:
/// once `prune` answers true for a set it must answer true for every
/// superset. Calls `visit` with each minimal consistent set that
/// survives pruning; `visit` returns false to stop early. Returns
/// whether the (pruned) space was exhausted.
pub(crate) fn for_each_min_repair_blind(
    space: &SupersetSpace,
    r: &ConstraintSet,
    limits: &EngineLimits,
    explored: &mut u64,
    prune: &dyn Fn(&AtomBits) -> bool,
    visit: &mut dyn FnMut(&AtomBits) -> bool,
) -> Result<bool, RepairError> {
    let n = space.atom_count();
    let mut heap: BinaryHeap<Reverse<(u32, AtomBits)>> = BinaryHeap::new();
    heap.push(Reverse((0, AtomBits::empty(n))));
    let mut work: u64 = 0;
    let mut consistent_hits: Vec<AtomBits> = Vec::new();
    while let Some(Reverse((_, set))) = heap.pop() {
        work += 1;
        if work > limits.work_cap {
            return Err(overflow("multiset repair search"));
        }
        if prune(&set) {
            continue;
        }
        if space.is_valid(&set) {
            *explored += 1;
            if is_consistent(&space.apply(&set), r) {
                let minimal = !consistent_hits
                    .iter()
                    .any(|c| c != &set && c.is_subset_of(&set));
                consistent_hits.push(set.clone());
                if minimal && !visit(&set) {
                    return Ok(false);
                }
                // Supersets of a consistent set are never minimal.
                continue;
            }
        }
        let from = set.max_one().map_or(0, |m| m + 1);
        for i in from..n {
            let child = set.with_inserted(i);
            heap.push(Reverse((child.count(), child)));
        }
    }
    Ok(true)
}
