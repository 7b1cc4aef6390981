//! Brute-force reference implementations: enumerate the whole candidate
//! powerset, filter consistent graphs, keep the maximal (subset mode) or
//! minimal (superset mode) ones.
//!
//! These are the specification the optimized searches are tested
//! against and are exposed to the command line behind `--oracle`. They
//! share only the atom-space plumbing with the optimized paths; the
//! enumeration, maximality filtering and preference selection here are
//! deliberately naive.

use super::bits::AtomBits;
use super::space::{SubsetSpace, SupersetSpace};
use super::{Decision, RepairError, SearchBudget};
use crate::consistency::is_consistent;
use crate::datagraph::{
    graph_less, DataGraph, EdgeLabel, PreferenceCriterion, SymbolOrder, WeightSpec,
};
use crate::gxpath::ConstraintSet;
use alloc::format;
use alloc::vec::Vec;

/// Largest candidate pool the oracle will exhaust (2^20 graphs).
pub const ORACLE_MAX_ATOMS: usize = 20;

fn mask_to_bits(mask: u64, len: usize) -> AtomBits {
    let mut b = AtomBits::empty(len);
    for i in 0..len {
        if mask & (1 << i) != 0 {
            b.insert(i);
        }
    }
    b
}

fn check_oracle_size(atoms: usize) -> Result<(), RepairError> {
    if atoms > ORACLE_MAX_ATOMS {
        return Err(RepairError::BudgetExceeded(format!(
            "oracle enumeration over {atoms} elements exceeds the {ORACLE_MAX_ATOMS}-element cap"
        )));
    }
    Ok(())
}

fn strict_subset(a: u64, b: u64) -> bool {
    a != b && a & !b == 0
}

/// All subset repairs, ordered by decreasing element count with the
/// canonical graph order breaking ties.
pub fn subset_repairs(
    g: &DataGraph,
    r: &ConstraintSet,
    limit: Option<usize>,
) -> Result<Vec<DataGraph>, RepairError> {
    let space = SubsetSpace::new(g);
    let n = space.atom_count();
    check_oracle_size(n)?;
    let mut consistent_masks: Vec<u64> = Vec::new();
    for mask in 0..(1u64 << n) {
        let bits = mask_to_bits(mask, n);
        if !space.is_closed(&bits) {
            continue;
        }
        if is_consistent(&space.apply(&bits), r) {
            consistent_masks.push(mask);
        }
    }
    let mut repairs: Vec<(u32, DataGraph)> = consistent_masks
        .iter()
        .filter(|&&m| !consistent_masks.iter().any(|&m2| strict_subset(m2, m)))
        .map(|&m| (m.count_ones(), space.apply(&mask_to_bits(m, n))))
        .collect();
    repairs.sort();
    let mut graphs: Vec<DataGraph> = repairs.into_iter().map(|(_, g)| g).collect();
    if let Some(limit) = limit {
        graphs.truncate(limit);
    }
    Ok(graphs)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut result: u128 = 1;
    for i in 0..k.min(n - k) {
        result = result * (n - i) as u128 / (i + 1) as u128;
    }
    result
}

/// All superset repairs within the budgeted candidate space, ordered by
/// increasing size with the canonical graph order breaking ties. With a
/// size cap the enumeration walks combinations level by level, which
/// admits somewhat larger pools than the full powerset sweep.
pub fn superset_repairs(
    g: &DataGraph,
    r: &ConstraintSet,
    budget: &SearchBudget,
    limit: Option<usize>,
) -> Result<Vec<DataGraph>, RepairError> {
    let space = SupersetSpace::new(g, r, budget)?;
    let n = space.atom_count();
    let mut consistent: Vec<AtomBits> = Vec::new();
    match budget.max_repair_size {
        None => {
            check_oracle_size(n)?;
            for mask in 0..(1u64 << n) {
                let bits = mask_to_bits(mask, n);
                if space.is_valid(&bits) && is_consistent(&space.apply(&bits), r) {
                    consistent.push(bits);
                }
            }
        }
        Some(cap) => {
            let work: u128 = (0..=cap.min(n)).map(|k| binomial(n, k)).sum();
            if work > 8_000_000 {
                return Err(RepairError::BudgetExceeded(format!(
                    "oracle enumeration of {work} size-capped candidate sets is too large"
                )));
            }
            for k in 0..=cap.min(n) {
                let mut indices: Vec<usize> = (0..k).collect();
                loop {
                    let bits = AtomBits::from_indices(n, &indices);
                    if space.is_valid(&bits) && is_consistent(&space.apply(&bits), r) {
                        consistent.push(bits);
                    }
                    // Advance to the next k-combination.
                    let mut i = k;
                    loop {
                        if i == 0 {
                            indices.clear();
                            break;
                        }
                        i -= 1;
                        if indices[i] < n - (k - i) {
                            indices[i] += 1;
                            for j in i + 1..k {
                                indices[j] = indices[j - 1] + 1;
                            }
                            break;
                        }
                    }
                    if indices.is_empty() {
                        break;
                    }
                }
            }
        }
    }
    let mut repairs: Vec<(u32, DataGraph)> = consistent
        .iter()
        .filter(|bits| {
            !consistent
                .iter()
                .any(|other| other != *bits && other.is_subset_of(bits))
        })
        .map(|bits| (bits.count(), space.apply(bits)))
        .collect();
    repairs.sort();
    let mut graphs: Vec<DataGraph> = repairs.into_iter().map(|(_, g)| g).collect();
    if let Some(limit) = limit {
        graphs.truncate(limit);
    }
    Ok(graphs)
}

fn best_of(
    repairs: Vec<DataGraph>,
    crit: &PreferenceCriterion,
    prefer_greater: bool,
) -> Result<Vec<DataGraph>, RepairError> {
    let mut optima = Vec::new();
    for candidate in &repairs {
        let mut beaten = false;
        for other in &repairs {
            let candidate_worse = if prefer_greater {
                graph_less(candidate, other, crit)
            } else {
                graph_less(other, candidate, crit)
            }
            .map_err(RepairError::Weight)?;
            if candidate_worse {
                beaten = true;
                break;
            }
        }
        if !beaten {
            optima.push(candidate.clone());
        }
    }
    optima.sort();
    optima.dedup();
    Ok(optima)
}

/// The preferred subset repairs (all optima, canonical order). Under a
/// partial preference several incomparable optima may remain.
pub fn preferred_subset_repairs(
    g: &DataGraph,
    r: &ConstraintSet,
    crit: &PreferenceCriterion,
) -> Result<Vec<DataGraph>, RepairError> {
    let repairs = subset_repairs(g, r, None)?;
    if matches!(crit, PreferenceCriterion::None) {
        return Ok(repairs.first().cloned().into_iter().collect());
    }
    best_of(repairs, crit, true)
}

/// The preferred superset repairs within budget (all optima).
pub fn preferred_superset_repairs(
    g: &DataGraph,
    r: &ConstraintSet,
    crit: &PreferenceCriterion,
    budget: &SearchBudget,
) -> Result<Vec<DataGraph>, RepairError> {
    let repairs = superset_repairs(g, r, budget, None)?;
    if matches!(crit, PreferenceCriterion::None) {
        return Ok(repairs.first().cloned().into_iter().collect());
    }
    best_of(repairs, crit, false)
}

pub fn has_nontrivial_subset_repair(
    g: &DataGraph,
    r: &ConstraintSet,
) -> Result<bool, RepairError> {
    Ok(subset_repairs(g, r, None)?
        .iter()
        .any(|repair| !repair.is_empty()))
}

/// Weight-bounded superset decision by full enumeration.
pub fn decide_pi_w(
    g: &DataGraph,
    r: &ConstraintSet,
    w: &WeightSpec,
    k: u64,
    budget: &SearchBudget,
) -> Result<Decision, RepairError> {
    let repairs = superset_repairs(g, r, budget, None)?;
    if repairs.is_empty() {
        return Ok(Decision::UnknownBeyondBudget);
    }
    let mut min = u64::MAX;
    for repair in &repairs {
        min = min.min(w.weight_of(repair).map_err(RepairError::Weight)?);
    }
    Ok(if min <= k { Decision::Yes } else { Decision::No })
}

fn label_count(g: &DataGraph, label: &EdgeLabel) -> u64 {
    g.iter_edges().filter(|(_, _, l)| *l == label).count() as u64
}

/// Multiset-preferred superset decision by full enumeration.
pub fn decide_pi_mset(
    g: &DataGraph,
    r: &ConstraintSet,
    ord: &SymbolOrder,
    label: &EdgeLabel,
    k: u64,
    budget: &SearchBudget,
) -> Result<Decision, RepairError> {
    let repairs = superset_repairs(g, r, budget, None)?;
    if repairs.is_empty() {
        return Ok(Decision::UnknownBeyondBudget);
    }
    let crit = PreferenceCriterion::Multiset(ord.clone());
    let preferred = best_of(repairs, &crit, false)?;
    Ok(if preferred.iter().any(|repair| label_count(repair, label) <= k) {
        Decision::Yes
    } else {
        Decision::No
    })
}
