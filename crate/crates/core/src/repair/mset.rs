//! Multiset-preferred superset repairs.
//!
//! A repair is multiset-preferred when no other repair is strictly below
//! it in the Dershowitz–Manna lifting of the symbol order. Because
//! repairs in one space share the base graph, two repairs compare
//! exactly as their addition multisets do, which gives strong state
//! prunes:
//!
//! * a state whose addition counts exceed a target somewhere with no
//!   strictly-greater symbol left to compensate can never complete to a
//!   set below the target, and
//! * once a state's counts sit strictly above a known repair, every
//!   completion stays strictly above it, hence is never preferred.
//!
//! Both conditions are hereditary, so they can cut whole subtrees of the
//! minimal-repair searches. The front of preferred repairs is then
//! assembled by alternating candidate searches (find a repair not above
//! anything known) with descent (chase dominators until none exists,
//! which certifies minimality); both terminate because the lifted order
//! on the finite candidate space is well founded.

use super::bits::AtomBits;
use super::blind::for_each_min_repair_blind;
use super::guided::for_each_min_repair_guided;
use super::space::SupersetSpace;
use super::{Decision, EngineLimits, RepairError};
use crate::consistency::is_consistent;
use crate::datagraph::{multiset_less, EdgeLabel, GraphMultiset, SymbolOrder};
use crate::gxpath::ConstraintSet;
use alloc::string::String;
use alloc::vec::Vec;

pub(crate) struct MsetSearch<'a> {
    pub space: &'a SupersetSpace,
    pub r: &'a ConstraintSet,
    pub ord: &'a SymbolOrder,
    /// Guided branching needs positive constraints and no fresh nodes;
    /// the blind walk works everywhere the pool is small enough.
    pub guided: bool,
    pub limits: &'a EngineLimits,
}

fn delta_of(space: &SupersetSpace, set: &AtomBits) -> GraphMultiset {
    GraphMultiset::from_counts(space.delta_counts(set))
}

/// No completion of `delta` can be strictly below `target`: some symbol
/// already exceeds the target and every strictly greater symbol has
/// already caught up with it.
fn cannot_complete_below(delta: &GraphMultiset, target: &GraphMultiset, ord: &SymbolOrder) -> bool {
    delta.iter().any(|(x, cnt)| {
        cnt > target.count(x)
            && !target
                .iter()
                .any(|(y, tc)| delta.count(y) < tc && ord.less(x, y))
    })
}

fn strictly_above_any(
    delta: &GraphMultiset,
    knowns: &[(GraphMultiset, AtomBits)],
    ord: &SymbolOrder,
) -> bool {
    knowns.iter().any(|(k, _)| multiset_less(k, delta, ord))
}

impl<'a> MsetSearch<'a> {
    fn run(
        &self,
        explored: &mut u64,
        prune: &dyn Fn(&AtomBits) -> bool,
        visit: &mut dyn FnMut(&AtomBits) -> bool,
    ) -> Result<bool, RepairError> {
        if self.guided {
            // All prunes here are hereditary, so a symbol is useless for
            // fixes as soon as one atom carrying it trips the prune.
            let reps = self.space.symbol_representatives();
            let allowed = |set: &AtomBits| {
                Some(
                    reps.iter()
                        .filter(|(_, idx)| !prune(&set.with_inserted(*idx)))
                        .map(|(sym, _)| sym.clone())
                        .collect(),
                )
            };
            for_each_min_repair_guided(
                self.space,
                self.r,
                self.limits,
                explored,
                prune,
                &allowed,
                visit,
            )
        } else {
            for_each_min_repair_blind(self.space, self.r, self.limits, explored, prune, visit)
        }
    }

    fn any_repair(&self, explored: &mut u64) -> Result<Option<AtomBits>, RepairError> {
        if self.guided {
            // Monotone case: saturate the pool, then strip. One
            // consistency check decides existence outright.
            let saturated = self.space.saturated_set();
            *explored += 1;
            if !is_consistent(&self.space.apply(&saturated), self.r) {
                return Ok(None);
            }
            return Ok(Some(super::guided::minimize_monotone(
                self.space, self.r, &saturated, explored,
            )));
        }
        let mut found = None;
        self.run(explored, &|_| false, &mut |rep| {
            found = Some(rep.clone());
            false
        })?;
        Ok(found)
    }

    /// A repair strictly below `target`, if any. The `knowns` must be
    /// certified minimal multisets; anything strictly above one of them
    /// cannot be strictly below anything, hence the extra prune.
    fn find_dominator(
        &self,
        target: &GraphMultiset,
        knowns: &[(GraphMultiset, AtomBits)],
        explored: &mut u64,
    ) -> Result<Option<AtomBits>, RepairError> {
        for (k, bits) in knowns {
            if multiset_less(k, target, self.ord) {
                return Ok(Some(bits.clone()));
            }
        }
        let mut found = None;
        self.run(
            explored,
            &|set| {
                let d = delta_of(self.space, set);
                cannot_complete_below(&d, target, self.ord)
                    || strictly_above_any(&d, knowns, self.ord)
            },
            &mut |rep| {
                if multiset_less(&delta_of(self.space, rep), target, self.ord) {
                    found = Some(rep.clone());
                    false
                } else {
                    true
                }
            },
        )?;
        Ok(found)
    }

    /// Chases dominators to a repair with no repair below it.
    fn descend(
        &self,
        start: AtomBits,
        knowns: &[(GraphMultiset, AtomBits)],
        explored: &mut u64,
    ) -> Result<(GraphMultiset, AtomBits), RepairError> {
        let mut current = start;
        let mut steps: u32 = 0;
        loop {
            let delta = delta_of(self.space, &current);
            if knowns.iter().any(|(k, _)| *k == delta) {
                return Ok((delta, current));
            }
            match self.find_dominator(&delta, knowns, explored)? {
                None => return Ok((delta, current)),
                Some(next) => current = next,
            }
            steps += 1;
            if steps > 100_000 {
                return Err(RepairError::SearchOverflow(String::from(
                    "multiset descent did not converge",
                )));
            }
        }
    }

    /// Every minimal addition multiset, with one repair carrying each.
    /// Empty when the space holds no repair at all.
    fn complete_front(
        &self,
        explored: &mut u64,
    ) -> Result<Vec<(GraphMultiset, AtomBits)>, RepairError> {
        let mut knowns: Vec<(GraphMultiset, AtomBits)> = Vec::new();
        let Some(seed) = self.any_repair(explored)? else {
            return Ok(knowns);
        };
        let first = self.descend(seed, &knowns, explored)?;
        knowns.push(first);
        loop {
            let mut candidate = None;
            self.run(
                explored,
                &|set| {
                    strictly_above_any(&delta_of(self.space, set), &knowns, self.ord)
                },
                &mut |rep| {
                    let d = delta_of(self.space, rep);
                    if knowns.iter().any(|(k, _)| *k == d) {
                        true
                    } else {
                        candidate = Some(rep.clone());
                        false
                    }
                },
            )?;
            match candidate {
                None => break,
                Some(c) => {
                    let (delta, bits) = self.descend(c, &knowns, explored)?;
                    // Candidates are neither above nor equal to a known
                    // multiset, and descent only moves downwards, so the
                    // result must be new; a repeat would loop forever.
                    if knowns.iter().any(|(k, _)| *k == delta) {
                        return Err(RepairError::SearchOverflow(String::from(
                            "multiset front revisited a known optimum",
                        )));
                    }
                    knowns.push((delta, bits));
                }
            }
        }
        Ok(knowns)
    }

    /// All repairs whose addition multiset equals `target` exactly.
    fn repairs_with_exact_delta(
        &self,
        target: &GraphMultiset,
        explored: &mut u64,
    ) -> Result<Vec<AtomBits>, RepairError> {
        let mut out = Vec::new();
        self.run(
            explored,
            &|set| !delta_of(self.space, set).pointwise_le(target),
            &mut |rep| {
                if delta_of(self.space, rep) == *target {
                    out.push(rep.clone());
                }
                true
            },
        )?;
        Ok(out)
    }

    /// All multiset-preferred repairs in the space; `None` when the
    /// space holds no repair.
    pub(crate) fn preferred(
        &self,
        explored: &mut u64,
    ) -> Result<Option<Vec<AtomBits>>, RepairError> {
        if is_consistent(self.space.base(), self.r) {
            *explored += 1;
            return Ok(Some(alloc::vec![AtomBits::empty(self.space.atom_count())]));
        }
        let front = self.complete_front(explored)?;
        if front.is_empty() {
            return Ok(None);
        }
        let mut optima: Vec<AtomBits> = Vec::new();
        for (delta, _) in &front {
            for rep in self.repairs_with_exact_delta(delta, explored)? {
                if !optima.contains(&rep) {
                    optima.push(rep);
                }
            }
        }
        optima.sort_by_key(|s| self.space.apply(s));
        Ok(Some(optima))
    }

    /// Whether some preferred repair carries at most `k` edges labeled
    /// `label` in total.
    pub(crate) fn decide(
        &self,
        label: &EdgeLabel,
        k: u64,
        explored: &mut u64,
    ) -> Result<Decision, RepairError> {
        let base_l = self
            .space
            .base()
            .iter_edges()
            .filter(|(_, _, l)| *l == label)
            .count() as u64;
        if is_consistent(self.space.base(), self.r) {
            *explored += 1;
            return Ok(if base_l <= k { Decision::Yes } else { Decision::No });
        }
        let mut knowns: Vec<(GraphMultiset, AtomBits)> = Vec::new();
        let Some(seed) = self.any_repair(explored)? else {
            return Ok(Decision::UnknownBeyondBudget);
        };
        let first = self.descend(seed, &knowns, explored)?;
        let total = |bits: &AtomBits| base_l + self.space.delta_label_count(bits, label);
        if total(&first.1) <= k {
            return Ok(Decision::Yes);
        }
        knowns.push(first);
        if base_l > k {
            // Supersets only add label occurrences.
            return Ok(Decision::No);
        }
        let slack = k - base_l;
        loop {
            let mut candidate = None;
            self.run(
                explored,
                &|set| {
                    self.space.delta_label_count(set, label) > slack
                        || strictly_above_any(&delta_of(self.space, set), &knowns, self.ord)
                },
                &mut |rep| {
                    let d = delta_of(self.space, rep);
                    if knowns.iter().any(|(kd, _)| *kd == d) {
                        true
                    } else {
                        candidate = Some(rep.clone());
                        false
                    }
                },
            )?;
            let Some(c) = candidate else {
                return Ok(Decision::No);
            };
            let (delta, bits) = self.descend(c, &knowns, explored)?;
            if total(&bits) <= k {
                return Ok(Decision::Yes);
            }
            if knowns.iter().any(|(kd, _)| *kd == delta) {
                return Err(RepairError::SearchOverflow(String::from(
                    "multiset decision revisited a known optimum",
                )));
            }
            knowns.push((delta, bits));
        }
    }
}
