//! Subset and superset repairs, preferred repairs under the weight and
//! multiset criteria, and the two bounded decision problems over
//! superset repairs.
//!
//! A subset repair is a consistent subgraph that is maximal among
//! consistent subgraphs; a superset repair is a consistent supergraph
//! that is minimal among consistent supergraphs. Subset search is always
//! exact: the input graph bounds the space. Superset search runs inside
//! a [`SearchBudget`]: a bounded pool of candidate additions (missing
//! labeled edges over the active nodes, plus optional fresh nodes valued
//! from a configurable domain). An empty answer within the pool is
//! reported as *unknown beyond budget*, never as proof that no repair
//! exists.
//!
//! Search strategy is picked per instance: a polynomial fixpoint when
//! every constraint is a positive node expression (subset mode), a
//! violation-guided search when all constraints are positive and no
//! fresh nodes are budgeted (superset mode), and deterministic
//! exhaustive searches otherwise. The naive powerset enumerators in
//! [`oracle`] remain available for cross-checking every path.

mod bits;
mod blind;
mod fastpath;
mod guided;
mod mset;
pub mod oracle;
mod space;

use crate::consistency::{check_first, is_consistent, Witness};
use crate::datagraph::{
    DataGraph, DataValue, EdgeLabel, PreferenceCriterion, SymbolOrder, WeightOverflow, WeightSpec,
};
use crate::gxpath::ConstraintSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use space::{SubsetSpace, SupersetSpace};

/// Repair direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepairMode {
    Subset,
    Superset,
}

/// Where fresh superset nodes draw their data values from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataDomain {
    /// Values present in the graph plus constants mentioned in the
    /// constraints.
    Active,
    Explicit(Vec<DataValue>),
}

/// Bounds on the superset candidate space. The defaults admit no fresh
/// nodes and every missing labeled edge over the graph's nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_new_nodes: u32,
    pub data_domain: DataDomain,
    /// Upper bound on the candidate edge pool; exceeding it is an error
    /// rather than a silent truncation.
    pub max_candidate_edges: Option<usize>,
    /// Upper bound on how many elements a repair may add (superset) or
    /// delete (subset) during enumeration.
    pub max_repair_size: Option<usize>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_new_nodes: 0,
            data_domain: DataDomain::Active,
            max_candidate_edges: None,
            max_repair_size: None,
        }
    }
}

/// Internal search guards; large enough for desk-scale instances.
#[derive(Debug, Clone)]
pub(crate) struct EngineLimits {
    pub work_cap: u64,
    pub fix_width_cap: usize,
    pub fix_size_cap: usize,
}

impl Default for EngineLimits {
    fn default() -> Self {
        EngineLimits {
            work_cap: 8_000_000,
            fix_width_cap: 4_096,
            fix_size_cap: 8,
        }
    }
}

/// How thoroughly maximality (subset) or minimality (superset) of the
/// returned repair was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Maximality {
    /// Exhaustively verified within the search space.
    Verified,
    /// Only single-element restorations were ruled out.
    OneStepLocal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepairStatus {
    Repaired,
    /// The repair is the empty data-graph.
    Trivial,
    /// No repair exists at all (never produced by the superset search,
    /// which cannot prove global nonexistence).
    NoneFound,
    /// No repair within the budgeted space; existence beyond it is open.
    UnknownBeyondBudget,
}

/// Outcome of a preferred-repair computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairResult {
    pub repair: Option<DataGraph>,
    pub status: RepairStatus,
    pub maximality: Maximality,
    /// Candidate graphs whose consistency was evaluated.
    pub explored: u64,
    /// Absolute weight difference to the input, under the criterion's
    /// weights when given and unit weights otherwise.
    pub extra_weight: Option<u64>,
}

/// Answer of the bounded decision problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No,
    /// The budgeted space holds no repair, so the question is open.
    UnknownBeyondBudget,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Yes => "true",
            Decision::No => "false",
            Decision::UnknownBeyondBudget => "unknown_beyond_budget",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepairError {
    /// The candidate space exceeds a configured cap.
    BudgetExceeded(String),
    /// An internal work cap stopped the search before an answer.
    SearchOverflow(String),
    Weight(WeightOverflow),
}

impl fmt::Display for RepairError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepairError::BudgetExceeded(msg) => write!(f, "budget exceeded: {msg}"),
            RepairError::SearchOverflow(msg) => write!(f, "search overflow: {msg}"),
            RepairError::Weight(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for RepairError {}

fn criterion_weights(crit: &PreferenceCriterion) -> WeightSpec {
    match crit {
        PreferenceCriterion::Weight(w) => w.clone(),
        _ => WeightSpec::default(),
    }
}

fn result_weights(g: &DataGraph, repair: &DataGraph, w: &WeightSpec) -> Result<u64, RepairError> {
    let wg = w.weight_of(g).map_err(RepairError::Weight)?;
    let wr = w.weight_of(repair).map_err(RepairError::Weight)?;
    Ok(wg.abs_diff(wr))
}

fn finish_result(
    g: &DataGraph,
    repair: DataGraph,
    crit: &PreferenceCriterion,
    maximality: Maximality,
    explored: u64,
) -> Result<RepairResult, RepairError> {
    let weights = criterion_weights(crit);
    let extra = result_weights(g, &repair, &weights)?;
    let status = if repair.is_empty() && !g.is_empty() {
        RepairStatus::Trivial
    } else {
        RepairStatus::Repaired
    };
    Ok(RepairResult {
        repair: Some(repair),
        status,
        maximality,
        explored,
        extra_weight: Some(extra),
    })
}

fn unknown_result(explored: u64) -> RepairResult {
    RepairResult {
        repair: None,
        status: RepairStatus::UnknownBeyondBudget,
        maximality: Maximality::Verified,
        explored,
        extra_weight: None,
    }
}

fn check_subset_pool(space: &SubsetSpace, budget: &SearchBudget) -> Result<(), RepairError> {
    if let Some(cap) = budget.max_candidate_edges {
        if space.atom_count() > cap {
            return Err(RepairError::BudgetExceeded(format!(
                "graph has {} deletable elements, cap is {cap}",
                space.atom_count()
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------
// Subset mode
// ---------------------------------------------------------------------

/// Enumerates the subset repairs of `g`: consistent subgraphs maximal
/// under inclusion, ordered by decreasing element count (canonical graph
/// order within a count). Deleting a node deletes its incident edges.
pub fn subset_repairs(
    g: &DataGraph,
    r: &ConstraintSet,
    limit: Option<usize>,
) -> Result<Vec<DataGraph>, RepairError> {
    subset_repairs_with(g, r, &SearchBudget::default(), limit)
}

/// [`subset_repairs`] under an explicit budget.
pub fn subset_repairs_with(
    g: &DataGraph,
    r: &ConstraintSet,
    budget: &SearchBudget,
    limit: Option<usize>,
) -> Result<Vec<DataGraph>, RepairError> {
    let limits = EngineLimits::default();
    let mut explored = 0;
    if r.all_positive_node() {
        // The unique repair of the tractable fragment.
        let repair = fastpath::positive_node_unique_subset_repair(g, r, &mut explored);
        return Ok(alloc::vec![repair]);
    }
    let space = SubsetSpace::new(g);
    check_subset_pool(&space, budget)?;
    let max_delta = budget.max_repair_size.unwrap_or(space.atom_count());
    let sets = blind::enumerate_minimal_sets(&space, r, max_delta, limit, &limits, &mut explored)?;
    Ok(sets.iter().map(|s| space.apply(s)).collect())
}

fn preferred_subset_sets(
    g: &DataGraph,
    r: &ConstraintSet,
    crit: &PreferenceCriterion,
    budget: &SearchBudget,
    limits: &EngineLimits,
    explored: &mut u64,
) -> Result<Vec<DataGraph>, RepairError> {
    if r.all_positive_node() {
        let repair = fastpath::positive_node_unique_subset_repair(g, r, explored);
        return Ok(alloc::vec![repair]);
    }
    let space = SubsetSpace::new(g);
    check_subset_pool(&space, budget)?;
    match crit {
        PreferenceCriterion::None => {
            let sets = blind::enumerate_minimal_sets(
                &space,
                r,
                budget.max_repair_size.unwrap_or(space.atom_count()),
                Some(1),
                limits,
                explored,
            )?;
            Ok(sets.iter().map(|s| space.apply(s)).collect())
        }
        PreferenceCriterion::Weight(w) => {
            // Maximizing kept weight is minimizing deleted weight.
            let found = blind::best_first_min_weight(&space, r, w, None, limits, explored)?;
            let (_, sets) = found.expect("the empty subgraph is always consistent");
            Ok(sets.iter().map(|s| space.apply(s)).collect())
        }
        PreferenceCriterion::Multiset(ord) => {
            let sets = blind::enumerate_minimal_sets(
                &space,
                r,
                budget.max_repair_size.unwrap_or(space.atom_count()),
                None,
                limits,
                explored,
            )?;
            let graphs: Vec<DataGraph> = sets.iter().map(|s| space.apply(s)).collect();
            // Subset-preferred means no other repair strictly above.
            let mut optima: Vec<DataGraph> = Vec::new();
            for candidate in &graphs {
                let beaten = graphs.iter().any(|other| {
                    crate::datagraph::graph_less(
                        candidate,
                        other,
                        &PreferenceCriterion::Multiset(ord.clone()),
                    )
                    .unwrap_or(false)
                });
                if !beaten {
                    optima.push(candidate.clone());
                }
            }
            optima.sort();
            Ok(optima)
        }
    }
}

/// The preferred subset repair under `crit`: repairs compare by total
/// weight (greater kept weight preferred) or by graph multiset (greater
/// preferred); with several optima the canonically least graph is
/// returned. `PreferenceCriterion::None` returns the first repair in
/// enumeration order.
pub fn find_preferred_subset_repair(
    g: &DataGraph,
    r: &ConstraintSet,
    crit: &PreferenceCriterion,
) -> Result<RepairResult, RepairError> {
    find_preferred_subset_repair_with(g, r, crit, &SearchBudget::default())
}

/// [`find_preferred_subset_repair`] under an explicit budget. When the
/// exact search overflows its work cap and no preference criterion is
/// given, a greedy repair flagged [`Maximality::OneStepLocal`] is
/// returned instead of an error.
pub fn find_preferred_subset_repair_with(
    g: &DataGraph,
    r: &ConstraintSet,
    crit: &PreferenceCriterion,
    budget: &SearchBudget,
) -> Result<RepairResult, RepairError> {
    find_preferred_subset_impl(g, r, crit, budget, &EngineLimits::default())
}

fn find_preferred_subset_impl(
    g: &DataGraph,
    r: &ConstraintSet,
    crit: &PreferenceCriterion,
    budget: &SearchBudget,
    limits: &EngineLimits,
) -> Result<RepairResult, RepairError> {
    let mut explored = 1;
    if is_consistent(g, r) {
        return finish_result(g, g.clone(), crit, Maximality::Verified, explored);
    }
    match preferred_subset_sets(g, r, crit, budget, limits, &mut explored) {
        Ok(graphs) => {
            let repair = graphs
                .into_iter()
                .next()
                .expect("the empty subgraph is always consistent");
            finish_result(g, repair, crit, Maximality::Verified, explored)
        }
        Err(RepairError::SearchOverflow(_)) if matches!(crit, PreferenceCriterion::None) => {
            let repair = greedy_subset_repair(g, r, &mut explored);
            finish_result(g, repair, crit, Maximality::OneStepLocal, explored)
        }
        Err(e) => Err(e),
    }
}

/// All preferred subset repairs (the optima under `crit`), canonically
/// ordered.
pub fn all_preferred_subset_repairs(
    g: &DataGraph,
    r: &ConstraintSet,
    crit: &PreferenceCriterion,
    budget: &SearchBudget,
) -> Result<Vec<DataGraph>, RepairError> {
    let limits = EngineLimits::default();
    let mut explored = 0;
    preferred_subset_sets(g, r, crit, budget, &limits, &mut explored)
}

/// Whether some preferred subset repair differs from the empty graph.
/// Preference never changes existence: if any nonempty repair exists,
/// the empty graph is not maximal, so no preferred repair is empty.
pub fn has_nontrivial_preferred_subset_repair(
    g: &DataGraph,
    r: &ConstraintSet,
    _crit: &PreferenceCriterion,
) -> Result<bool, RepairError> {
    if g.is_empty() {
        return Ok(false);
    }
    if is_consistent(g, r) {
        return Ok(true);
    }
    let first = subset_repairs(g, r, Some(1))?;
    Ok(first.first().is_some_and(|repair| !repair.is_empty()))
}

/// Greedy fallback: delete witness nodes until consistent, then restore
/// every element whose return preserves consistency, repeating until a
/// full pass changes nothing. The result is a consistent subgraph that
/// no single restoration extends.
fn greedy_subset_repair(g: &DataGraph, r: &ConstraintSet, explored: &mut u64) -> DataGraph {
    let mut current = g.clone();
    loop {
        *explored += 1;
        let verdict = check_first(&current, r);
        let Some(violation) = verdict.violations.first() else {
            break;
        };
        match &violation.witness {
            Witness::Node(id) => current.remove_node(&id.clone()),
            Witness::Pair(a, _) => current.remove_node(&a.clone()),
        }
    }
    // One-step restorations.
    loop {
        let mut changed = false;
        for (id, data) in g.iter_nodes() {
            if current.contains_node(id) {
                continue;
            }
            let mut candidate = current.clone();
            candidate
                .add_node(id.clone(), data.clone())
                .expect("node absent from current");
            *explored += 1;
            if is_consistent(&candidate, r) {
                current = candidate;
                changed = true;
            }
        }
        for (from, to, label) in g.iter_edges() {
            if current.has_edge(from, to, label)
                || !current.contains_node(from)
                || !current.contains_node(to)
            {
                continue;
            }
            let mut candidate = current.clone();
            candidate
                .add_edge(from.clone(), to.clone(), label.clone())
                .expect("edge absent from current");
            *explored += 1;
            if is_consistent(&candidate, r) {
                current = candidate;
                changed = true;
            }
        }
        if !changed {
            return current;
        }
    }
}

// ---------------------------------------------------------------------
// Superset mode
// ---------------------------------------------------------------------

fn guided_applicable(r: &ConstraintSet, space: &SupersetSpace) -> bool {
    r.all_positive() && !space.has_fresh()
}

/// Enumerates superset repairs of `g` within the budgeted candidate
/// space: consistent supersets minimal under inclusion, in increasing
/// size order. An empty result means no repair exists *within the
/// budget*; it is not proof of global nonexistence.
pub fn superset_repairs(
    g: &DataGraph,
    r: &ConstraintSet,
    budget: &SearchBudget,
    limit: Option<usize>,
) -> Result<Vec<DataGraph>, RepairError> {
    let limits = EngineLimits::default();
    let mut explored = 0;
    let space = SupersetSpace::new(g, r, budget)?;
    let max_delta = budget.max_repair_size.unwrap_or(space.atom_count());
    let sets = blind::enumerate_minimal_sets(&space, r, max_delta, limit, &limits, &mut explored)?;
    Ok(sets.iter().map(|s| space.apply(s)).collect())
}

/// The preferred superset repair: minimum total weight, or a repair no
/// other repair strictly precedes in the multiset order. Ties resolve to
/// the canonically least graph. Returns an unknown-beyond-budget result
/// when the budgeted space holds no repair.
pub fn find_preferred_superset_repair(
    g: &DataGraph,
    r: &ConstraintSet,
    crit: &PreferenceCriterion,
    budget: &SearchBudget,
) -> Result<RepairResult, RepairError> {
    let limits = EngineLimits::default();
    let mut explored = 0;
    if is_consistent(g, r) {
        explored += 1;
        return finish_result(g, g.clone(), crit, Maximality::Verified, explored);
    }
    explored += 1;
    let optima = preferred_superset_sets(g, r, crit, budget, &limits, &mut explored)?;
    match optima.into_iter().next() {
        Some(repair) => finish_result(g, repair, crit, Maximality::Verified, explored),
        None => Ok(unknown_result(explored)),
    }
}

/// All preferred superset repairs within budget, canonically ordered.
pub fn all_preferred_superset_repairs(
    g: &DataGraph,
    r: &ConstraintSet,
    crit: &PreferenceCriterion,
    budget: &SearchBudget,
) -> Result<Vec<DataGraph>, RepairError> {
    let limits = EngineLimits::default();
    let mut explored = 0;
    if is_consistent(g, r) {
        return Ok(alloc::vec![g.clone()]);
    }
    preferred_superset_sets(g, r, crit, budget, &limits, &mut explored)
}

fn preferred_superset_sets(
    g: &DataGraph,
    r: &ConstraintSet,
    crit: &PreferenceCriterion,
    budget: &SearchBudget,
    limits: &EngineLimits,
    explored: &mut u64,
) -> Result<Vec<DataGraph>, RepairError> {
    let space = SupersetSpace::new(g, r, budget)?;
    match crit {
        PreferenceCriterion::None => {
            // Pinned semantics: the repair adding the fewest elements,
            // canonical graph order breaking ties. Unit weights make the
            // weight search compute exactly that.
            let unit = WeightSpec::default();
            let found = if guided_applicable(r, &space) {
                guided::guided_min_weight(&space, r, &unit, None, limits, explored)?
            } else {
                blind::best_first_min_weight(&space, r, &unit, None, limits, explored)?
            };
            match found {
                None => Ok(Vec::new()),
                Some((_, sets)) => Ok(sets
                    .iter()
                    .take(1)
                    .map(|s| space.apply(s))
                    .collect()),
            }
        }
        PreferenceCriterion::Weight(w) => {
            let found = if guided_applicable(r, &space) {
                guided::guided_min_weight(&space, r, w, None, limits, explored)?
            } else {
                blind::best_first_min_weight(&space, r, w, None, limits, explored)?
            };
            match found {
                None => Ok(Vec::new()),
                Some((_, sets)) => Ok(sets.iter().map(|s| space.apply(s)).collect()),
            }
        }
        PreferenceCriterion::Multiset(ord) => {
            let search = mset::MsetSearch {
                space: &space,
                r,
                ord,
                guided: guided_applicable(r, &space),
                limits,
            };
            match search.preferred(explored)? {
                None => Ok(Vec::new()),
                Some(sets) => Ok(sets.iter().map(|s| space.apply(s)).collect()),
            }
        }
    }
}

/// Decides whether some superset repair within the budget has total
/// weight at most `k`. Within the pool minimal-weight consistent
/// supersets are true repairs, so a hit certifies yes; exhaustion with a
/// known repair refutes; a pool with no repair at all answers unknown.
pub fn decide_pi_w(
    g: &DataGraph,
    r: &ConstraintSet,
    w: &WeightSpec,
    k: u64,
    budget: &SearchBudget,
) -> Result<Decision, RepairError> {
    let limits = EngineLimits::default();
    let mut explored = 0;
    let base_weight = w.weight_of(g).map_err(RepairError::Weight)?;
    if is_consistent(g, r) {
        return Ok(if base_weight <= k { Decision::Yes } else { Decision::No });
    }
    let space = SupersetSpace::new(g, r, budget)?;
    if guided_applicable(r, &space) {
        // Monotone: the saturated pool decides existence outright.
        let saturated = space.saturated_set();
        explored += 1;
        if !is_consistent(&space.apply(&saturated), r) {
            return Ok(Decision::UnknownBeyondBudget);
        }
        if k < base_weight {
            return Ok(Decision::No);
        }
        let found =
            guided::guided_min_weight(&space, r, w, Some(k - base_weight), &limits, &mut explored)?;
        return Ok(if found.is_some() { Decision::Yes } else { Decision::No });
    }
    if k >= base_weight {
        let found = blind::best_first_min_weight(
            &space,
            r,
            w,
            Some(k - base_weight),
            &limits,
            &mut explored,
        )?;
        if found.is_some() {
            return Ok(Decision::Yes);
        }
    }
    // No repair under the bound; does any repair exist in the pool?
    let any = blind::enumerate_minimal_sets(
        &space,
        r,
        budget.max_repair_size.unwrap_or(space.atom_count()),
        Some(1),
        &limits,
        &mut explored,
    )?;
    if any.is_empty() {
        Ok(Decision::UnknownBeyondBudget)
    } else {
        Ok(Decision::No)
    }
}

/// Decides whether some multiset-preferred superset repair within the
/// budget carries at most `k` edges labeled `label`.
pub fn decide_pi_mset(
    g: &DataGraph,
    r: &ConstraintSet,
    ord: &SymbolOrder,
    label: &EdgeLabel,
    k: u64,
    budget: &SearchBudget,
) -> Result<Decision, RepairError> {
    let limits = EngineLimits::default();
    let mut explored = 0;
    let space = SupersetSpace::new(g, r, budget)?;
    let search = mset::MsetSearch {
        space: &space,
        r,
        ord,
        guided: guided_applicable(r, &space),
        limits: &limits,
    };
    search.decide(label, k, &mut explored)
}
