//! The data-graph model: nodes with data values, labeled edges, the
//! subgraph relation, weight aggregation, graph multisets and the two
//! preference orderings used to rank repairs.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Node identifier. Distinct from the node's data value: two nodes may
/// hold the same value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(String);

/// A data value carried by a node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DataValue(String);

/// An edge label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeLabel(String);

macro_rules! string_newtype {
    ($t:ident) => {
        impl $t {
            pub fn new(s: impl Into<String>) -> Self {
                $t(s.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $t {
            fn from(s: &str) -> Self {
                $t(s.to_owned())
            }
        }

        impl From<String> for $t {
            fn from(s: String) -> Self {
                $t(s)
            }
        }
    };
}

string_newtype!(NodeId);
string_newtype!(DataValue);
string_newtype!(EdgeLabel);

/// A symbol of the combined alphabet: either an edge label or a data
/// value. Weight functions, symbol orders and graph multisets all range
/// over this disjoint union.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Symbol {
    Edge(EdgeLabel),
    Data(DataValue),
}

impl Symbol {
    /// The symbol's name. Orders are declared by name; the two alphabets
    /// are required to be disjoint, so a name identifies one symbol.
    pub fn name(&self) -> &str {
        match self {
            Symbol::Edge(l) => l.as_str(),
            Symbol::Data(v) => v.as_str(),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Errors raised while assembling a [`DataGraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// The same node id was declared twice.
    DuplicateNode(NodeId),
    /// The same (from, to, label) triple was declared twice.
    DuplicateEdge(NodeId, NodeId, EdgeLabel),
    /// An edge endpoint does not name a declared node.
    UnknownEndpoint(NodeId),
    /// A name is used both as an edge label and as a data value.
    AlphabetOverlap(String),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::DuplicateNode(n) => write!(f, "duplicate node id {n:?}"),
            GraphError::DuplicateEdge(a, b, l) => {
                write!(f, "duplicate edge ({a}, {l}, {b})")
            }
            GraphError::UnknownEndpoint(n) => {
                write!(f, "edge endpoint {n:?} is not a declared node")
            }
            GraphError::AlphabetOverlap(s) => write!(
                f,
                "name {s:?} is used both as an edge label and as a data value"
            ),
        }
    }
}

impl core::error::Error for GraphError {}

/// A finite data-graph: a set of nodes, a total data assignment, and a
/// set of labeled directed edges. Edge sets are true sets: a (from, to,
/// label) triple is present at most once.
///
/// The derived `Ord` is the canonical order used for deterministic
/// tie-breaking: node map first, then edge map, both lexicographic.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct DataGraph {
    nodes: BTreeMap<NodeId, DataValue>,
    edges: BTreeMap<(NodeId, NodeId), BTreeSet<EdgeLabel>>,
}

impl DataGraph {
    /// The empty data-graph.
    pub fn empty() -> Self {
        DataGraph::default()
    }

    /// Builds a graph from node and edge lists, rejecting duplicate
    /// nodes, duplicate edge triples and dangling endpoints.
    pub fn from_parts<N, E>(nodes: N, edges: E) -> Result<Self, GraphError>
    where
        N: IntoIterator<Item = (NodeId, DataValue)>,
        E: IntoIterator<Item = (NodeId, NodeId, EdgeLabel)>,
    {
        let mut g = DataGraph::empty();
        for (id, data) in nodes {
            g.add_node(id, data)?;
        }
        for (from, to, label) in edges {
            g.add_edge(from, to, label)?;
        }
        Ok(g)
    }

    pub fn add_node(&mut self, id: NodeId, data: DataValue) -> Result<(), GraphError> {
        if self.nodes.contains_key(&id) {
            return Err(GraphError::DuplicateNode(id));
        }
        self.nodes.insert(id, data);
        Ok(())
    }

    pub fn add_edge(
        &mut self,
        from: NodeId,
        to: NodeId,
        label: EdgeLabel,
    ) -> Result<(), GraphError> {
        if !self.nodes.contains_key(&from) {
            return Err(GraphError::UnknownEndpoint(from));
        }
        if !self.nodes.contains_key(&to) {
            return Err(GraphError::UnknownEndpoint(to));
        }
        let set = self.edges.entry((from.clone(), to.clone())).or_default();
        if !set.insert(label.clone()) {
            return Err(GraphError::DuplicateEdge(from, to, label));
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of (from, to, label) triples.
    pub fn edge_count(&self) -> usize {
        self.edges.values().map(|s| s.len()).sum()
    }

    /// Nodes plus edge triples; the element count used by enumeration
    /// orders.
    pub fn element_count(&self) -> usize {
        self.node_count() + self.edge_count()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains_node(&self, id: &NodeId) -> bool {
        self.nodes.contains_key(id)
    }

    pub fn data(&self, id: &NodeId) -> Option<&DataValue> {
        self.nodes.get(id)
    }

    /// Nodes in id order, with their data values.
    pub fn iter_nodes(&self) -> impl Iterator<Item = (&NodeId, &DataValue)> {
        self.nodes.iter()
    }

    /// Edge triples in (from, to, label) order.
    pub fn iter_edges(&self) -> impl Iterator<Item = (&NodeId, &NodeId, &EdgeLabel)> {
        self.edges
            .iter()
            .flat_map(|((from, to), labels)| labels.iter().map(move |l| (from, to, l)))
    }

    pub fn has_edge(&self, from: &NodeId, to: &NodeId, label: &EdgeLabel) -> bool {
        self.edges
            .get(&(from.clone(), to.clone()))
            .is_some_and(|s| s.contains(label))
    }

    pub fn labels_between(&self, from: &NodeId, to: &NodeId) -> impl Iterator<Item = &EdgeLabel> {
        self.edges
            .get(&(from.clone(), to.clone()))
            .into_iter()
            .flat_map(|s| s.iter())
    }

    /// Every edge label occurring in the graph.
    pub fn edge_labels(&self) -> BTreeSet<EdgeLabel> {
        self.iter_edges().map(|(_, _, l)| l.clone()).collect()
    }

    /// Every data value occurring in the graph.
    pub fn data_values(&self) -> BTreeSet<DataValue> {
        self.nodes.values().cloned().collect()
    }

    /// Removes a node and its incident edges. No-op when absent.
    pub fn remove_node(&mut self, id: &NodeId) {
        self.nodes.remove(id);
        self.edges.retain(|(from, to), _| from != id && to != id);
    }

    /// Removes one edge triple. No-op when absent.
    pub fn remove_edge(&mut self, from: &NodeId, to: &NodeId, label: &EdgeLabel) {
        let key = (from.clone(), to.clone());
        if let Some(set) = self.edges.get_mut(&key) {
            set.remove(label);
            if set.is_empty() {
                self.edges.remove(&key);
            }
        }
    }
}

/// Returns true when `g1` is a subgraph of `g2`: every node of `g1` is a
/// node of `g2` with the same data value, and every edge of `g1` is an
/// edge of `g2`.
pub fn is_subgraph(g1: &DataGraph, g2: &DataGraph) -> bool {
    for (id, data) in g1.iter_nodes() {
        if g2.data(id) != Some(data) {
            return false;
        }
    }
    for (from, to, label) in g1.iter_edges() {
        if !g2.has_edge(from, to, label) {
            return false;
        }
    }
    true
}

/// The pair of alphabets an instance ranges over: a finite set of edge
/// labels and the (active) set of data values. The two must be disjoint
/// so that a symbol name is unambiguous.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alphabets {
    pub edge_labels: BTreeSet<EdgeLabel>,
    pub data_values: BTreeSet<DataValue>,
}

impl Alphabets {
    pub fn try_new(
        edge_labels: BTreeSet<EdgeLabel>,
        data_values: BTreeSet<DataValue>,
    ) -> Result<Self, GraphError> {
        for l in &edge_labels {
            if data_values.contains(&DataValue::new(l.as_str())) {
                return Err(GraphError::AlphabetOverlap(l.as_str().to_owned()));
            }
        }
        Ok(Alphabets {
            edge_labels,
            data_values,
        })
    }

    /// The active alphabets of a graph alone.
    pub fn of_graph(g: &DataGraph) -> Result<Self, GraphError> {
        Self::try_new(g.edge_labels(), g.data_values())
    }
}

/// Weight function over the combined alphabet, with explicit defaults for
/// symbols absent from the maps (the data alphabet need not be finite).
/// All weights are non-negative machine integers; aggregation reports
/// overflow instead of wrapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSpec {
    pub edge_weights: BTreeMap<EdgeLabel, u64>,
    pub data_weights: BTreeMap<DataValue, u64>,
    pub default_edge: u64,
    pub default_data: u64,
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec {
            edge_weights: BTreeMap::new(),
            data_weights: BTreeMap::new(),
            default_edge: 1,
            default_data: 1,
        }
    }
}

/// Weight aggregation overflowed the machine integer range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightOverflow;

impl fmt::Display for WeightOverflow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("weight aggregation overflowed")
    }
}

impl core::error::Error for WeightOverflow {}

impl WeightSpec {
    pub fn edge_weight(&self, label: &EdgeLabel) -> u64 {
        self.edge_weights
            .get(label)
            .copied()
            .unwrap_or(self.default_edge)
    }

    pub fn data_weight(&self, value: &DataValue) -> u64 {
        self.data_weights
            .get(value)
            .copied()
            .unwrap_or(self.default_data)
    }

    pub fn symbol_weight(&self, sym: &Symbol) -> u64 {
        match sym {
            Symbol::Edge(l) => self.edge_weight(l),
            Symbol::Data(v) => self.data_weight(v),
        }
    }

    /// Total weight of a graph: the sum of the weights of every edge
    /// label occurrence plus the weights of every node's data value.
    pub fn weight_of(&self, g: &DataGraph) -> Result<u64, WeightOverflow> {
        let mut total: u64 = 0;
        for (_, _, label) in g.iter_edges() {
            total = total
                .checked_add(self.edge_weight(label))
                .ok_or(WeightOverflow)?;
        }
        for (_, data) in g.iter_nodes() {
            total = total
                .checked_add(self.data_weight(data))
                .ok_or(WeightOverflow)?;
        }
        Ok(total)
    }
}

/// A finite multiset over the combined alphabet. Only symbols with a
/// nonzero count are stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct GraphMultiset {
    counts: BTreeMap<Symbol, u64>,
}

impl GraphMultiset {
    pub fn empty() -> Self {
        GraphMultiset::default()
    }

    pub fn from_counts<I: IntoIterator<Item = (Symbol, u64)>>(counts: I) -> Self {
        let mut m = GraphMultiset::empty();
        for (sym, n) in counts {
            if n > 0 {
                *m.counts.entry(sym).or_insert(0) += n;
            }
        }
        m
    }

    /// The multiset of edges and data values of a graph: each edge label
    /// counted once per node pair carrying it, each data value counted
    /// once per node holding it.
    pub fn of_graph(g: &DataGraph) -> Self {
        let mut m = GraphMultiset::empty();
        for (_, _, label) in g.iter_edges() {
            *m.counts.entry(Symbol::Edge(label.clone())).or_insert(0) += 1;
        }
        for (_, data) in g.iter_nodes() {
            *m.counts.entry(Symbol::Data(data.clone())).or_insert(0) += 1;
        }
        m
    }

    pub fn count(&self, sym: &Symbol) -> u64 {
        self.counts.get(sym).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, u64)> {
        self.counts.iter().map(|(s, n)| (s, *n))
    }

    /// Pointwise comparison; used by the subgraph/multiset interaction
    /// properties.
    pub fn pointwise_le(&self, other: &Self) -> bool {
        self.counts.iter().all(|(s, n)| *n <= other.count(s))
    }
}

/// Convenience alias for [`GraphMultiset::of_graph`].
pub fn multiset_of(g: &DataGraph) -> GraphMultiset {
    GraphMultiset::of_graph(g)
}

/// Errors raised while building a [`SymbolOrder`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderError {
    DuplicateSymbol(String),
    /// The declared pairs close into a cycle (some x < x).
    Cycle(String),
}

impl fmt::Display for OrderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderError::DuplicateSymbol(s) => write!(f, "symbol {s:?} declared twice"),
            OrderError::Cycle(s) => write!(f, "order pairs form a cycle through {s:?}"),
        }
    }
}

impl core::error::Error for OrderError {}

/// A strict partial order over a finite declared set of symbol names,
/// closed under transitivity at construction time. Symbols outside the
/// declared set are incomparable to everything.
///
/// Irreflexivity plus finiteness make the order well founded.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolOrder {
    declared: BTreeSet<String>,
    less: BTreeSet<(String, String)>,
}

impl SymbolOrder {
    /// The empty order: every pair of symbols incomparable.
    pub fn unordered() -> Self {
        SymbolOrder::default()
    }

    /// Builds the order from declared symbols and `x < y` pairs, taking
    /// the transitive closure and rejecting cycles. Symbols appearing
    /// only in pairs join the declared set.
    pub fn try_new<S, P>(symbols: S, pairs: P) -> Result<Self, OrderError>
    where
        S: IntoIterator<Item = String>,
        P: IntoIterator<Item = (String, String)>,
    {
        let mut declared = BTreeSet::new();
        for s in symbols {
            if !declared.insert(s.clone()) {
                return Err(OrderError::DuplicateSymbol(s));
            }
        }
        let mut less: BTreeSet<(String, String)> = BTreeSet::new();
        for (x, y) in pairs {
            declared.insert(x.clone());
            declared.insert(y.clone());
            less.insert((x, y));
        }
        // Transitive closure by iteration; the declared set is small.
        loop {
            let mut added = Vec::new();
            for (x, y) in &less {
                for (y2, z) in &less {
                    if y == y2 && !less.contains(&(x.clone(), z.clone())) {
                        added.push((x.clone(), z.clone()));
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            less.extend(added);
        }
        for (x, y) in &less {
            if x == y {
                return Err(OrderError::Cycle(x.clone()));
            }
        }
        Ok(SymbolOrder { declared, less })
    }

    /// Builds a total chain `s0 < s1 < ... < sk` from the given sequence.
    pub fn chain<I: IntoIterator<Item = String>>(symbols: I) -> Result<Self, OrderError> {
        let syms: Vec<String> = symbols.into_iter().collect();
        let pairs: Vec<(String, String)> = syms
            .iter()
            .enumerate()
            .flat_map(|(i, x)| syms.iter().skip(i + 1).map(move |y| (x.clone(), y.clone())))
            .collect();
        Self::try_new(syms, pairs)
    }

    pub fn declared(&self) -> impl Iterator<Item = &str> {
        self.declared.iter().map(String::as_str)
    }

    pub fn less_by_name(&self, x: &str, y: &str) -> bool {
        // Borrowed lookup without cloning the pair.
        self.less
            .range((x.to_owned(), String::new())..)
            .take_while(|(a, _)| a == x)
            .any(|(_, b)| b == y)
    }

    pub fn less(&self, x: &Symbol, y: &Symbol) -> bool {
        self.less_by_name(x.name(), y.name())
    }
}

/// Dershowitz–Manna multiset ordering lifted from a symbol order:
/// `m1 < m2` iff the multisets differ and every symbol on which `m1`
/// exceeds `m2` is compensated by some strictly greater symbol on which
/// `m2` exceeds `m1`.
pub fn multiset_less(m1: &GraphMultiset, m2: &GraphMultiset, ord: &SymbolOrder) -> bool {
    if m1 == m2 {
        return false;
    }
    // Justifying symbols must have m1(y) < m2(y), hence lie in m2's support.
    m1.iter().all(|(x, n1)| {
        let n2 = m2.count(x);
        n1 <= n2
            || m2
                .iter()
                .any(|(y, c2)| m1.count(y) < c2 && ord.less(x, y))
    })
}

/// How repairs are ranked. `None` imposes no order (any repair is
/// acceptable).
#[derive(Debug, Clone)]
pub enum PreferenceCriterion {
    None,
    Weight(WeightSpec),
    Multiset(SymbolOrder),
}

/// The preference order on graphs induced by a criterion: weight mode
/// compares total weights, multiset mode compares graph multisets. With
/// `None` no graph precedes another.
pub fn graph_less(
    g1: &DataGraph,
    g2: &DataGraph,
    crit: &PreferenceCriterion,
) -> Result<bool, WeightOverflow> {
    match crit {
        PreferenceCriterion::None => Ok(false),
        PreferenceCriterion::Weight(w) => Ok(w.weight_of(g1)? < w.weight_of(g2)?),
        PreferenceCriterion::Multiset(ord) => Ok(multiset_less(
            &GraphMultiset::of_graph(g1),
            &GraphMultiset::of_graph(g2),
            ord,
        )),
    }
}
