//! Set-based evaluation of expressions over one data-graph.
//!
//! Every clause materializes its full denotation: node expressions
//! evaluate to node sets, path expressions to relations over V × V.
//! Relations are bit matrices, so complement, star (cubic worst case)
//! and composition stay cheap at the graph sizes this engine targets.
//! An [`Evaluator`] memoizes each distinct sub-expression for its graph;
//! memo tables are per-evaluator and never shared.
//!
//! Edge labels absent from the graph denote the empty relation; a data
//! test for a value no node holds denotes the empty set (equality) or
//! all nodes (inequality).

use crate::datagraph::{DataGraph, NodeId};
use crate::gxpath::{NodeExpr, PathExpr};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

/// Denotation of a node expression.
pub type NodeSet = BTreeSet<NodeId>;

/// Denotation of a path expression.
pub type PairSet = BTreeSet<(NodeId, NodeId)>;

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// A subset of the graph's nodes as a bit vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct NodeBits {
    n: usize,
    words: Vec<u64>,
}

impl NodeBits {
    pub(crate) fn empty(n: usize) -> Self {
        NodeBits {
            n,
            words: vec![0; words_for(n)],
        }
    }

    pub(crate) fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub(crate) fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1u64 << (i % 64)) != 0
    }

    pub(crate) fn union_with(&mut self, other: &NodeBits) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub(crate) fn intersect_with(&mut self, other: &NodeBits) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
    }

    pub(crate) fn complement(&self) -> NodeBits {
        let mut out = NodeBits::empty(self.n);
        for (i, (w, o)) in out.words.iter_mut().zip(&self.words).enumerate() {
            *w = !o & mask_last(self.n, i);
        }
        out
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub(crate) fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        // Dense sizes are small; a scan is fine.
        (0..self.n).filter(move |&i| self.contains(i))
    }
}

fn mask_last(n: usize, word_idx: usize) -> u64 {
    let full_words = n / 64;
    if word_idx < full_words {
        u64::MAX
    } else {
        let rem = n % 64;
        if rem == 0 {
            0
        } else {
            (1u64 << rem) - 1
        }
    }
}

/// A binary relation over the graph's nodes as a row-major bit matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Relation {
    n: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl Relation {
    pub(crate) fn empty(n: usize) -> Self {
        let stride = words_for(n);
        Relation {
            n,
            stride,
            bits: vec![0; stride * n],
        }
    }

    pub(crate) fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    pub(crate) fn full(n: usize) -> Self {
        Self::empty(n).complement()
    }

    pub(crate) fn insert(&mut self, i: usize, j: usize) {
        self.bits[i * self.stride + j / 64] |= 1u64 << (j % 64);
    }

    pub(crate) fn contains(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.stride + j / 64] & (1u64 << (j % 64)) != 0
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    pub(crate) fn union_with(&mut self, other: &Relation) {
        for (w, o) in self.bits.iter_mut().zip(&other.bits) {
            *w |= o;
        }
    }

    pub(crate) fn intersect_with(&mut self, other: &Relation) {
        for (w, o) in self.bits.iter_mut().zip(&other.bits) {
            *w &= o;
        }
    }

    pub(crate) fn complement(&self) -> Relation {
        let mut out = Relation::empty(self.n);
        for i in 0..self.n {
            for wi in 0..self.stride {
                out.bits[i * self.stride + wi] =
                    !self.bits[i * self.stride + wi] & mask_last(self.n, wi);
            }
        }
        out
    }

    /// Relation composition: `(i, k)` when `(i, j)` here and `(j, k)` in
    /// `other` for some `j`.
    pub(crate) fn compose(&self, other: &Relation) -> Relation {
        let mut out = Relation::empty(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if self.contains(i, j) {
                    let row_i = &mut out.bits[i * self.stride..(i + 1) * self.stride];
                    for (w, o) in row_i.iter_mut().zip(other.row(j)) {
                        *w |= o;
                    }
                }
            }
        }
        out
    }

    /// Reflexive transitive closure.
    pub(crate) fn star(&self) -> Relation {
        let mut r = self.clone();
        for k in 0..self.n {
            for i in 0..self.n {
                if r.contains(i, k) {
                    let row_k: Vec<u64> = r.row(k).to_vec();
                    let row_i = &mut r.bits[i * self.stride..(i + 1) * self.stride];
                    for (w, o) in row_i.iter_mut().zip(&row_k) {
                        *w |= o;
                    }
                }
            }
        }
        r.union_with(&Relation::identity(self.n));
        r
    }

    /// Exact k-fold composition power by binary exponentiation; the
    /// zeroth power is the identity.
    pub(crate) fn pow(&self, mut k: u32) -> Relation {
        let mut result = Relation::identity(self.n);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose(&base);
            }
            k >>= 1;
            if k > 0 {
                let squared = base.compose(&base);
                if squared == base {
                    // Fixpoint: higher powers repeat.
                    return result.compose(&base);
                }
                base = squared;
            }
        }
        result
    }

    /// Nodes with at least one outgoing pair.
    pub(crate) fn domain(&self) -> NodeBits {
        let mut out = NodeBits::empty(self.n);
        for i in 0..self.n {
            if self.row(i).iter().any(|w| *w != 0) {
                out.insert(i);
            }
        }
        out
    }

    pub(crate) fn is_full(&self) -> bool {
        *self == Relation::full(self.n)
    }

    pub(crate) fn iter_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (0..self.n).filter_map(move |j| self.contains(i, j).then_some((i, j))))
    }
}

/// Memoizing evaluator bound to one graph. Cheap to create; create one
/// per graph.
pub struct Evaluator<'g> {
    g: &'g DataGraph,
    ids: Vec<NodeId>,
    index: BTreeMap<NodeId, usize>,
    /// Data-value equivalence class per node, for the data joins.
    data_class: Vec<usize>,
    n: usize,
    path_memo: BTreeMap<PathExpr, Relation>,
    node_memo: BTreeMap<NodeExpr, NodeBits>,
}

impl<'g> Evaluator<'g> {
    pub fn new(g: &'g DataGraph) -> Self {
        let ids: Vec<NodeId> = g.iter_nodes().map(|(id, _)| id.clone()).collect();
        let index: BTreeMap<NodeId, usize> =
            ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        let mut class_of: BTreeMap<&crate::datagraph::DataValue, usize> = BTreeMap::new();
        let mut data_class = Vec::with_capacity(ids.len());
        for (_, data) in g.iter_nodes() {
            let next = class_of.len();
            let class = *class_of.entry(data).or_insert(next);
            data_class.push(class);
        }
        let n = ids.len();
        Evaluator {
            g,
            ids,
            index,
            data_class,
            n,
            path_memo: BTreeMap::new(),
            node_memo: BTreeMap::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub(crate) fn graph(&self) -> &'g DataGraph {
        self.g
    }

    pub(crate) fn node_index(&self, id: &NodeId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub(crate) fn node_id(&self, idx: usize) -> &NodeId {
        &self.ids[idx]
    }

    pub(crate) fn path_bits(&mut self, p: &PathExpr) -> Relation {
        if let Some(hit) = self.path_memo.get(p) {
            return hit.clone();
        }
        let result = match p {
            PathExpr::Epsilon => Relation::identity(self.n),
            PathExpr::Wildcard => {
                let mut r = Relation::empty(self.n);
                for (from, to, _) in self.g.iter_edges() {
                    r.insert(self.index[from], self.index[to]);
                }
                r
            }
            PathExpr::Label(l) => {
                let mut r = Relation::empty(self.n);
                for (from, to, label) in self.g.iter_edges() {
                    if label == l {
                        r.insert(self.index[from], self.index[to]);
                    }
                }
                r
            }
            PathExpr::Inverse(l) => {
                let mut r = Relation::empty(self.n);
                for (from, to, label) in self.g.iter_edges() {
                    if label == l {
                        r.insert(self.index[to], self.index[from]);
                    }
                }
                r
            }
            PathExpr::Concat(a, b) => self.path_bits(a).compose(&self.path_bits(b)),
            PathExpr::Union(a, b) => {
                let mut r = self.path_bits(a);
                r.union_with(&self.path_bits(b));
                r
            }
            PathExpr::Intersect(a, b) => {
                let mut r = self.path_bits(a);
                r.intersect_with(&self.path_bits(b));
                r
            }
            PathExpr::Star(a) => self.path_bits(a).star(),
            PathExpr::Complement(a) => self.path_bits(a).complement(),
            PathExpr::NodeTest(inner) => {
                let bits = self.node_bits(inner);
                let mut r = Relation::empty(self.n);
                for i in bits.iter_ones() {
                    r.insert(i, i);
                }
                r
            }
            PathExpr::Repeat(a, low, high) => {
                let ra = self.path_bits(a);
                // base^low composed with (identity ∪ base)^(high - low):
                // exactly the paths using between low and high copies.
                let mut ladder = ra.clone();
                ladder.union_with(&Relation::identity(self.n));
                ra.pow(*low).compose(&ladder.pow(high.saturating_sub(*low)))
            }
        };
        self.path_memo.insert(p.clone(), result.clone());
        result
    }

    pub(crate) fn node_bits(&mut self, e: &NodeExpr) -> NodeBits {
        if let Some(hit) = self.node_memo.get(e) {
            return hit.clone();
        }
        let result = match e {
            NodeExpr::DataEq(c) => {
                let mut b = NodeBits::empty(self.n);
                for (i, (_, data)) in self.g.iter_nodes().enumerate() {
                    if data == c {
                        b.insert(i);
                    }
                }
                b
            }
            NodeExpr::DataNeq(c) => {
                let mut b = NodeBits::empty(self.n);
                for (i, (_, data)) in self.g.iter_nodes().enumerate() {
                    if data != c {
                        b.insert(i);
                    }
                }
                b
            }
            NodeExpr::Not(a) => self.node_bits(a).complement(),
            NodeExpr::Or(a, b) => {
                let mut r = self.node_bits(a);
                r.union_with(&self.node_bits(b));
                r
            }
            NodeExpr::And(a, b) => {
                let mut r = self.node_bits(a);
                r.intersect_with(&self.node_bits(b));
                r
            }
            NodeExpr::Exists(p) => self.path_bits(p).domain(),
            NodeExpr::ExistsEq(a, b) => self.data_join(a, b, true),
            NodeExpr::ExistsNeq(a, b) => self.data_join(a, b, false),
        };
        self.node_memo.insert(e.clone(), result.clone());
        result
    }

    /// `<a = b>` / `<a != b>`: nodes from which the two paths reach
    /// targets with equal (resp. different) data values.
    fn data_join(&mut self, a: &PathExpr, b: &PathExpr, equal: bool) -> NodeBits {
        let ra = self.path_bits(a);
        let rb = self.path_bits(b);
        let mut out = NodeBits::empty(self.n);
        for v in 0..self.n {
            let classes_a: BTreeSet<usize> =
                (0..self.n).filter(|&u| ra.contains(v, u)).map(|u| self.data_class[u]).collect();
            if classes_a.is_empty() {
                continue;
            }
            let classes_b: BTreeSet<usize> =
                (0..self.n).filter(|&w| rb.contains(v, w)).map(|w| self.data_class[w]).collect();
            if classes_b.is_empty() {
                continue;
            }
            let holds = if equal {
                classes_a.intersection(&classes_b).next().is_some()
            } else {
                // Some pair differs unless both sides name one shared value.
                !(classes_a.len() == 1 && classes_b.len() == 1 && classes_a == classes_b)
            };
            if holds {
                out.insert(v);
            }
        }
        out
    }

    pub(crate) fn to_node_set(&self, bits: &NodeBits) -> NodeSet {
        bits.iter_ones().map(|i| self.ids[i].clone()).collect()
    }

    pub(crate) fn to_pair_set(&self, rel: &Relation) -> PairSet {
        rel.iter_pairs()
            .map(|(i, j)| (self.ids[i].clone(), self.ids[j].clone()))
            .collect()
    }
}

/// Evaluates a path expression to its set of node pairs.
pub fn eval_path(g: &DataGraph, p: &PathExpr) -> PairSet {
    let mut ev = Evaluator::new(g);
    let r = ev.path_bits(p);
    ev.to_pair_set(&r)
}

/// Evaluates a node expression to its set of nodes.
pub fn eval_node(g: &DataGraph, e: &NodeExpr) -> NodeSet {
    let mut ev = Evaluator::new(g);
    let b = ev.node_bits(e);
    ev.to_node_set(&b)
}
