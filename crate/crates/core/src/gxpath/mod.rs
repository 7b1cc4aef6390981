//! Expression language for data-graph constraints: abstract syntax,
//! concrete text syntax, and fragment classification.
//!
//! The concrete grammar (one expression per string):
//!
//! ```text
//! path  := `eps` | `_` | LABEL | LABEL^- | path.path | path + path
//!        | path & path | path* | !path | [node] | path{n,m} | path => path
//! node  := ="VALUE" | !="VALUE" | !node | node + node | node & node
//!        | <path> | <path = path> | <path != path> | node => node
//! ```
//!
//! `LABEL` is a bare identifier or a double-quoted string; `VALUE` is
//! always quoted. Precedence, tightest first: postfix (`*`, `^-`,
//! `{n,m}`), prefix `!`, `.`, `&`, `+`, `=>`; parentheses group freely.
//! `^-` applies to labels only, `{n,m}` requires `n <= m`.
//!
//! Implication is sugar and is desugared while parsing: `A => B` becomes
//! `B + !A` in both sorts, so parsed trees never contain an implication
//! node and an expression written with `=>` classifies as non-positive.

mod parse;
mod print;

pub use parse::{parse_node, parse_path, ParseError, ParseErrorKind};
pub use print::{pretty_node, pretty_path};

use crate::datagraph::{DataValue, EdgeLabel};
use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A path expression; denotes a set of ordered node pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathExpr {
    /// The identity relation.
    Epsilon,
    /// Any single edge regardless of label.
    Wildcard,
    /// A single edge with the given label.
    Label(EdgeLabel),
    /// A single edge with the given label, traversed backwards.
    Inverse(EdgeLabel),
    Concat(Box<PathExpr>, Box<PathExpr>),
    Union(Box<PathExpr>, Box<PathExpr>),
    Intersect(Box<PathExpr>, Box<PathExpr>),
    /// Reflexive transitive closure.
    Star(Box<PathExpr>),
    /// All pairs not related by the operand.
    Complement(Box<PathExpr>),
    /// Pairs (v, v) where the node expression holds at v.
    NodeTest(Box<NodeExpr>),
    /// Between n and m concatenated copies; zero copies mean epsilon.
    Repeat(Box<PathExpr>, u32, u32),
}

/// A node expression; denotes a set of nodes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeExpr {
    /// The node's data value equals the constant.
    DataEq(DataValue),
    /// The node's data value differs from the constant.
    DataNeq(DataValue),
    Not(Box<NodeExpr>),
    Or(Box<NodeExpr>, Box<NodeExpr>),
    And(Box<NodeExpr>, Box<NodeExpr>),
    /// Some path matching the operand leaves the node.
    Exists(Box<PathExpr>),
    /// Two paths reach nodes holding the same data value.
    ExistsEq(Box<PathExpr>, Box<PathExpr>),
    /// Two paths reach nodes holding different data values.
    ExistsNeq(Box<PathExpr>, Box<PathExpr>),
}

impl PathExpr {
    pub fn label(l: impl Into<EdgeLabel>) -> Self {
        PathExpr::Label(l.into())
    }

    pub fn inverse(l: impl Into<EdgeLabel>) -> Self {
        PathExpr::Inverse(l.into())
    }

    pub fn concat(self, rhs: PathExpr) -> Self {
        PathExpr::Concat(Box::new(self), Box::new(rhs))
    }

    pub fn union(self, rhs: PathExpr) -> Self {
        PathExpr::Union(Box::new(self), Box::new(rhs))
    }

    pub fn intersect(self, rhs: PathExpr) -> Self {
        PathExpr::Intersect(Box::new(self), Box::new(rhs))
    }

    pub fn star(self) -> Self {
        PathExpr::Star(Box::new(self))
    }

    pub fn complement(self) -> Self {
        PathExpr::Complement(Box::new(self))
    }

    pub fn repeat(self, n: u32, m: u32) -> Self {
        debug_assert!(n <= m, "repetition bounds must satisfy n <= m");
        PathExpr::Repeat(Box::new(self), n, m)
    }

    pub fn node_test(node: NodeExpr) -> Self {
        PathExpr::NodeTest(Box::new(node))
    }

    /// `self => rhs`, i.e. `rhs + !self`.
    pub fn implies(self, rhs: PathExpr) -> Self {
        rhs.union(self.complement())
    }
}

impl NodeExpr {
    pub fn data_eq(v: impl Into<DataValue>) -> Self {
        NodeExpr::DataEq(v.into())
    }

    pub fn data_neq(v: impl Into<DataValue>) -> Self {
        NodeExpr::DataNeq(v.into())
    }

    pub fn negate(self) -> Self {
        NodeExpr::Not(Box::new(self))
    }

    pub fn or(self, rhs: NodeExpr) -> Self {
        NodeExpr::Or(Box::new(self), Box::new(rhs))
    }

    pub fn and(self, rhs: NodeExpr) -> Self {
        NodeExpr::And(Box::new(self), Box::new(rhs))
    }

    pub fn exists(path: PathExpr) -> Self {
        NodeExpr::Exists(Box::new(path))
    }

    pub fn exists_eq(a: PathExpr, b: PathExpr) -> Self {
        NodeExpr::ExistsEq(Box::new(a), Box::new(b))
    }

    pub fn exists_neq(a: PathExpr, b: PathExpr) -> Self {
        NodeExpr::ExistsNeq(Box::new(a), Box::new(b))
    }

    /// `self => rhs`, i.e. `rhs + !self`.
    pub fn implies(self, rhs: NodeExpr) -> Self {
        rhs.or(self.negate())
    }
}

impl fmt::Display for PathExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_path(self))
    }
}

impl fmt::Display for NodeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_node(self))
    }
}

/// Named language fragments, most specific first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fragment {
    PosRegGXPathNode,
    PosRegGXPath,
    CoreGXPath,
    RegGXPath,
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fragment::PosRegGXPathNode => "pos-node",
            Fragment::PosRegGXPath => "pos",
            Fragment::CoreGXPath => "core",
            Fragment::RegGXPath => "full",
        })
    }
}

/// Fragment memberships of one expression. The positive and core
/// restrictions are independent, so an expression can sit in several
/// fragments at once; [`Classification::fragment`] picks the most
/// specific one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    /// No path complement and no node negation occur (intersection is
    /// allowed).
    pub positive: bool,
    /// Every star argument is a single label or inverted label.
    pub core: bool,
    /// The expression is a node expression.
    pub node_expr: bool,
}

impl Classification {
    pub fn fragment(&self) -> Fragment {
        if self.positive && self.node_expr {
            Fragment::PosRegGXPathNode
        } else if self.positive {
            Fragment::PosRegGXPath
        } else if self.core {
            Fragment::CoreGXPath
        } else {
            Fragment::RegGXPath
        }
    }
}

fn path_positive(p: &PathExpr) -> bool {
    match p {
        PathExpr::Epsilon | PathExpr::Wildcard | PathExpr::Label(_) | PathExpr::Inverse(_) => true,
        PathExpr::Concat(a, b) | PathExpr::Union(a, b) | PathExpr::Intersect(a, b) => {
            path_positive(a) && path_positive(b)
        }
        PathExpr::Star(a) | PathExpr::Repeat(a, _, _) => path_positive(a),
        PathExpr::Complement(_) => false,
        PathExpr::NodeTest(n) => node_positive(n),
    }
}

fn node_positive(n: &NodeExpr) -> bool {
    match n {
        NodeExpr::DataEq(_) | NodeExpr::DataNeq(_) => true,
        NodeExpr::Not(_) => false,
        NodeExpr::Or(a, b) | NodeExpr::And(a, b) => node_positive(a) && node_positive(b),
        NodeExpr::Exists(p) => path_positive(p),
        NodeExpr::ExistsEq(a, b) | NodeExpr::ExistsNeq(a, b) => {
            path_positive(a) && path_positive(b)
        }
    }
}

fn path_core(p: &PathExpr) -> bool {
    match p {
        PathExpr::Epsilon | PathExpr::Wildcard | PathExpr::Label(_) | PathExpr::Inverse(_) => true,
        PathExpr::Concat(a, b) | PathExpr::Union(a, b) | PathExpr::Intersect(a, b) => {
            path_core(a) && path_core(b)
        }
        PathExpr::Star(a) => {
            matches!(**a, PathExpr::Label(_) | PathExpr::Inverse(_))
        }
        PathExpr::Repeat(a, _, _) | PathExpr::Complement(a) => path_core(a),
        PathExpr::NodeTest(n) => node_core(n),
    }
}

fn node_core(n: &NodeExpr) -> bool {
    match n {
        NodeExpr::DataEq(_) | NodeExpr::DataNeq(_) => true,
        NodeExpr::Not(a) => node_core(a),
        NodeExpr::Or(a, b) | NodeExpr::And(a, b) => node_core(a) && node_core(b),
        NodeExpr::Exists(p) => path_core(p),
        NodeExpr::ExistsEq(a, b) | NodeExpr::ExistsNeq(a, b) => path_core(a) && path_core(b),
    }
}

pub fn classify_path(p: &PathExpr) -> Classification {
    Classification {
        positive: path_positive(p),
        core: path_core(p),
        node_expr: false,
    }
}

pub fn classify_node(n: &NodeExpr) -> Classification {
    Classification {
        positive: node_positive(n),
        core: node_core(n),
        node_expr: true,
    }
}

/// One constraint: a node expression required at every node, or a path
/// expression required at every ordered node pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Constraint {
    Node(NodeExpr),
    Path(PathExpr),
}

impl Constraint {
    pub fn classification(&self) -> Classification {
        match self {
            Constraint::Node(n) => classify_node(n),
            Constraint::Path(p) => classify_path(p),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Node(n) => write!(f, "node: {n}"),
            Constraint::Path(p) => write!(f, "path: {p}"),
        }
    }
}

/// Error raised while reading a constraint file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintParseError {
    /// 1-based line number in the file.
    pub line: u32,
    pub kind: ConstraintParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintParseErrorKind {
    /// The line lacks the required `node:` or `path:` prefix.
    MissingSortPrefix,
    Expr(ParseError),
}

impl fmt::Display for ConstraintParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ConstraintParseErrorKind::MissingSortPrefix => write!(
                f,
                "line {}: every constraint needs a `node:` or `path:` prefix",
                self.line
            ),
            ConstraintParseErrorKind::Expr(e) => write!(f, "line {}: {e}", self.line),
        }
    }
}

impl core::error::Error for ConstraintParseError {}

/// An ordered list of constraints. Violation reports refer to
/// constraints by their position in this list, which for files is the
/// order the lines appear in.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    constraints: Vec<Constraint>,
}

impl ConstraintSet {
    pub fn new(constraints: Vec<Constraint>) -> Self {
        ConstraintSet { constraints }
    }

    /// Parses the text form: one constraint per line, each prefixed with
    /// `node:` or `path:`; blank lines and lines starting with `#` are
    /// skipped.
    pub fn parse(text: &str) -> Result<Self, ConstraintParseError> {
        let mut constraints = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = (i + 1) as u32;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |kind| ConstraintParseError {
                line: line_no,
                kind,
            };
            let constraint = if let Some(rest) = line.strip_prefix("node:") {
                Constraint::Node(
                    parse_node(rest).map_err(|e| err(ConstraintParseErrorKind::Expr(e)))?,
                )
            } else if let Some(rest) = line.strip_prefix("path:") {
                Constraint::Path(
                    parse_path(rest).map_err(|e| err(ConstraintParseErrorKind::Expr(e)))?,
                )
            } else {
                return Err(err(ConstraintParseErrorKind::MissingSortPrefix));
            };
            constraints.push(constraint);
        }
        Ok(ConstraintSet { constraints })
    }

    /// Renders the text form; `parse` of the result reproduces the set.
    pub fn to_text(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        for c in &self.constraints {
            let _ = writeln!(out, "{c}");
        }
        out
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter()
    }

    pub fn get(&self, idx: usize) -> Option<&Constraint> {
        self.constraints.get(idx)
    }

    pub fn node_constraints(&self) -> impl Iterator<Item = &NodeExpr> {
        self.constraints.iter().filter_map(|c| match c {
            Constraint::Node(n) => Some(n),
            Constraint::Path(_) => None,
        })
    }

    pub fn path_constraints(&self) -> impl Iterator<Item = &PathExpr> {
        self.constraints.iter().filter_map(|c| match c {
            Constraint::Path(p) => Some(p),
            Constraint::Node(_) => None,
        })
    }

    pub fn all_positive(&self) -> bool {
        self.constraints
            .iter()
            .all(|c| c.classification().positive)
    }

    /// True when every constraint is a positive node expression; the
    /// fragment with a unique polynomial subset repair.
    pub fn all_positive_node(&self) -> bool {
        self.constraints.iter().all(|c| {
            let cls = c.classification();
            cls.positive && cls.node_expr
        })
    }

    /// Edge labels mentioned anywhere in the constraints.
    pub fn edge_labels(&self) -> BTreeSet<EdgeLabel> {
        let mut out = BTreeSet::new();
        for c in &self.constraints {
            match c {
                Constraint::Node(n) => collect_labels_node(n, &mut out),
                Constraint::Path(p) => collect_labels_path(p, &mut out),
            }
        }
        out
    }

    /// Data constants mentioned anywhere in the constraints.
    pub fn data_constants(&self) -> BTreeSet<DataValue> {
        let mut out = BTreeSet::new();
        for c in &self.constraints {
            match c {
                Constraint::Node(n) => collect_consts_node(n, &mut out),
                Constraint::Path(p) => collect_consts_path(p, &mut out),
            }
        }
        out
    }
}

fn collect_labels_path(p: &PathExpr, out: &mut BTreeSet<EdgeLabel>) {
    match p {
        PathExpr::Epsilon | PathExpr::Wildcard => {}
        PathExpr::Label(l) | PathExpr::Inverse(l) => {
            out.insert(l.clone());
        }
        PathExpr::Concat(a, b) | PathExpr::Union(a, b) | PathExpr::Intersect(a, b) => {
            collect_labels_path(a, out);
            collect_labels_path(b, out);
        }
        PathExpr::Star(a) | PathExpr::Complement(a) | PathExpr::Repeat(a, _, _) => {
            collect_labels_path(a, out)
        }
        PathExpr::NodeTest(n) => collect_labels_node(n, out),
    }
}

fn collect_labels_node(n: &NodeExpr, out: &mut BTreeSet<EdgeLabel>) {
    match n {
        NodeExpr::DataEq(_) | NodeExpr::DataNeq(_) => {}
        NodeExpr::Not(a) => collect_labels_node(a, out),
        NodeExpr::Or(a, b) | NodeExpr::And(a, b) => {
            collect_labels_node(a, out);
            collect_labels_node(b, out);
        }
        NodeExpr::Exists(p) => collect_labels_path(p, out),
        NodeExpr::ExistsEq(a, b) | NodeExpr::ExistsNeq(a, b) => {
            collect_labels_path(a, out);
            collect_labels_path(b, out);
        }
    }
}

fn collect_consts_path(p: &PathExpr, out: &mut BTreeSet<DataValue>) {
    match p {
        PathExpr::Epsilon | PathExpr::Wildcard | PathExpr::Label(_) | PathExpr::Inverse(_) => {}
        PathExpr::Concat(a, b) | PathExpr::Union(a, b) | PathExpr::Intersect(a, b) => {
            collect_consts_path(a, out);
            collect_consts_path(b, out);
        }
        PathExpr::Star(a) | PathExpr::Complement(a) | PathExpr::Repeat(a, _, _) => {
            collect_consts_path(a, out)
        }
        PathExpr::NodeTest(n) => collect_consts_node(n, out),
    }
}

fn collect_consts_node(n: &NodeExpr, out: &mut BTreeSet<DataValue>) {
    match n {
        NodeExpr::DataEq(v) | NodeExpr::DataNeq(v) => {
            out.insert(v.clone());
        }
        NodeExpr::Not(a) => collect_consts_node(a, out),
        NodeExpr::Or(a, b) | NodeExpr::And(a, b) => {
            collect_consts_node(a, out);
            collect_consts_node(b, out);
        }
        NodeExpr::Exists(p) => collect_consts_path(p, out),
        NodeExpr::ExistsEq(a, b) | NodeExpr::ExistsNeq(a, b) => {
            collect_consts_path(a, out);
            collect_consts_path(b, out);
        }
    }
}
