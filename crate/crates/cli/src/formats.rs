//! File formats: graph, weight and order JSON documents, constraint
//! files, DIMACS CNF input, and the JSON renderings of results.
//!
//! Output is canonical: maps and lists are sorted, so identical inputs
//! produce identical bytes.

use gxrepair_core::consistency::{Verdict, Witness};
use gxrepair_core::datagraph::{
    Alphabets, DataGraph, DataValue, EdgeLabel, NodeId, SymbolOrder, WeightSpec,
};
use gxrepair_core::reductions::Cnf3;
use gxrepair_core::repair::{Maximality, RepairResult, RepairStatus};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug)]
pub enum FormatError {
    Json(serde_json::Error),
    Graph(gxrepair_core::datagraph::GraphError),
    Order(gxrepair_core::datagraph::OrderError),
    Cnf(String),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Json(e) => write!(f, "{e}"),
            FormatError::Graph(e) => write!(f, "{e}"),
            FormatError::Order(e) => write!(f, "{e}"),
            FormatError::Cnf(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for FormatError {}

impl FormatError {
    pub fn kind(&self) -> &'static str {
        match self {
            FormatError::Json(_) => "json",
            FormatError::Graph(_) => "graph",
            FormatError::Order(_) => "order",
            FormatError::Cnf(_) => "cnf",
        }
    }
}

// ----- graphs -----

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: String,
    data: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    from: String,
    to: String,
    label: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    nodes: Vec<NodeDoc>,
    edges: Vec<EdgeDoc>,
}

/// Parses the graph document, rejecting duplicate nodes, duplicate edge
/// triples, dangling endpoints, and names used as both an edge label and
/// a data value.
pub fn graph_from_json(text: &str) -> Result<DataGraph, FormatError> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(FormatError::Json)?;
    let graph = DataGraph::from_parts(
        doc.nodes
            .into_iter()
            .map(|n| (NodeId::new(n.id), DataValue::new(n.data))),
        doc.edges
            .into_iter()
            .map(|e| (NodeId::new(e.from), NodeId::new(e.to), EdgeLabel::new(e.label))),
    )
    .map_err(FormatError::Graph)?;
    Alphabets::of_graph(&graph).map_err(FormatError::Graph)?;
    Ok(graph)
}

pub fn graph_to_value(g: &DataGraph) -> serde_json::Value {
    let doc = GraphDoc {
        nodes: g
            .iter_nodes()
            .map(|(id, data)| NodeDoc {
                id: id.as_str().to_owned(),
                data: data.as_str().to_owned(),
            })
            .collect(),
        edges: g
            .iter_edges()
            .map(|(from, to, label)| EdgeDoc {
                from: from.as_str().to_owned(),
                to: to.as_str().to_owned(),
                label: label.as_str().to_owned(),
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("graph documents serialize")
}

pub fn graph_to_json(g: &DataGraph, pretty: bool) -> String {
    render(&graph_to_value(g), pretty)
}

// ----- weights -----

fn default_unit() -> u64 {
    1
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsDoc {
    #[serde(default)]
    edge_weights: BTreeMap<String, u64>,
    #[serde(default)]
    data_weights: BTreeMap<String, u64>,
    #[serde(default = "default_unit")]
    default_edge: u64,
    #[serde(default = "default_unit")]
    default_data: u64,
}

pub fn weights_from_json(text: &str) -> Result<WeightSpec, FormatError> {
    let doc: WeightsDoc = serde_json::from_str(text).map_err(FormatError::Json)?;
    Ok(WeightSpec {
        edge_weights: doc
            .edge_weights
            .into_iter()
            .map(|(k, v)| (EdgeLabel::new(k), v))
            .collect(),
        data_weights: doc
            .data_weights
            .into_iter()
            .map(|(k, v)| (DataValue::new(k), v))
            .collect(),
        default_edge: doc.default_edge,
        default_data: doc.default_data,
    })
}

pub fn weights_to_json(w: &WeightSpec, pretty: bool) -> String {
    let doc = WeightsDoc {
        edge_weights: w
            .edge_weights
            .iter()
            .map(|(k, v)| (k.as_str().to_owned(), *v))
            .collect(),
        data_weights: w
            .data_weights
            .iter()
            .map(|(k, v)| (k.as_str().to_owned(), *v))
            .collect(),
        default_edge: w.default_edge,
        default_data: w.default_data,
    };
    render(&serde_json::to_value(doc).expect("weight documents serialize"), pretty)
}

// ----- symbol orders -----

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrderDoc {
    symbols: Vec<String>,
    #[serde(default)]
    less_than: Vec<(String, String)>,
}

pub fn order_from_json(text: &str) -> Result<SymbolOrder, FormatError> {
    let doc: OrderDoc = serde_json::from_str(text).map_err(FormatError::Json)?;
    SymbolOrder::try_new(doc.symbols, doc.less_than).map_err(FormatError::Order)
}

pub fn order_to_json(ord: &SymbolOrder, pretty: bool) -> String {
    let symbols: Vec<String> = ord.declared().map(str::to_owned).collect();
    let mut less_than: Vec<(String, String)> = Vec::new();
    for x in ord.declared() {
        for y in ord.declared() {
            if ord.less_by_name(x, y) {
                less_than.push((x.to_owned(), y.to_owned()));
            }
        }
    }
    let doc = OrderDoc { symbols, less_than };
    render(&serde_json::to_value(doc).expect("order documents serialize"), pretty)
}

// ----- DIMACS -----

/// Parses DIMACS CNF: a `p cnf <vars> <clauses>` header, `c` comment
/// lines, and zero-terminated clauses that may span lines. A trailing
/// `%` section marker is tolerated.
pub fn cnf_from_dimacs(text: &str) -> Result<Cnf3, FormatError> {
    let mut num_vars: Option<u32> = None;
    let mut declared_clauses: Option<usize> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line == "%" {
            break;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let mut parts = rest.split_whitespace();
            if parts.next() != Some("cnf") {
                return Err(FormatError::Cnf(format!(
                    "line {}: expected `p cnf <vars> <clauses>`",
                    lineno + 1
                )));
            }
            let vars = parts
                .next()
                .and_then(|s| s.parse::<u32>().ok())
                .ok_or_else(|| {
                    FormatError::Cnf(format!("line {}: bad variable count", lineno + 1))
                })?;
            let n_clauses = parts
                .next()
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| {
                    FormatError::Cnf(format!("line {}: bad clause count", lineno + 1))
                })?;
            num_vars = Some(vars);
            declared_clauses = Some(n_clauses);
            continue;
        }
        if num_vars.is_none() {
            return Err(FormatError::Cnf(format!(
                "line {}: clause before the `p cnf` header",
                lineno + 1
            )));
        }
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| {
                FormatError::Cnf(format!("line {}: bad literal {tok:?}", lineno + 1))
            })?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                let lit = i32::try_from(lit).map_err(|_| {
                    FormatError::Cnf(format!("line {}: literal {lit} out of range", lineno + 1))
                })?;
                current.push(lit);
            }
        }
    }
    if !current.is_empty() {
        return Err(FormatError::Cnf("unterminated final clause".to_owned()));
    }
    let num_vars = num_vars.ok_or_else(|| FormatError::Cnf("missing `p cnf` header".to_owned()))?;
    if let Some(declared) = declared_clauses {
        if clauses.len() != declared {
            return Err(FormatError::Cnf(format!(
                "header declares {declared} clauses, found {}",
                clauses.len()
            )));
        }
    }
    Cnf3::new(num_vars, clauses).map_err(|e| FormatError::Cnf(e.to_string()))
}

// ----- results -----

fn witness_value(w: &Witness) -> serde_json::Value {
    match w {
        Witness::Node(id) => serde_json::json!([id.as_str()]),
        Witness::Pair(a, b) => serde_json::json!([a.as_str(), b.as_str()]),
    }
}

pub fn verdict_to_json(verdict: &Verdict, pretty: bool) -> String {
    let violations: Vec<serde_json::Value> = verdict
        .violations
        .iter()
        .map(|v| {
            serde_json::json!({
                "constraint": v.constraint,
                "witness": witness_value(&v.witness),
            })
        })
        .collect();
    render(
        &serde_json::json!({
            "consistent": verdict.consistent,
            "violations": violations,
        }),
        pretty,
    )
}

pub fn status_str(status: RepairStatus) -> &'static str {
    match status {
        RepairStatus::Repaired => "repaired",
        RepairStatus::Trivial => "trivial",
        RepairStatus::NoneFound => "none",
        RepairStatus::UnknownBeyondBudget => "unknown_beyond_budget",
    }
}

pub fn maximality_str(m: Maximality) -> &'static str {
    match m {
        Maximality::Verified => "verified",
        Maximality::OneStepLocal => "one_step",
    }
}

pub fn repair_result_to_json(result: &RepairResult, pretty: bool) -> String {
    render(
        &serde_json::json!({
            "status": status_str(result.status),
            "maximality": maximality_str(result.maximality),
            "explored": result.explored,
            "extra_weight": result.extra_weight,
            "repair": result.repair.as_ref().map(graph_to_value),
        }),
        pretty,
    )
}

pub fn render(value: &serde_json::Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(value).expect("values render")
    } else {
        serde_json::to_string(value).expect("values render")
    }
}
