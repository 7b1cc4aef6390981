//! Command-line front end and file formats for the data-graph
//! constraint and repair engine.
//!
//! Payloads go to stdout as a single JSON document (`--pretty` for an
//! indented rendering); logs and diagnostics go to stderr. Exit codes:
//! 0 success (for `check`: consistent), 1 inconsistent (`check` only),
//! 2 any error, reported as `{"error": KIND, "message": TEXT}` on
//! stdout.

pub mod formats;
pub mod parallel;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use gxrepair_core::datagraph::{DataValue, EdgeLabel, PreferenceCriterion};
use gxrepair_core::gxpath::ConstraintSet;
use gxrepair_core::repair::{
    self, DataDomain, RepairError, RepairMode, SearchBudget,
};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(
    name = "gxrepair",
    version,
    about = "Check, evaluate and repair data-graphs against path constraints"
)]
struct Cli {
    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads for constraint checking (falls back to the
    /// GXREPAIR_THREADS environment variable, then 1).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide consistency and report violation witnesses.
    Check {
        #[arg(short = 'g', long = "graph")]
        graph: PathBuf,
        #[arg(short = 'c', long = "constraints")]
        constraints: PathBuf,
        /// Stop at the first violation instead of reporting all.
        #[arg(long)]
        first_violation: bool,
    },
    /// Evaluate one expression over a graph.
    Eval {
        #[arg(short = 'g', long = "graph")]
        graph: PathBuf,
        /// The expression text.
        #[arg(short = 'e', long = "expr")]
        expr: String,
        /// Which sort to parse the expression as.
        #[arg(long, value_enum)]
        sort: ExprSort,
    },
    /// Compute a repair (or all preferred repairs).
    Repair {
        #[arg(short = 'g', long = "graph")]
        graph: PathBuf,
        #[arg(short = 'c', long = "constraints")]
        constraints: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Preference criterion: `weight:FILE` or `mset:FILE`.
        #[arg(long)]
        prefer: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
        /// List every preferred repair instead of one.
        #[arg(long)]
        all_optima: bool,
        /// Use the naive powerset enumerator instead of the search.
        #[arg(long)]
        oracle: bool,
        /// Cap the number of repairs enumerated by --all-optima.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Answer the bounded decision problems over superset repairs.
    Decide {
        #[arg(long, value_enum)]
        problem: ProblemArg,
        #[arg(short = 'g', long = "graph")]
        graph: PathBuf,
        #[arg(short = 'c', long = "constraints")]
        constraints: PathBuf,
        #[arg(short = 'K', long = "bound")]
        bound: u64,
        /// Weight file (pw).
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Symbol order file (pmset).
        #[arg(long)]
        order: Option<PathBuf>,
        /// Edge label whose occurrences the bound counts (pmset).
        #[arg(long)]
        label: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Use the naive powerset enumerator instead of the search.
        #[arg(long)]
        oracle: bool,
    },
    /// Encode a DIMACS CNF formula as a repair instance directory.
    GenSat {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExprSort {
    Node,
    Path,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Subset,
    Superset,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProblemArg {
    Pw,
    Pmset,
}

#[derive(Debug, Args)]
struct BudgetArgs {
    /// Fresh nodes the superset search may invent.
    #[arg(long = "budget-nodes", default_value_t = 0)]
    budget_nodes: u32,
    /// Cap on the candidate edge pool.
    #[arg(long = "budget-edges")]
    budget_edges: Option<usize>,
    /// Cap on elements a repair may add or delete.
    #[arg(long = "budget-size")]
    budget_size: Option<usize>,
    /// Fresh-node data values (defaults to the active domain).
    #[arg(long = "data-values", value_delimiter = ',')]
    data_values: Option<Vec<String>>,
}

impl BudgetArgs {
    fn to_budget(&self) -> SearchBudget {
        SearchBudget {
            max_new_nodes: self.budget_nodes,
            data_domain: match &self.data_values {
                None => DataDomain::Active,
                Some(values) => {
                    DataDomain::Explicit(values.iter().map(DataValue::new).collect())
                }
            },
            max_candidate_edges: self.budget_edges,
            max_repair_size: self.budget_size,
        }
    }
}

struct CliError {
    kind: &'static str,
    message: String,
}

impl CliError {
    fn new(kind: &'static str, message: impl fmt::Display) -> Self {
        CliError {
            kind,
            message: message.to_string(),
        }
    }
}

impl From<formats::FormatError> for CliError {
    fn from(e: formats::FormatError) -> Self {
        CliError::new(e.kind(), e)
    }
}

impl From<RepairError> for CliError {
    fn from(e: RepairError) -> Self {
        let kind = match e {
            RepairError::BudgetExceeded(_) => "budget_exceeded",
            RepairError::SearchOverflow(_) => "search_overflow",
            RepairError::Weight(_) => "weight_overflow",
        };
        CliError::new(kind, e)
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<gxrepair_core::datagraph::DataGraph, CliError> {
    Ok(formats::graph_from_json(&read_file(path)?)?)
}

fn load_constraints(path: &Path) -> Result<ConstraintSet, CliError> {
    ConstraintSet::parse(&read_file(path)?).map_err(|e| CliError::new("constraints", e))
}

fn parse_prefer(
    spec: &Option<String>,
) -> Result<PreferenceCriterion, CliError> {
    let Some(spec) = spec else {
        return Ok(PreferenceCriterion::None);
    };
    if let Some(path) = spec.strip_prefix("weight:") {
        let text = read_file(Path::new(path))?;
        Ok(PreferenceCriterion::Weight(formats::weights_from_json(
            &text,
        )?))
    } else if let Some(path) = spec.strip_prefix("mset:") {
        let text = read_file(Path::new(path))?;
        Ok(PreferenceCriterion::Multiset(formats::order_from_json(
            &text,
        )?))
    } else {
        Err(CliError::new(
            "usage",
            "--prefer expects `weight:FILE` or `mset:FILE`",
        ))
    }
}

fn thread_count(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("GXREPAIR_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(1)
    .max(1)
}

/// Runs the command line; returns the process exit code. Output goes to
/// `out`.
pub fn run<I, S>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let message = e.render().to_string();
            let payload = formats::render(
                &serde_json::json!({"error": "usage", "message": message}),
                false,
            );
            let _ = writeln!(out, "{payload}");
            return 2;
        }
    };
    let pretty = cli.pretty;
    let threads = thread_count(cli.threads);
    match dispatch(cli.command, pretty, threads) {
        Ok((payload, code)) => {
            let _ = writeln!(out, "{payload}");
            code
        }
        Err(e) => {
            let payload = formats::render(
                &serde_json::json!({"error": e.kind, "message": e.message}),
                pretty,
            );
            let _ = writeln!(out, "{payload}");
            2
        }
    }
}

fn dispatch(command: Command, pretty: bool, threads: usize) -> Result<(String, i32), CliError> {
    match command {
        Command::Check {
            graph,
            constraints,
            first_violation,
        } => {
            let g = load_graph(&graph)?;
            let r = load_constraints(&constraints)?;
            let verdict = if first_violation {
                gxrepair_core::consistency::check_first(&g, &r)
            } else {
                parallel::check_parallel(&g, &r, threads)
            };
            let code = if verdict.consistent { 0 } else { 1 };
            Ok((formats::verdict_to_json(&verdict, pretty), code))
        }
        Command::Eval { graph, expr, sort } => {
            let g = load_graph(&graph)?;
            let payload = match sort {
                ExprSort::Node => {
                    let e = gxrepair_core::gxpath::parse_node(&expr)
                        .map_err(|e| CliError::new("expr", e))?;
                    let nodes = gxrepair_core::eval::eval_node(&g, &e);
                    let ids: Vec<&str> = nodes.iter().map(|n| n.as_str()).collect();
                    formats::render(
                        &serde_json::json!({"sort": "node", "nodes": ids}),
                        pretty,
                    )
                }
                ExprSort::Path => {
                    let e = gxrepair_core::gxpath::parse_path(&expr)
                        .map_err(|e| CliError::new("expr", e))?;
                    let pairs = gxrepair_core::eval::eval_path(&g, &e);
                    let items: Vec<[&str; 2]> = pairs
                        .iter()
                        .map(|(a, b)| [a.as_str(), b.as_str()])
                        .collect();
                    formats::render(
                        &serde_json::json!({"sort": "path", "pairs": items}),
                        pretty,
                    )
                }
            };
            Ok((payload, 0))
        }
        Command::Repair {
            graph,
            constraints,
            mode,
            prefer,
            budget,
            all_optima,
            oracle,
            limit,
        } => {
            let g = load_graph(&graph)?;
            let r = load_constraints(&constraints)?;
            let crit = parse_prefer(&prefer)?;
            let budget = budget.to_budget();
            let mode = match mode {
                ModeArg::Subset => RepairMode::Subset,
                ModeArg::Superset => RepairMode::Superset,
            };
            let payload = if all_optima {
                let optima = run_all_optima(&g, &r, &crit, &budget, mode, oracle, limit)?;
                let graphs: Vec<serde_json::Value> =
                    optima.iter().map(formats::graph_to_value).collect();
                formats::render(
                    &serde_json::json!({
                        "status": if graphs.is_empty() { "unknown_beyond_budget" } else { "repaired" },
                        "optima": graphs,
                    }),
                    pretty,
                )
            } else {
                let result = run_single_repair(&g, &r, &crit, &budget, mode, oracle)?;
                formats::repair_result_to_json(&result, pretty)
            };
            Ok((payload, 0))
        }
        Command::Decide {
            problem,
            graph,
            constraints,
            bound,
            weights,
            order,
            label,
            budget,
            oracle,
        } => {
            let g = load_graph(&graph)?;
            let r = load_constraints(&constraints)?;
            let budget = budget.to_budget();
            let decision = match problem {
                ProblemArg::Pw => {
                    let weights = match weights {
                        Some(path) => formats::weights_from_json(&read_file(&path)?)?,
                        None => Default::default(),
                    };
                    if oracle {
                        repair::oracle::decide_pi_w(&g, &r, &weights, bound, &budget)?
                    } else {
                        repair::decide_pi_w(&g, &r, &weights, bound, &budget)?
                    }
                }
                ProblemArg::Pmset => {
                    let order_path = order.ok_or_else(|| {
                        CliError::new("usage", "--problem pmset requires --order FILE")
                    })?;
                    let label = label.ok_or_else(|| {
                        CliError::new("usage", "--problem pmset requires --label LABEL")
                    })?;
                    let ord = formats::order_from_json(&read_file(&order_path)?)?;
                    let label = EdgeLabel::new(label);
                    if oracle {
                        repair::oracle::decide_pi_mset(&g, &r, &ord, &label, bound, &budget)?
                    } else {
                        repair::decide_pi_mset(&g, &r, &ord, &label, bound, &budget)?
                    }
                }
            };
            Ok((formats::render(&serde_json::json!(decision.to_string()), pretty), 0))
        }
        Command::GenSat { cnf, out } => {
            let text = read_file(&cnf)?;
            let formula = formats::cnf_from_dimacs(&text)?;
            let instance = gxrepair_core::reductions::encode(&formula)
                .map_err(|e| CliError::new("weight_overflow", e))?;
            std::fs::create_dir_all(&out)
                .map_err(|e| CliError::new("io", format!("{}: {e}", out.display())))?;
            let write = |name: &str, contents: String| -> Result<(), CliError> {
                std::fs::write(out.join(name), contents)
                    .map_err(|e| CliError::new("io", format!("{name}: {e}")))
            };
            write("graph.json", formats::graph_to_json(&instance.graph, true))?;
            write("constraints.gx", instance.constraints.to_text())?;
            write("weights.json", formats::weights_to_json(&instance.weights, true))?;
            write("order.json", formats::order_to_json(&instance.order, true))?;
            let meta = serde_json::json!({
                "K_w": instance.k_w,
                "K_mset": instance.k_mset,
                "label": instance.label.as_str(),
                "num_vars": instance.num_vars,
                "num_clauses": instance.num_clauses,
            });
            write("meta.json", formats::render(&meta, true))?;
            Ok((formats::render(&meta, pretty), 0))
        }
    }
}

fn run_single_repair(
    g: &gxrepair_core::datagraph::DataGraph,
    r: &ConstraintSet,
    crit: &PreferenceCriterion,
    budget: &SearchBudget,
    mode: RepairMode,
    oracle: bool,
) -> Result<gxrepair_core::repair::RepairResult, CliError> {
    use gxrepair_core::repair::{Maximality, RepairResult, RepairStatus};
    if !oracle {
        return Ok(match mode {
            RepairMode::Subset => repair::find_preferred_subset_repair_with(g, r, crit, budget)?,
            RepairMode::Superset => repair::find_preferred_superset_repair(g, r, crit, budget)?,
        });
    }
    let optima = match mode {
        RepairMode::Subset => repair::oracle::preferred_subset_repairs(g, r, crit)?,
        RepairMode::Superset => repair::oracle::preferred_superset_repairs(g, r, crit, budget)?,
    };
    let weights = match crit {
        PreferenceCriterion::Weight(w) => w.clone(),
        _ => Default::default(),
    };
    Ok(match optima.into_iter().next() {
        None => RepairResult {
            repair: None,
            status: RepairStatus::UnknownBeyondBudget,
            maximality: Maximality::Verified,
            explored: 0,
            extra_weight: None,
        },
        Some(repaired) => {
            let extra = weights
                .weight_of(g)
                .and_then(|wg| weights.weight_of(&repaired).map(|wr| wg.abs_diff(wr)))
                .map_err(|e| CliError::new("weight_overflow", e))?;
            let status = if repaired.is_empty() && !g.is_empty() {
                RepairStatus::Trivial
            } else {
                RepairStatus::Repaired
            };
            RepairResult {
                repair: Some(repaired),
                status,
                maximality: Maximality::Verified,
                explored: 0,
                extra_weight: Some(extra),
            }
        }
    })
}

fn run_all_optima(
    g: &gxrepair_core::datagraph::DataGraph,
    r: &ConstraintSet,
    crit: &PreferenceCriterion,
    budget: &SearchBudget,
    mode: RepairMode,
    oracle: bool,
    limit: Option<usize>,
) -> Result<Vec<gxrepair_core::datagraph::DataGraph>, CliError> {
    let mut optima = if oracle {
        match mode {
            RepairMode::Subset => repair::oracle::preferred_subset_repairs(g, r, crit)?,
            RepairMode::Superset => {
                repair::oracle::preferred_superset_repairs(g, r, crit, budget)?
            }
        }
    } else {
        match mode {
            RepairMode::Subset => repair::all_preferred_subset_repairs(g, r, crit, budget)?,
            RepairMode::Superset => repair::all_preferred_superset_repairs(g, r, crit, budget)?,
        }
    };
    if let Some(limit) = limit {
        optima.truncate(limit);
    }
    Ok(optima)
}

/// Entry point for the binary: parses `std::env::args`.
pub fn run_main() -> i32 {
    let mut stdout = std::io::stdout();
    let code = run(std::env::args_os(), &mut stdout);
    let _ = stdout.flush();
    code
}

/// Convenience for tests: capture output as a string.
pub fn run_captured<I, S>(argv: I) -> (String, i32)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let mut buffer = Vec::new();
    let code = run(argv, &mut buffer);
    (String::from_utf8(buffer).expect("output is UTF-8"), code)
}
