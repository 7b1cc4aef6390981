//! Acceptance suite: one test per acceptance criterion, numbered. Each
//! runs at the stated scale and tolerance; `cargo test` prints the
//! per-criterion pass/fail lines.

mod naive;
mod util;

use gxrepair::run_captured;
use gxrepair_core::datagraph::{
    graph_less, multiset_less, DataGraph, EdgeLabel, GraphMultiset, NodeId, PreferenceCriterion,
    Symbol, SymbolOrder,
};
use gxrepair_core::gxpath::{parse_node, parse_path, pretty_node, pretty_path, NodeExpr, PathExpr};
use gxrepair_core::reductions::{encode, Cnf3};
use gxrepair_core::repair::{self, oracle, Decision, SearchBudget};
use rand::Rng;
use serde_json::Value;
use std::time::{Duration, Instant};

fn run_cli(args: &[&str]) -> (Value, i32) {
    let mut argv = vec!["gxrepair"];
    argv.extend_from_slice(args);
    let (out, code) = run_captured(argv);
    (
        serde_json::from_str(&out).expect("payload is a single JSON document"),
        code,
    )
}

/// Criterion 1, first half: the film catalog is inconsistent with the
/// actor constraint and the violating node is the sole witness.
#[test]
fn criterion_01a_film_check_reports_the_single_witness() {
    let (value, code) = run_cli(&[
        "check",
        "-g",
        &util::fixture_path("film.json"),
        "-c",
        &util::fixture_path("film.gx"),
    ]);
    assert_eq!(code, 1, "check exits 1 on inconsistency");
    assert_eq!(value["consistent"], Value::Bool(false));
    let violations = value["violations"].as_array().unwrap();
    assert_eq!(violations.len(), 1, "exactly one witness");
    assert_eq!(violations[0]["constraint"], 0);
    assert_eq!(violations[0]["witness"], serde_json::json!(["Robbie"]));
}

/// Criterion 1, second half, as stated: the subset-repair output should
/// include the graph obtained by deleting the violating node with its
/// incident edges.
///
/// This cannot hold under the definition of subset repairs: restoring
/// the bare node (with no incident edges) to the node-deletion graph
/// yields a strictly larger consistent subgraph, so the node-deletion
/// graph is not maximal and is not a repair. The unique repair removes
/// only the type edge. The assertion is kept as stated and fails.
#[test]
fn criterion_01b_film_subset_repairs_include_the_node_deletion() {
    let g = util::fixture_graph("film.json");
    let r = util::fixture_constraints("film.gx");
    let repairs = repair::subset_repairs(&g, &r, None).unwrap();
    assert_eq!(repairs, oracle::subset_repairs(&g, &r, None).unwrap());

    let mut node_deletion = g.clone();
    node_deletion.remove_node(&NodeId::new("Robbie"));

    // The node-deletion graph is consistent but dominated: adding the
    // bare node back stays consistent and strictly extends it.
    assert!(gxrepair_core::consistency::is_consistent(&node_deletion, &r));
    let mut bare_node_back = node_deletion.clone();
    bare_node_back
        .add_node(NodeId::new("Robbie"), "Margot Robbie".into())
        .unwrap();
    assert!(gxrepair_core::consistency::is_consistent(&bare_node_back, &r));

    assert!(
        repairs.contains(&node_deletion),
        "stated expectation: the node-deletion graph is a subset repair; \
         it is not, because the consistent subgraph that keeps the bare node \
         (and the larger one that only drops the type edge) strictly contains it, \
         so it fails maximality; the engine returns {} repair(s), the unique one \
         deleting only the Robbie type edge",
        repairs.len()
    );
}

/// Criterion 2: minimum-weight superset repair of the network costs
/// exactly 3 extra, confirmed by exhausting every cheaper addition set,
/// and the figure's 7-cost variant appears among the size-3 repairs.
#[test]
fn criterion_02_network_weight_preferred_superset_repair() {
    let (value, code) = run_cli(&[
        "repair",
        "-g",
        &util::fixture_path("fig3a.json"),
        "-c",
        &util::fixture_path("network.gx"),
        "--mode",
        "superset",
        "--prefer",
        &format!("weight:{}", util::fixture_path("ex3_weights.json")),
    ]);
    assert_eq!(code, 0);
    assert_eq!(value["extra_weight"], 3, "optimal extra weight");
    assert_eq!(value["status"], "repaired");

    // Exhaustive confirmation of minimality over the 0-fresh-node pool:
    // every addition set of weight < 3 leaves the graph inconsistent.
    let g = util::fixture_graph("fig3a.json");
    let r = util::fixture_constraints("network.gx");
    let weights = gxrepair::formats::weights_from_json(
        &std::fs::read_to_string(util::fixture_path("ex3_weights.json")).unwrap(),
    )
    .unwrap();
    let mut candidates: Vec<(NodeId, NodeId, EdgeLabel)> = Vec::new();
    for (u, _) in g.iter_nodes() {
        for (v, _) in g.iter_nodes() {
            for label in ["low", "high"] {
                let label = EdgeLabel::new(label);
                if !g.has_edge(u, v, &label) {
                    candidates.push((u.clone(), v.clone(), label));
                }
            }
        }
    }
    assert_eq!(candidates.len(), 27);
    let mut cheaper_consistent = 0u32;
    let mut checked = 0u32;
    for mask in 0u32..(1 << candidates.len()) {
        // Every candidate edge weighs at least 1, so sets under weight 3
        // have at most two edges.
        if mask.count_ones() > 2 {
            continue;
        }
        let weight: u64 = (0..candidates.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| weights.edge_weight(&candidates[i].2))
            .sum();
        if weight >= 3 {
            continue;
        }
        let mut candidate = g.clone();
        for (i, (u, v, l)) in candidates.iter().enumerate() {
            if mask & (1 << i) != 0 {
                candidate.add_edge(u.clone(), v.clone(), l.clone()).unwrap();
            }
        }
        checked += 1;
        if gxrepair_core::consistency::is_consistent(&candidate, &r) {
            cheaper_consistent += 1;
        }
    }
    assert!(checked > 90, "the cheap sets were enumerated");
    assert_eq!(cheaper_consistent, 0, "no repair costs less than 3");

    // The figure's variant: found among the superset repairs, 7 extra.
    let budget = SearchBudget {
        max_repair_size: Some(3),
        ..SearchBudget::default()
    };
    let repairs = repair::superset_repairs(&g, &r, &budget, None).unwrap();
    let fig3b = util::fixture_graph("fig3b.json");
    assert!(repairs.contains(&fig3b), "figure variant is a repair");
    assert_eq!(
        weights.weight_of(&fig3b).unwrap() - weights.weight_of(&g).unwrap(),
        7
    );
}

/// Criterion 3, first half: with low above high, the figure's 5-low
/// variant precedes the 6-low variant in the multiset order and not
/// conversely.
#[test]
fn criterion_03a_multiset_preference_orders_the_figure_variants() {
    let fig3b = util::fixture_graph("fig3b.json");
    let fig3c = util::fixture_graph("fig3c.json");
    let order = gxrepair::formats::order_from_json(
        &std::fs::read_to_string(util::fixture_path("ex4_order.json")).unwrap(),
    )
    .unwrap();
    let crit = PreferenceCriterion::Multiset(order);
    assert_eq!(graph_less(&fig3b, &fig3c, &crit), Ok(true));
    assert_eq!(graph_less(&fig3c, &fig3b, &crit), Ok(false));
}

/// Criterion 3, second half, as stated: the multiset-preferred superset
/// repair of the network should be the figure's 5-low/3-high variant.
///
/// This cannot hold under the Dershowitz–Manna lifting: the repair that
/// adds two high edges (one entry into b, one direct hop c -> e) has
/// multiset {low:3, high:4}, which with low above high is strictly below
/// the figure's {low:5, high:3} — its only excess, high, is compensated
/// at low. The engine therefore returns the two-high repair, and this
/// assertion, kept as stated, fails.
#[test]
fn criterion_03b_multiset_preferred_repair_is_the_figure_variant() {
    let g = util::fixture_graph("fig3a.json");
    let r = util::fixture_constraints("network.gx");
    let order = gxrepair::formats::order_from_json(
        &std::fs::read_to_string(util::fixture_path("ex4_order.json")).unwrap(),
    )
    .unwrap();
    let fig3b = util::fixture_graph("fig3b.json");
    let crit = PreferenceCriterion::Multiset(order.clone());
    let result = repair::find_preferred_superset_repair(&g, &r, &crit, &SearchBudget::default())
        .unwrap();
    let repaired = result.repair.expect("the network is repairable");

    // Whatever is returned is a consistent minimal superset that nothing
    // in the pool precedes; in particular it precedes the figure
    // variant, demonstrating the figure variant is not preferred.
    assert!(gxrepair_core::consistency::is_consistent(&repaired, &r));
    assert_eq!(graph_less(&repaired, &fig3b, &crit), Ok(true));

    assert_eq!(
        repaired,
        fig3b,
        "stated expectation: the preferred repair is the figure's low-heavy \
         variant; the engine instead returns a repair whose addition multiset \
         {{high: 2}} is strictly below the figure's {{low: 2, high: 1}} under \
         low > high, so the figure variant is not multiset-minimal"
    );
}

/// Criterion 4: over the whole corpus, the weight decision at the
/// instance bound agrees exactly with brute-force satisfiability, and
/// the bound is tight for satisfiable formulas. Must finish within 60 s.
#[test]
fn criterion_04_weight_reduction_matches_satisfiability() {
    let started = Instant::now();
    let corpus = util::formula_corpus(0x5eed_0004);
    assert!(corpus.len() >= 200);
    let budget = SearchBudget::default();
    for (i, phi) in corpus.iter().enumerate() {
        let sat = util::brute_force_sat(phi);
        let inst = encode(phi).unwrap();
        let got = repair::decide_pi_w(&inst.graph, &inst.constraints, &inst.weights, inst.k_w, &budget)
            .unwrap();
        assert_eq!(
            got == Decision::Yes,
            sat,
            "formula {i} ({phi:?}): weight decision disagrees with brute force"
        );
        if sat {
            let tight = repair::decide_pi_w(
                &inst.graph,
                &inst.constraints,
                &inst.weights,
                inst.k_w - 1,
                &budget,
            )
            .unwrap();
            assert_eq!(tight, Decision::No, "formula {i}: bound is not tight");
        }
    }
    assert!(
        started.elapsed() < Duration::from_secs(60),
        "corpus must complete within 60 s, took {:?}",
        started.elapsed()
    );
}

/// Criterion 5: same corpus, multiset decision with the value_of label
/// bounded by the variable count.
#[test]
fn criterion_05_multiset_reduction_matches_satisfiability() {
    let started = Instant::now();
    let corpus = util::formula_corpus(0x5eed_0005);
    assert!(corpus.len() >= 200);
    let budget = SearchBudget::default();
    for (i, phi) in corpus.iter().enumerate() {
        let sat = util::brute_force_sat(phi);
        let inst = encode(phi).unwrap();
        let got = repair::decide_pi_mset(
            &inst.graph,
            &inst.constraints,
            &inst.order,
            &inst.label,
            inst.k_mset,
            &budget,
        )
        .unwrap();
        assert_eq!(
            got == Decision::Yes,
            sat,
            "formula {i} ({phi:?}): multiset decision disagrees with brute force"
        );
    }
    assert!(
        started.elapsed() < Duration::from_secs(60),
        "corpus must complete within 60 s, took {:?}",
        started.elapsed()
    );
}

/// Criterion 6: the evaluator agrees with the naive table transcription
/// set-for-set on 500 seeded random graph/expression pairs.
#[test]
fn criterion_06_evaluator_matches_the_naive_oracle() {
    let labels = ["a", "b", "c"];
    let values = ["x", "y", "z"];
    let mut rng = util::rng(0x5eed_0006);
    for round in 0..500 {
        let g = util::random_graph(&mut rng, 6, &labels, &values, 0.25);
        let p = util::random_path_expr(&mut rng, 4, &labels, &values, false);
        let expected = naive::eval_path(&g, &p);
        let got = gxrepair_core::eval::eval_path(&g, &p);
        assert_eq!(got, expected, "round {round}: path {p}");
        let n = util::random_node_expr(&mut rng, 4, &labels, &values, false);
        let expected = naive::eval_node(&g, &n);
        let got = gxrepair_core::eval::eval_node(&g, &n);
        assert_eq!(got, expected, "round {round}: node {n}");
    }
}

/// Criterion 7: search results equal the powerset brute force on 200
/// seeded instances, including the preferred repair under both criteria
/// (identical up to the declared canonical tie-break, so compared
/// exactly).
#[test]
fn criterion_07_repair_search_matches_the_powerset_oracle() {
    let values = ["x", "y", "z"];
    let mut rng = util::rng(0x5eed_0007);
    let mut subset_rounds = 0;
    while subset_rounds < 100 {
        let g = util::random_graph(&mut rng, 4, &["a", "b"], &values, 0.2);
        if g.element_count() > 8 {
            continue;
        }
        let positive = rng.gen_bool(0.3);
        let count = rng.gen_range(1..=2);
        let r = util::random_constraints(&mut rng, count, 3, &["a", "b"], &values, positive);
        let expected = oracle::subset_repairs(&g, &r, None).unwrap();
        let got = repair::subset_repairs(&g, &r, None).unwrap();
        assert_eq!(got, expected, "subset round {subset_rounds}");
        for crit in [
            PreferenceCriterion::Weight(util::random_weights(&mut rng, &["a", "b"], &values)),
            PreferenceCriterion::Multiset(util::random_order(&mut rng, &["a", "b"], &values)),
        ] {
            let got = repair::find_preferred_subset_repair(&g, &r, &crit).unwrap();
            let expected = oracle::preferred_subset_repairs(&g, &r, &crit).unwrap();
            assert_eq!(
                got.repair.as_ref(),
                expected.first(),
                "subset round {subset_rounds} under {crit:?}"
            );
        }
        subset_rounds += 1;
    }

    let mut superset_rounds = 0;
    while superset_rounds < 100 {
        let labels: &[&str] = if rng.gen_bool(0.5) { &["a"] } else { &["a", "b"] };
        let g = util::random_graph(
            &mut rng,
            if labels.len() == 1 { 3 } else { 2 },
            labels,
            &values,
            0.3,
        );
        let candidates = g.node_count() * g.node_count() * labels.len() - g.edge_count();
        if candidates > 10 {
            continue;
        }
        let positive = rng.gen_bool(0.4);
        let count = rng.gen_range(1..=2);
        let r = util::random_constraints(&mut rng, count, 2, labels, &values, positive);
        let budget = SearchBudget::default();
        let expected = oracle::superset_repairs(&g, &r, &budget, None).unwrap();
        let got = repair::superset_repairs(&g, &r, &budget, None).unwrap();
        assert_eq!(got, expected, "superset round {superset_rounds}");
        let weights = util::random_weights(&mut rng, labels, &values);
        let order = util::random_order(&mut rng, labels, &values);
        for crit in [
            PreferenceCriterion::Weight(weights.clone()),
            PreferenceCriterion::Multiset(order.clone()),
        ] {
            let got = repair::find_preferred_superset_repair(&g, &r, &crit, &budget).unwrap();
            let expected = oracle::preferred_superset_repairs(&g, &r, &crit, &budget).unwrap();
            assert_eq!(
                got.repair.as_ref(),
                expected.first(),
                "superset round {superset_rounds} under {crit:?}"
            );
        }
        superset_rounds += 1;
    }
}

/// Criterion 8: strict-partial-order axioms for the multiset order on
/// 10,000 random triples, and totality under a total base order.
#[test]
fn criterion_08_multiset_order_axioms() {
    let symbols = [
        Symbol::Edge("a".into()),
        Symbol::Edge("b".into()),
        Symbol::Data("x".into()),
        Symbol::Data("y".into()),
        Symbol::Data("z".into()),
    ];
    let mut rng = util::rng(0x5eed_0008);
    let random_multiset = |rng: &mut rand::rngs::StdRng| {
        GraphMultiset::from_counts(symbols.iter().filter_map(|sym| {
            if rng.gen_bool(0.6) {
                Some((sym.clone(), rng.gen_range(1..=4u64)))
            } else {
                None
            }
        }))
    };
    let total = SymbolOrder::chain(["a", "b", "x", "y", "z"].into_iter().map(String::from))
        .unwrap();
    for round in 0..10_000 {
        let ord = util::random_order(&mut rng, &["a", "b"], &["x", "y", "z"]);
        let m1 = random_multiset(&mut rng);
        let m2 = random_multiset(&mut rng);
        let m3 = random_multiset(&mut rng);
        assert!(!multiset_less(&m1, &m1, &ord), "irreflexivity at {round}");
        if multiset_less(&m1, &m2, &ord) && multiset_less(&m2, &m3, &ord) {
            assert!(multiset_less(&m1, &m3, &ord), "transitivity at {round}");
        }
        if m1 != m2 {
            assert!(
                multiset_less(&m1, &m2, &total) ^ multiset_less(&m2, &m1, &total),
                "totality at {round}"
            );
        }
    }
}

/// Criterion 9: for all-positive node constraints the iterative-deletion
/// fast path equals the brute force and yields the unique repair; the
/// runtime stays within bounds up to 200-node graphs.
#[test]
fn criterion_09_positive_node_fast_path() {
    let values = ["x", "y", "z"];
    let mut rng = util::rng(0x5eed_0009);
    let mut rounds = 0;
    while rounds < 100 {
        let g = util::random_graph(&mut rng, 4, &["a", "b"], &values, 0.2);
        if g.element_count() > 8 {
            continue;
        }
        let r = gxrepair_core::gxpath::ConstraintSet::new(
            (0..rng.gen_range(1..=2))
                .map(|_| {
                    gxrepair_core::gxpath::Constraint::Node(util::random_node_expr(
                        &mut rng, 3, &["a", "b"], &values, true,
                    ))
                })
                .collect(),
        );
        assert!(r.all_positive_node());
        let expected = oracle::subset_repairs(&g, &r, None).unwrap();
        assert_eq!(expected.len(), 1, "round {rounds}: the repair is unique");
        let got = repair::subset_repairs(&g, &r, None).unwrap();
        assert_eq!(got, expected, "round {rounds}");
        rounds += 1;
    }

    // Scaling: rings of increasing size under a reachability-style
    // positive node constraint, five seconds each.
    for n in [50usize, 100, 200] {
        let mut g = DataGraph::empty();
        for i in 0..n {
            let value = if i % 7 == 0 { "hub" } else { "plain" };
            g.add_node(NodeId::new(format!("n{i:03}")), value.into()).unwrap();
        }
        for i in 0..n {
            g.add_edge(
                NodeId::new(format!("n{i:03}")),
                NodeId::new(format!("n{:03}", (i + 1) % n)),
                EdgeLabel::new("next"),
            )
            .unwrap();
        }
        // Drop a few edges so the instance is inconsistent and cascades.
        for i in [3usize, 31, 47] {
            let from = NodeId::new(format!("n{:03}", i % n));
            let to = NodeId::new(format!("n{:03}", (i + 1) % n));
            g.remove_edge(&from, &to, &EdgeLabel::new("next"));
        }
        let r = gxrepair_core::gxpath::ConstraintSet::parse(
            "node: =\"hub\" + <next{1,7}.[=\"hub\"]>\n",
        )
        .unwrap();
        assert!(r.all_positive_node());
        let started = Instant::now();
        let repairs = repair::subset_repairs(&g, &r, None).unwrap();
        let elapsed = started.elapsed();
        assert_eq!(repairs.len(), 1);
        assert!(gxrepair_core::consistency::is_consistent(&repairs[0], &r));
        assert!(
            elapsed < Duration::from_secs(5),
            "{n}-node instance took {elapsed:?}"
        );
    }
}

/// Criterion 10: parse after pretty is the identity on 10,000 generated
/// trees, and the documented example expressions parse to their golden
/// trees.
#[test]
fn criterion_10_round_trip_and_golden_expressions() {
    let labels = ["a", "b", "odd label", "eps"];
    let values = ["x", "Margot Robbie", "T"];
    let mut rng = util::rng(0x5eed_0010);
    for round in 0..10_000 {
        if round % 2 == 0 {
            let e = util::random_path_expr(&mut rng, 4, &labels, &values, false);
            let text = pretty_path(&e);
            assert_eq!(
                parse_path(&text).unwrap_or_else(|err| panic!("round {round}: {text:?}: {err}")),
                e,
                "round {round}"
            );
        } else {
            let e = util::random_node_expr(&mut rng, 4, &labels, &values, false);
            let text = pretty_node(&e);
            assert_eq!(
                parse_node(&text).unwrap_or_else(|err| panic!("round {round}: {text:?}: {err}")),
                e,
                "round {round}"
            );
        }
    }

    // Golden trees for the documented examples: the film constraint, the
    // two network path constraints, and the two instance constraints.
    let film = parse_node(
        r#"<type.[="Actor"]> => <acts_in.[<directed_by.[="Anderson"]>].acts_in^-.[="Hoffman"]>"#,
    )
    .unwrap();
    let lhs = NodeExpr::exists(
        PathExpr::label("type").concat(PathExpr::node_test(NodeExpr::data_eq("Actor"))),
    );
    let rhs = NodeExpr::exists(
        PathExpr::label("acts_in")
            .concat(PathExpr::node_test(NodeExpr::exists(
                PathExpr::label("directed_by")
                    .concat(PathExpr::node_test(NodeExpr::data_eq("Anderson"))),
            )))
            .concat(PathExpr::inverse("acts_in"))
            .concat(PathExpr::node_test(NodeExpr::data_eq("Hoffman"))),
    );
    assert_eq!(film, lhs.implies(rhs));

    let connected = parse_path("_*").unwrap();
    assert_eq!(connected, PathExpr::Wildcard.star());

    let two_low = parse_path("low.low => high.low + low.high + high.high + high + low").unwrap();
    let low = PathExpr::label("low");
    let high = PathExpr::label("high");
    let good = high
        .clone()
        .concat(low.clone())
        .union(low.clone().concat(high.clone()))
        .union(high.clone().concat(high.clone()))
        .union(high.clone())
        .union(low.clone());
    assert_eq!(two_low, low.clone().concat(low.clone()).implies(good));

    let psi1 = parse_node(r#"<[!="var"] + value_of.[="T"] + value_of.[="F"]>"#).unwrap();
    assert_eq!(psi1, gxrepair_core::reductions::value_assignment_constraint());
    let psi2 = parse_node(
        r#"<[!="clause"] + appears_in^-.value_of.[="T"] + appears_negated_in^-.value_of.[="F"]>"#,
    )
    .unwrap();
    assert_eq!(
        psi2,
        gxrepair_core::reductions::clause_satisfaction_constraint()
    );

    // The instance files render exactly these constraints.
    let phi = Cnf3::new(2, vec![vec![1, -2, 2]]).unwrap();
    let inst = encode(&phi).unwrap();
    let rendered = inst.constraints.to_text();
    let reparsed = gxrepair_core::gxpath::ConstraintSet::parse(&rendered).unwrap();
    assert_eq!(reparsed, inst.constraints);
}
