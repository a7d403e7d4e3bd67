mod common;

use std::collections::BTreeMap;

use common::arb_run;
use kset_core::graph::root_components;
use kset_core::predicate::{gen_theorem2, p_srcs_holds};
use kset_core::protocol::DecisionRule;
use kset_core::sim::{distinct_proposals, execute};
use kset_core::verify::{
    check_decision_record, check_integrity, check_k_agreement, check_validity,
    verify_agreement_structure, verify_approximation, verify_estimates, verify_trace, CheckId,
};
use kset_core::{ProcessId, ProcessSet, RoundGraph, RunSpec, Value};
use proptest::prelude::*;

fn graph(n: usize, edges: &[(usize, usize)]) -> RoundGraph {
    RoundGraph::with_self_loops(n, edges.iter().copied()).unwrap()
}

fn set(ids: &[usize]) -> ProcessSet {
    ids.iter().map(|&i| ProcessId(i)).collect()
}

/// Six processes, two root cycles {0, 1} and {2, 3, 4} both feeding 5.
/// Round 1 is complete and round 2 adds a few edges on top of the final graph.
fn two_root_scenario() -> RunSpec {
    let stable = [(0, 1), (1, 0), (2, 3), (3, 4), (4, 2), (1, 5), (4, 5)];
    let mut round2 = stable.to_vec();
    round2.extend([(5, 0), (3, 1), (0, 2)]);
    RunSpec::new(
        vec![RoundGraph::complete(6), graph(6, &round2)],
        graph(6, &stable),
    )
    .unwrap()
}

#[test]
fn two_root_scenario_structure() {
    let run = two_root_scenario();
    let (stable, r_st) = run.stable_skeleton();
    assert_eq!(r_st, 3);
    assert!(stable
        .as_digraph()
        .is_subgraph_of(run.skeleton_at(2).unwrap().as_digraph()));
    assert_eq!(
        root_components(stable.as_digraph()),
        vec![set(&[0, 1]), set(&[2, 3, 4])]
    );
    assert!(p_srcs_holds(&run, 3).holds);
}

#[test]
fn two_root_scenario_sink_approximation() {
    let run = two_root_scenario();
    let trace = execute(&run, &distinct_proposals(6), None).unwrap();
    assert!(verify_approximation(&trace).passed());
    let p5 = ProcessId(5);

    // round 1: complete graph, so every process is timely for p5
    let first = trace.state(p5, 1).unwrap();
    assert_eq!(first.graph.vertices(), ProcessSet::full(6));
    assert!((0..6).all(|q| first.graph.label(ProcessId(q), p5) == Some(1)));

    // from round 3 on only 1 and 4 stay timely for p5
    for r in 3..=6 {
        let s = trace.state(p5, r).unwrap();
        let fresh: ProcessSet = (0..6)
            .map(ProcessId)
            .filter(|&q| s.graph.label(q, p5) == Some(r))
            .collect();
        assert_eq!(fresh, set(&[1, 4, 5]), "round {r}");
    }

    // by round 6 both root cycles are present; an edge into b carries the
    // round it was added, 6 minus the hop distance from b to 5
    let hops = [2, 1, 3, 2, 1];
    let last = trace.state(p5, 6).unwrap();
    for (a, b) in [(0, 1), (1, 0), (2, 3), (3, 4), (4, 2)] {
        assert_eq!(
            last.graph.label(ProcessId(a), ProcessId(b)),
            Some(6 - hops[b]),
            "({a} -> {b})"
        );
    }
    // 5 has no outgoing edge after round 2, so any edge leaving it is stale
    let stale: Vec<_> = last
        .graph
        .edges()
        .filter(|&(a, b, _)| a == p5 && b != p5)
        .collect();
    assert!(stale.iter().all(|&(_, _, label)| label <= 2), "{stale:?}");
}

#[test]
fn two_root_scenario_agrees_after_complete_round() {
    let run = two_root_scenario();
    let trace = execute(&run, &distinct_proposals(6), None).unwrap();
    let report = verify_trace(&trace, Some(3));
    assert!(report.passed, "{report:?}");
    // everyone hears process 0 in round 1 and adopts its value
    assert_eq!(trace.distinct_decision_values(), vec![1]);
}

#[test]
fn executions_are_deterministic() {
    let run = two_root_scenario();
    let a = serde_json::to_string(&execute(&run, &distinct_proposals(6), None).unwrap()).unwrap();
    let b = serde_json::to_string(&execute(&run, &distinct_proposals(6), None).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn trace_json_round_trips() {
    let run = gen_theorem2(5, 3, None, None).unwrap();
    let trace = execute(&run, &distinct_proposals(5), None).unwrap();
    let text = serde_json::to_string(&trace).unwrap();
    let back: kset_core::Trace = serde_json::from_str(&text).unwrap();
    assert_eq!(back, trace);
}

#[test]
fn forged_decision_value_fails_validity() {
    let run = gen_theorem2(4, 2, None, None).unwrap();
    let mut trace = execute(&run, &distinct_proposals(4), None).unwrap();
    assert!(check_validity(&trace).passed);
    trace.decisions.get_mut(&ProcessId(2)).unwrap().value = 99;
    assert!(!check_validity(&trace).passed);
}

#[test]
fn corrupted_label_fails_approximation() {
    let run = two_root_scenario();
    let mut trace = execute(&run, &distinct_proposals(6), None).unwrap();
    let state = &mut trace.rounds[4].states_after[5];
    let old = state.graph.label(ProcessId(0), ProcessId(1)).unwrap();
    state.graph.relabel(ProcessId(0), ProcessId(1), old - 1);
    let report = verify_approximation(&trace);
    assert!(!report.passed());
    assert!(!report.get(CheckId::LabelProvenance).unwrap().passed);
}

#[test]
fn forged_message_fails_integrity() {
    let run = gen_theorem2(4, 2, None, None).unwrap();
    let mut trace = execute(&run, &distinct_proposals(4), None).unwrap();
    assert!(check_integrity(&trace).passed);
    trace.rounds[1].messages[0].message.x = 42;
    assert!(!check_integrity(&trace).passed);
}

#[test]
fn theorem2_run_needs_all_k_values() {
    let run = gen_theorem2(6, 3, None, None).unwrap();
    let trace = execute(&run, &distinct_proposals(6), None).unwrap();
    assert!(check_k_agreement(&trace, 3).passed);
    assert!(!check_k_agreement(&trace, 2).passed);
    assert!(verify_agreement_structure(&trace, 3).unwrap().passed());
    assert!(verify_agreement_structure(&trace, 2).is_err());
}

/// Process 1 is the only root and a source for everyone, so a single
/// decision value would be expected. A stale round-1 edge (2 -> 1) keeps 0's
/// graph strongly connected through round 3, and 0 decides on a value the
/// root never sees.
#[test]
fn one_round_prefix_splits_single_source_run() {
    let tail = [(0, 2), (1, 0), (1, 2), (2, 0)];
    let mut first = tail.to_vec();
    first.push((2, 1));
    let run = RunSpec::new(vec![graph(3, &first)], graph(3, &tail)).unwrap();
    assert!(p_srcs_holds(&run, 1).holds);

    let proposals: BTreeMap<ProcessId, Value> = [(0, 1), (1, 19), (2, 10)]
        .into_iter()
        .map(|(p, v)| (ProcessId(p), v))
        .collect();
    let trace = execute(&run, &proposals, None).unwrap();
    assert!(verify_approximation(&trace).passed());
    assert!(verify_estimates(&trace).passed());

    let d0 = trace.decisions[&ProcessId(0)];
    let d1 = trace.decisions[&ProcessId(1)];
    assert_eq!(
        (d0.value, d0.round, d0.rule),
        (1, 3, DecisionRule::StronglyConnected)
    );
    assert_eq!(
        (d1.value, d1.round, d1.rule),
        (10, 4, DecisionRule::StronglyConnected)
    );
    assert!(!check_k_agreement(&trace, 1).passed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn unconditional_checks_hold_on_any_run(run in arb_run(1, 6, 4), seed in any::<u64>()) {
        let proposals = (0..run.n())
            .map(|i| (ProcessId(i), seed.rotate_left(i as u32 * 7) % 10))
            .collect();
        let trace = execute(&run, &proposals, None).unwrap();
        prop_assert!(trace.all_decided());
        prop_assert!(check_integrity(&trace).passed);
        prop_assert!(check_validity(&trace).passed);
        for report in [check_decision_record(&trace), verify_approximation(&trace), verify_estimates(&trace)] {
            let failures: Vec<String> = report.failures().map(|c| c.to_string()).collect();
            prop_assert!(failures.is_empty(), "{:?}", failures);
        }
    }
}
