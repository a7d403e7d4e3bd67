mod common;

use common::{arb_run, intersect_rounds};
use kset_core::run::AsOf;
use kset_core::{ProcessId, RunSpec};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn skeleton_is_intersection_of_rounds(run in arb_run(1, 6, 5)) {
        let last = run.prefix_len() as u64 + 3;
        for r in 1..=last {
            let skeleton = run.skeleton_at(r).unwrap();
            prop_assert_eq!(skeleton.edges().collect::<Vec<_>>(), intersect_rounds(&run, r));
        }
    }

    #[test]
    fn skeletons_shrink(run in arb_run(1, 6, 5)) {
        let all = run.skeletons(run.prefix_len() as u64 + 3);
        for pair in all.windows(2) {
            prop_assert!(pair[1].as_digraph().is_subgraph_of(pair[0].as_digraph()));
        }
        for (i, s) in all.iter().enumerate() {
            prop_assert!(s.same_edges(&run.skeleton_at(i as u64 + 1).unwrap()));
        }
    }

    #[test]
    fn timely_neighborhood_contains_self_and_shrinks(run in arb_run(1, 6, 5)) {
        for p in run.processes() {
            let mut previous = None;
            for r in 1..=run.prefix_len() as u64 + 2 {
                let pt = run.timely_neighborhood(p, AsOf::Round(r)).unwrap();
                prop_assert!(pt.contains(p));
                if let Some(prev) = previous {
                    prop_assert!(pt.is_subset(prev));
                }
                previous = Some(pt);
            }
            let stable = run.timely_neighborhood(p, AsOf::Stable).unwrap();
            prop_assert!(stable.is_subset(previous.unwrap()));
        }
    }

    #[test]
    fn stabilization_round_is_minimal(run in arb_run(1, 6, 5)) {
        let (stable, r_st) = run.stable_skeleton();
        let l = run.prefix_len() as u64;
        prop_assert!(r_st >= 1 && r_st <= l + 1);
        for r in 1..=l + 4 {
            let equal = run.skeleton_at(r).unwrap().same_edges(&stable);
            prop_assert_eq!(equal, r >= r_st, "round {}", r);
        }
    }

    #[test]
    fn json_round_trip(run in arb_run(1, 6, 3)) {
        let text = serde_json::to_string(&run).unwrap();
        let back: RunSpec = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &run);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}

#[test]
fn round_zero_is_rejected() {
    let run = RunSpec::constant(kset_core::RoundGraph::complete(2));
    assert!(run.round_graph(0).is_err());
    assert!(run.skeleton_at(0).is_err());
    assert!(run
        .timely_neighborhood(ProcessId(0), AsOf::Round(0))
        .is_err());
}

#[test]
fn scenario_files_may_omit_self_loops_and_prefix() {
    let run: RunSpec = serde_json::from_str(r#"{"n":3,"tail":[[0,1],[1,2]]}"#).unwrap();
    assert_eq!(run.prefix_len(), 0);
    for p in run.processes() {
        assert!(run.tail().has_edge(p, p));
    }
    assert!(serde_json::from_str::<RunSpec>(r#"{"n":2,"tail":[[0,1],[0,1]]}"#).is_err());
    assert!(serde_json::from_str::<RunSpec>(r#"{"n":2,"tail":[[0,2]]}"#).is_err());
}
