mod common;

use common::arb_run;
use kset_core::graph::root_components;
use kset_core::predicate::{
    gen_arbitrary, gen_complete, gen_random_psrcs, gen_theorem2, min_k, p_src_holds, p_srcs_holds,
    PredicateError,
};
use kset_core::{ProcessId, ProcessSet, RunSpec};
use proptest::prelude::*;

/// Every subset of size `k + 1`, by bitmask, must have a process with two
/// timely receivers inside it.
fn psrcs_brute(run: &RunSpec, k: usize) -> bool {
    let n = run.n();
    let (stable, _) = run.stable_skeleton();
    (0u64..1 << n)
        .filter(|mask| mask.count_ones() as usize == k + 1)
        .all(|mask| {
            (0..n).any(|p| {
                (0..n)
                    .filter(|&q| mask >> q & 1 == 1 && stable.has_edge(ProcessId(p), ProcessId(q)))
                    .count()
                    >= 2
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn exhaustive_check_matches_bitmask_oracle(run in arb_run(2, 7, 2)) {
        for k in 1..=run.n() {
            let report = p_srcs_holds(&run, k);
            prop_assert_eq!(report.holds, psrcs_brute(&run, k), "k = {}", k);
            if let Some(s) = report.violating_subset {
                prop_assert_eq!(s.len(), k + 1);
            }
        }
    }

    #[test]
    fn predicate_is_monotone_in_k(run in arb_run(2, 7, 2)) {
        let holds: Vec<bool> = (1..=run.n() + 1).map(|k| p_srcs_holds(&run, k).holds).collect();
        for pair in holds.windows(2) {
            prop_assert!(!pair[0] || pair[1]);
        }
        prop_assert!(p_srcs_holds(&run, run.n()).holds);
        let m = min_k(&run);
        prop_assert!(m == run.n() || p_srcs_holds(&run, m).holds);
        prop_assert!(m == 1 || !p_srcs_holds(&run, m - 1).holds);
    }

    #[test]
    fn predicate_bounds_root_components(run in arb_run(2, 7, 2)) {
        let (stable, _) = run.stable_skeleton();
        let roots = root_components(stable.as_digraph()).len();
        for k in 1..run.n() {
            if p_srcs_holds(&run, k).holds {
                prop_assert!(roots <= k, "{} roots under k = {}", roots, k);
            }
        }
    }

    #[test]
    fn witnesses_are_two_sources(run in arb_run(2, 6, 1), k in 1usize..4) {
        let report = p_srcs_holds(&run, k);
        for w in report.witness_sources.into_iter().flatten() {
            prop_assert!(p_src_holds(&run, w.source, w.subset).unwrap());
        }
    }

    #[test]
    fn random_generator_satisfies_predicate(n in 2usize..=8, k_seed in 0usize..8, seed in any::<u64>(), len in 0usize..4) {
        let k = 1 + k_seed % (n - 1);
        let run = gen_random_psrcs(n, k, seed, len).unwrap();
        prop_assert_eq!(run.prefix_len(), len);
        prop_assert!(psrcs_brute(&run, k));
        prop_assert_eq!(gen_random_psrcs(n, k, seed, len).unwrap(), run);
    }

    #[test]
    fn arbitrary_generator_is_deterministic(n in 1usize..=8, seed in any::<u64>(), len in 0usize..4) {
        let run = gen_arbitrary(n, seed, len).unwrap();
        prop_assert_eq!(run.n(), n);
        prop_assert_eq!(gen_arbitrary(n, seed, len).unwrap(), run);
    }
}

#[test]
fn theorem2_runs_are_tight() {
    for n in 3..=8 {
        for k in 2..n {
            let run = gen_theorem2(n, k, None, None).unwrap();
            assert!(psrcs_brute(&run, k));
            assert!(!psrcs_brute(&run, k - 1));
            assert_eq!(min_k(&run), k);
            let (stable, _) = run.stable_skeleton();
            assert_eq!(root_components(stable.as_digraph()).len(), k);
        }
    }
}

#[test]
fn complete_runs_are_consensus_runs() {
    for n in 2..=8 {
        assert_eq!(min_k(&gen_complete(n).unwrap()), 1);
    }
}

#[test]
fn generator_parameters_are_checked() {
    assert!(matches!(
        gen_theorem2(3, 3, None, None),
        Err(PredicateError::ParameterOutOfRange(_))
    ));
    assert!(matches!(
        gen_random_psrcs(4, 0, 1, 0),
        Err(PredicateError::ParameterOutOfRange(_))
    ));
    assert!(matches!(
        gen_random_psrcs(4, 4, 1, 0),
        Err(PredicateError::ParameterOutOfRange(_))
    ));
    let run = gen_complete(3).unwrap();
    let single: ProcessSet = [ProcessId(0)].into_iter().collect();
    assert!(matches!(
        p_src_holds(&run, ProcessId(0), single),
        Err(PredicateError::SubsetTooSmall(1))
    ));
}
