//! The 2-source predicate family over runs, and run generators.
//!
//! A process `p` is a 2-source for a set `S` if two distinct members of `S`
//! hear `p` perpetually, i.e. have `p` in their timely neighborhood on the
//! stable skeleton. `P_srcs(k)` asks for a 2-source in every set of `k + 1`
//! processes.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::process::{ProcessId, ProcessSet, MAX_PROCESSES};
use crate::run::{RoundGraph, RunSpec, SkeletonGraph};

/// Rejection-resample budget for [`gen_random_psrcs`].
pub const MAX_GENERATION_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PredicateError {
    #[error("a 2-source needs a set of at least two processes, got {0}")]
    SubsetTooSmall(usize),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("no admissible run found after {0} attempts")]
    GenerationFailed(usize),
}

/// A (k+1)-subset together with the 2-source that covers it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetWitness {
    pub subset: ProcessSet,
    pub source: ProcessId,
}

/// Outcome of checking `P_srcs(k)`. Exactly one of `witness_sources` and
/// `violating_subset` is present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateReport {
    pub n: usize,
    pub k: usize,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_sources: Option<Vec<SubsetWitness>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violating_subset: Option<ProcessSet>,
}

/// Smallest process that is a 2-source for `subset` on `skeleton`.
pub fn find_two_source(skeleton: &SkeletonGraph, subset: ProcessSet) -> Option<ProcessId> {
    (0..skeleton.n())
        .map(ProcessId)
        .find(|&p| skeleton.timely_receivers(p).intersection(subset).len() >= 2)
}

/// `P_src(p, S)` on the stable skeleton of `run`. `p` may belong to `S`.
pub fn p_src_holds(
    run: &RunSpec,
    p: ProcessId,
    subset: ProcessSet,
) -> Result<bool, PredicateError> {
    if subset.len() < 2 {
        return Err(PredicateError::SubsetTooSmall(subset.len()));
    }
    let (stable, _) = run.stable_skeleton();
    Ok(stable.timely_receivers(p).intersection(subset).len() >= 2)
}

/// Exhaustive check of `P_srcs(k)` over all `(k+1)`-subsets; vacuously true
/// for `k >= n`.
pub fn p_srcs_holds(run: &RunSpec, k: usize) -> PredicateReport {
    let (stable, _) = run.stable_skeleton();
    check_on_skeleton(&stable, k)
}

/// As [`p_srcs_holds`], for an already computed stable skeleton.
pub fn check_on_skeleton(stable: &SkeletonGraph, k: usize) -> PredicateReport {
    let n = stable.n();
    let mut witnesses = Vec::new();
    for combo in (0..n).map(ProcessId).combinations(k + 1) {
        let subset: ProcessSet = combo.into_iter().collect();
        match find_two_source(stable, subset) {
            Some(source) => witnesses.push(SubsetWitness { subset, source }),
            None => {
                return PredicateReport {
                    n,
                    k,
                    holds: false,
                    witness_sources: None,
                    violating_subset: Some(subset),
                }
            }
        }
    }
    PredicateReport {
        n,
        k,
        holds: true,
        witness_sources: Some(witnesses),
        violating_subset: None,
    }
}

/// Smallest `k >= 1` for which `P_srcs(k)` holds. At most `n`.
pub fn min_k(run: &RunSpec) -> usize {
    let (stable, _) = run.stable_skeleton();
    (1..=run.n())
        .find(|&k| check_on_skeleton(&stable, k).holds)
        .unwrap_or(run.n())
}

/// The lower-bound run for `(k-1)`-set agreement: `k - 1` loners hear only
/// themselves, every other process hears itself and the hub. Constant run.
///
/// Defaults: loners `{0, .., k-2}`, hub `k - 1`.
pub fn gen_theorem2(
    n: usize,
    k: usize,
    loners: Option<ProcessSet>,
    hub: Option<ProcessId>,
) -> Result<RunSpec, PredicateError> {
    if !(1 < k && k < n && n <= MAX_PROCESSES) {
        return Err(PredicateError::ParameterOutOfRange(format!(
            "need 1 < k < n <= {MAX_PROCESSES}, got n = {n}, k = {k}"
        )));
    }
    let loners = loners.unwrap_or_else(|| (0..k - 1).map(ProcessId).collect());
    let hub = hub.unwrap_or(ProcessId(k - 1));
    if loners.len() != k - 1 {
        return Err(PredicateError::ParameterOutOfRange(format!(
            "need exactly {} loners, got {}",
            k - 1,
            loners.len()
        )));
    }
    if loners.iter().chain([hub]).any(|p| p.index() >= n) {
        return Err(PredicateError::ParameterOutOfRange(
            "loner or hub id outside [0, n)".into(),
        ));
    }
    if loners.contains(hub) {
        return Err(PredicateError::ParameterOutOfRange(
            "hub must not be a loner".into(),
        ));
    }
    let edges = (0..n)
        .map(ProcessId)
        .filter(|p| !loners.contains(*p))
        .map(|p| (hub.index(), p.index()));
    let tail = RoundGraph::with_self_loops(n, edges)
        .map_err(|e| PredicateError::ParameterOutOfRange(e.to_string()))?;
    Ok(RunSpec::constant(tail))
}

/// Complete graph in every round.
pub fn gen_complete(n: usize) -> Result<RunSpec, PredicateError> {
    if n == 0 || n > MAX_PROCESSES {
        return Err(PredicateError::ParameterOutOfRange(format!(
            "need 1 <= n <= {MAX_PROCESSES}, got {n}"
        )));
    }
    Ok(RunSpec::constant(RoundGraph::complete(n)))
}

fn random_edges(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for from in 0..n {
        for to in 0..n {
            if from != to && rng.gen_bool(density) {
                edges.push((from, to));
            }
        }
    }
    edges
}

/// Seeded sampler of runs satisfying `P_srcs(k)`.
///
/// The tail embeds a random 2-source cover: processes are split into at most
/// `k` nonempty groups and each group gets a common source, so any `k + 1`
/// processes contain two members of one group. Random extra edges are added
/// on top, and every prefix round is a random superset of the tail. Each
/// candidate is re-checked exhaustively before it is returned.
pub fn gen_random_psrcs(
    n: usize,
    k: usize,
    seed: u64,
    prefix_len: usize,
) -> Result<RunSpec, PredicateError> {
    if !(1 <= k && k < n && n <= MAX_PROCESSES) {
        return Err(PredicateError::ParameterOutOfRange(format!(
            "need 1 <= k < n <= {MAX_PROCESSES}, got n = {n}, k = {k}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_GENERATION_ATTEMPTS {
        let groups = rng.gen_range(1..=k);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut group_of = vec![0; n];
        for (i, &p) in order.iter().enumerate() {
            group_of[p] = if i < groups {
                i
            } else {
                rng.gen_range(0..groups)
            };
        }
        let sources: Vec<usize> = (0..groups).map(|_| rng.gen_range(0..n)).collect();

        let mut tail_edges: Vec<(usize, usize)> =
            (0..n).map(|p| (sources[group_of[p]], p)).collect();
        let extra = rng.gen_range(0.0..0.35);
        tail_edges.extend(random_edges(&mut rng, n, extra));
        let tail =
            RoundGraph::with_self_loops(n, tail_edges.iter().copied()).expect("edges within range");

        let mut prefix = Vec::with_capacity(prefix_len);
        for _ in 0..prefix_len {
            let density = rng.gen_range(0.0..0.6);
            let mut edges = tail_edges.clone();
            edges.extend(random_edges(&mut rng, n, density));
            prefix.push(RoundGraph::with_self_loops(n, edges).expect("edges within range"));
        }
        let run = RunSpec::new(prefix, tail).expect("uniform size");
        if p_srcs_holds(&run, k).holds {
            return Ok(run);
        }
    }
    Err(PredicateError::GenerationFailed(MAX_GENERATION_ATTEMPTS))
}

/// Seeded sampler of unconstrained runs: every round graph, prefix and tail,
/// is an independent random graph with a per-run edge density.
pub fn gen_arbitrary(n: usize, seed: u64, prefix_len: usize) -> Result<RunSpec, PredicateError> {
    if n == 0 || n > MAX_PROCESSES {
        return Err(PredicateError::ParameterOutOfRange(format!(
            "need 1 <= n <= {MAX_PROCESSES}, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tail_density = rng.gen_range(0.1..0.9);
    let tail_edges = random_edges(&mut rng, n, tail_density);
    let tail = RoundGraph::with_self_loops(n, tail_edges.iter().copied()).expect("in range");
    let mut prefix = Vec::with_capacity(prefix_len);
    for _ in 0..prefix_len {
        let density = rng.gen_range(0.2..1.0);
        let mut edges = random_edges(&mut rng, n, density);
        // Keep the tail edges alive in some prefix rounds so that the
        // stable skeleton is not always trivial.
        if rng.gen_bool(0.5) {
            edges.extend(tail_edges.iter().copied());
        }
        prefix.push(RoundGraph::with_self_loops(n, edges).expect("in range"));
    }
    Ok(RunSpec::new(prefix, tail).expect("uniform size"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::root_components;
    use crate::run::AsOf;

    fn set(ids: &[usize]) -> ProcessSet {
        ids.iter().map(|&i| ProcessId(i)).collect()
    }

    #[test]
    fn theorem2_neighborhoods() {
        let run = gen_theorem2(6, 3, None, None).unwrap();
        assert_eq!(run.prefix_len(), 0);
        let pt = |p| run.timely_neighborhood(ProcessId(p), AsOf::Stable).unwrap();
        assert_eq!(pt(0), set(&[0]));
        assert_eq!(pt(1), set(&[1]));
        for p in 2..6 {
            assert_eq!(pt(p), set(&[2, p]));
        }
    }

    #[test]
    fn theorem2_smallest_instance() {
        let run = gen_theorem2(3, 2, None, None).unwrap();
        let (stable, _) = run.stable_skeleton();
        assert_eq!(
            root_components(stable.as_digraph()),
            vec![set(&[0]), set(&[1])]
        );
        assert!(p_srcs_holds(&run, 2).holds);
        assert!(!p_srcs_holds(&run, 1).holds);
    }

    #[test]
    fn theorem2_parameter_checks() {
        assert!(gen_theorem2(3, 3, None, None).is_err());
        assert!(gen_theorem2(3, 1, None, None).is_err());
        assert!(gen_theorem2(5, 3, Some(set(&[0, 1])), Some(ProcessId(1))).is_err());
        assert!(gen_theorem2(5, 3, Some(set(&[0])), None).is_err());
        let custom = gen_theorem2(5, 3, Some(set(&[3, 4])), Some(ProcessId(0))).unwrap();
        assert!(p_srcs_holds(&custom, 3).holds);
        assert!(!p_srcs_holds(&custom, 2).holds);
    }

    #[test]
    fn hub_is_two_source() {
        let run = gen_theorem2(6, 3, None, None).unwrap();
        assert!(p_src_holds(&run, ProcessId(2), set(&[0, 3, 5])).unwrap());
        assert!(p_src_holds(&run, ProcessId(2), set(&[2, 4])).unwrap());
        assert!(!p_src_holds(&run, ProcessId(2), set(&[0, 1, 3])).unwrap());
        assert_eq!(
            p_src_holds(&run, ProcessId(2), set(&[3])),
            Err(PredicateError::SubsetTooSmall(1))
        );
    }

    #[test]
    fn complete_and_silent_runs() {
        let complete = gen_complete(5).unwrap();
        for k in 1..5 {
            assert!(p_srcs_holds(&complete, k).holds);
        }
        assert!(p_src_holds(&complete, ProcessId(4), set(&[0, 1])).unwrap());
        assert_eq!(min_k(&complete), 1);

        let silent = RunSpec::constant(RoundGraph::self_loops_only(4));
        let report = p_srcs_holds(&silent, 2);
        assert!(!report.holds);
        assert_eq!(report.violating_subset, Some(set(&[0, 1, 2])));
        assert!(report.witness_sources.is_none());
        assert!(!p_src_holds(&silent, ProcessId(0), set(&[0, 1])).unwrap());
        assert_eq!(min_k(&silent), 4);
        assert!(p_srcs_holds(&silent, 4).holds);
        assert!(p_srcs_holds(&silent, 9).holds);
    }

    #[test]
    fn theorem2_min_k() {
        assert_eq!(min_k(&gen_theorem2(6, 3, None, None).unwrap()), 3);
    }

    #[test]
    fn random_generator_is_seeded() {
        let a = gen_random_psrcs(7, 3, 11, 4).unwrap();
        let b = gen_random_psrcs(7, 3, 11, 4).unwrap();
        assert_eq!(a, b);
        assert!(p_srcs_holds(&a, 3).holds);
        assert_eq!(a.prefix_len(), 4);
        assert!(gen_random_psrcs(4, 4, 0, 0).is_err());
        assert!(gen_random_psrcs(4, 0, 0, 0).is_err());
    }

    #[test]
    fn report_json_shape() {
        let run = gen_theorem2(4, 2, None, None).unwrap();
        let bad = serde_json::to_string(&p_srcs_holds(&run, 1)).unwrap();
        assert_eq!(
            bad,
            r#"{"n":4,"k":1,"holds":false,"violating_subset":[0,1]}"#
        );
        let good = serde_json::to_value(p_srcs_holds(&run, 3)).unwrap();
        assert_eq!(
            good["witness_sources"][0]["subset"],
            serde_json::json!([0, 1, 2, 3])
        );
    }
}
