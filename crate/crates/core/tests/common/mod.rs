#![allow(dead_code)]

use kset_core::graph::Digraph;
use kset_core::{ProcessId, ProcessSet, RoundGraph, RunSpec};
use proptest::prelude::*;

/// Edges encoded as an `n * n` bit vector, row-major by sender.
pub fn edges_from_bits(n: usize, bits: &[bool]) -> Vec<(ProcessId, ProcessId)> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if bits[a * n + b] {
                out.push((ProcessId(a), ProcessId(b)));
            }
        }
    }
    out
}

pub fn digraph_on(n: usize, vertices: ProcessSet, bits: &[bool]) -> Digraph {
    let edges = edges_from_bits(n, bits)
        .into_iter()
        .filter(|&(a, b)| vertices.contains(a) && vertices.contains(b));
    Digraph::from_edges(n, vertices, edges).unwrap()
}

/// Digraphs over a random vertex subset of `0..n`, `1 <= n <= max_n`.
pub fn arb_digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(|n| {
        (
            Just(n),
            1u64..(1u64 << n),
            prop::collection::vec(any::<bool>(), n * n),
        )
            .prop_map(|(n, mask, bits)| digraph_on(n, ProcessSet::from_bits(mask), &bits))
    })
}

pub fn round_graph(n: usize, bits: &[bool]) -> RoundGraph {
    let edges = edges_from_bits(n, bits)
        .into_iter()
        .map(|(a, b)| (a.0, b.0));
    RoundGraph::with_self_loops(n, edges).unwrap()
}

/// Runs with `n` in `min_n..=max_n` and up to `max_prefix` prefix rounds.
pub fn arb_run(min_n: usize, max_n: usize, max_prefix: usize) -> impl Strategy<Value = RunSpec> {
    (min_n..=max_n, 0..=max_prefix).prop_flat_map(|(n, len)| {
        (
            prop::collection::vec(prop::collection::vec(any::<bool>(), n * n), len),
            prop::collection::vec(any::<bool>(), n * n),
        )
            .prop_map(move |(prefix, tail)| {
                let prefix = prefix.iter().map(|bits| round_graph(n, bits)).collect();
                RunSpec::new(prefix, round_graph(n, &tail)).unwrap()
            })
    })
}

/// Brute-force intersection of the round graphs `1..=r`.
pub fn intersect_rounds(run: &RunSpec, r: u64) -> Vec<(ProcessId, ProcessId)> {
    let n = run.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let (a, b) = (ProcessId(a), ProcessId(b));
            if (1..=r).all(|t| run.round_graph(t).unwrap().has_edge(a, b)) {
                out.push((a, b));
            }
        }
    }
    out
}
