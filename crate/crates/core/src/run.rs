//! Communication graphs, runs and their skeletons.
//!
//! A run is an infinite sequence of per-round communication graphs. Skeletons
//! only ever lose edges as rounds go by and therefore stabilize, so every
//! stable skeleton is realized by an eventually-constant run: a finite prefix
//! followed by one tail graph repeated forever. [`RunSpec`] is that encoding.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Digraph;
use crate::process::{ProcessId, ProcessSet, MAX_PROCESSES};
use crate::Round;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("process {0} is missing its self-loop")]
    MissingSelfLoop(ProcessId),
    #[error("edge ({from} -> {to}) has an endpoint outside [0, {n})")]
    EndpointOutOfRange { from: usize, to: usize, n: usize },
    #[error("edge ({from} -> {to}) listed twice")]
    DuplicateEdge { from: usize, to: usize },
    #[error("system size must be in [1, {MAX_PROCESSES}], got {0}")]
    InvalidSystemSize(usize),
    #[error("round graph {index} has {found} processes, expected {expected}")]
    SizeMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("rounds are numbered from 1")]
    RoundZero,
}

/// One round's communication graph. Edge `(q -> p)` means `p` received the
/// round message of `q`. Every process hears itself.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RoundGraph {
    graph: Digraph,
}

impl RoundGraph {
    /// Strict constructor: all self-loops must be listed.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let graph = build(n, edges, false)?;
        for p in (0..n).map(ProcessId) {
            if !graph.has_edge(p, p) {
                return Err(ModelError::MissingSelfLoop(p));
            }
        }
        Ok(RoundGraph { graph })
    }

    /// Lenient constructor used by file readers: self-loops are inserted.
    pub fn with_self_loops<I>(n: usize, edges: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut graph = build(n, edges, false)?;
        for p in (0..n).map(ProcessId) {
            graph.add_edge(p, p);
        }
        Ok(RoundGraph { graph })
    }

    pub fn complete(n: usize) -> Self {
        check_size(n).expect("invalid system size");
        RoundGraph {
            graph: Digraph::complete(n),
        }
    }

    pub fn self_loops_only(n: usize) -> Self {
        RoundGraph::with_self_loops(n, []).expect("invalid system size")
    }

    pub fn n(&self) -> usize {
        self.graph.universe()
    }

    pub fn has_edge(&self, from: ProcessId, to: ProcessId) -> bool {
        self.graph.has_edge(from, to)
    }

    /// Processes whose round message reaches `p`.
    pub fn senders_to(&self, p: ProcessId) -> ProcessSet {
        self.graph.predecessors(p)
    }

    pub fn edges(&self) -> impl Iterator<Item = (ProcessId, ProcessId)> + '_ {
        self.graph.edges()
    }

    pub fn as_digraph(&self) -> &Digraph {
        &self.graph
    }
}

impl fmt::Debug for RoundGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self.edges().map(|(a, b)| (a.0, b.0)).collect();
        f.debug_struct("RoundGraph")
            .field("n", &self.n())
            .field("edges", &edges)
            .finish()
    }
}

fn check_size(n: usize) -> Result<(), ModelError> {
    if n == 0 || n > MAX_PROCESSES {
        return Err(ModelError::InvalidSystemSize(n));
    }
    Ok(())
}

fn build<I>(n: usize, edges: I, reject_duplicates: bool) -> Result<Digraph, ModelError>
where
    I: IntoIterator<Item = (usize, usize)>,
{
    check_size(n)?;
    let mut graph = Digraph::with_vertices(n, ProcessSet::full(n));
    for (from, to) in edges {
        if from >= n || to >= n {
            return Err(ModelError::EndpointOutOfRange { from, to, n });
        }
        if reject_duplicates && graph.has_edge(ProcessId(from), ProcessId(to)) {
            return Err(ModelError::DuplicateEdge { from, to });
        }
        graph.add_edge(ProcessId(from), ProcessId(to));
    }
    Ok(graph)
}

/// Checks a raw edge list against the round-graph invariants.
pub fn validate_round_graph(n: usize, edges: &[(usize, usize)]) -> Result<RoundGraph, ModelError> {
    RoundGraph::from_edges(n, edges.iter().copied())
}

/// Which skeleton a [`SkeletonGraph`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AsOf {
    Round(Round),
    Stable,
}

impl fmt::Display for AsOf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AsOf::Round(r) => write!(f, "round {r}"),
            AsOf::Stable => write!(f, "stable"),
        }
    }
}

/// Intersection of the communication graphs of all rounds up to `as_of`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonGraph {
    graph: Digraph,
    as_of: AsOf,
}

impl SkeletonGraph {
    pub fn n(&self) -> usize {
        self.graph.universe()
    }

    pub fn as_of(&self) -> AsOf {
        self.as_of
    }

    pub fn as_digraph(&self) -> &Digraph {
        &self.graph
    }

    pub fn has_edge(&self, from: ProcessId, to: ProcessId) -> bool {
        self.graph.has_edge(from, to)
    }

    /// `{q : (q -> p) in the skeleton}`.
    pub fn timely_neighborhood(&self, p: ProcessId) -> ProcessSet {
        self.graph.predecessors(p)
    }

    /// `{q : (p -> q) in the skeleton}`: the processes that perpetually hear `p`.
    pub fn timely_receivers(&self, p: ProcessId) -> ProcessSet {
        self.graph.successors(p)
    }

    pub fn edges(&self) -> impl Iterator<Item = (ProcessId, ProcessId)> + '_ {
        self.graph.edges()
    }

    pub fn same_edges(&self, other: &SkeletonGraph) -> bool {
        self.graph == other.graph
    }
}

/// An eventually-constant run: rounds `1..=L` from `prefix`, then `tail` forever.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RunSpecFile", into = "RunSpecFile")]
pub struct RunSpec {
    n: usize,
    prefix: Vec<RoundGraph>,
    tail: RoundGraph,
}

impl RunSpec {
    pub fn new(prefix: Vec<RoundGraph>, tail: RoundGraph) -> Result<Self, ModelError> {
        let n = tail.n();
        for (index, g) in prefix.iter().enumerate() {
            if g.n() != n {
                return Err(ModelError::SizeMismatch {
                    index,
                    expected: n,
                    found: g.n(),
                });
            }
        }
        Ok(RunSpec { n, prefix, tail })
    }

    /// The same graph in every round.
    pub fn constant(graph: RoundGraph) -> Self {
        RunSpec {
            n: graph.n(),
            prefix: Vec::new(),
            tail: graph,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `L`, the number of explicit prefix rounds.
    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn prefix(&self) -> &[RoundGraph] {
        &self.prefix
    }

    pub fn tail(&self) -> &RoundGraph {
        &self.tail
    }

    pub fn processes(&self) -> impl Iterator<Item = ProcessId> {
        (0..self.n).map(ProcessId)
    }

    /// `G^r`: the prefix graph for `r <= L`, the tail afterwards.
    pub fn round_graph(&self, r: Round) -> Result<&RoundGraph, ModelError> {
        if r == 0 {
            return Err(ModelError::RoundZero);
        }
        Ok(self.prefix.get((r - 1) as usize).unwrap_or(&self.tail))
    }

    /// `G^∩r`: intersection of the round graphs `1..=r`.
    pub fn skeleton_at(&self, r: Round) -> Result<SkeletonGraph, ModelError> {
        if r == 0 {
            return Err(ModelError::RoundZero);
        }
        let last_distinct = r.min(self.prefix.len() as Round + 1);
        let mut graph = self.round_graph(1)?.as_digraph().clone();
        for round in 2..=last_distinct {
            graph = graph.intersection(self.round_graph(round)?.as_digraph());
        }
        Ok(SkeletonGraph {
            graph,
            as_of: AsOf::Round(r),
        })
    }

    /// Skeletons for rounds `1..=last`, computed incrementally.
    pub fn skeletons(&self, last: Round) -> Vec<SkeletonGraph> {
        let mut out: Vec<SkeletonGraph> = Vec::with_capacity(last as usize);
        for r in 1..=last {
            let g = self.round_graph(r).expect("r >= 1").as_digraph();
            let graph = match out.last() {
                Some(prev) => prev.graph.intersection(g),
                None => g.clone(),
            };
            out.push(SkeletonGraph {
                graph,
                as_of: AsOf::Round(r),
            });
        }
        out
    }

    /// `G^∩∞` together with `r_ST`, the first round from which every
    /// skeleton equals it. `r_ST <= L + 1`.
    pub fn stable_skeleton(&self) -> (SkeletonGraph, Round) {
        let last = self.prefix.len() as Round + 1;
        let skeletons = self.skeletons(last);
        let stable = skeletons.last().expect("at least one round").graph.clone();
        let r_st = skeletons
            .iter()
            .position(|s| s.graph == stable)
            .expect("last skeleton matches") as Round
            + 1;
        (
            SkeletonGraph {
                graph: stable,
                as_of: AsOf::Stable,
            },
            r_st,
        )
    }

    /// `PT(p, r)`, or `PT(p)` for [`AsOf::Stable`].
    pub fn timely_neighborhood(&self, p: ProcessId, at: AsOf) -> Result<ProcessSet, ModelError> {
        let skeleton = match at {
            AsOf::Round(r) => self.skeleton_at(r)?,
            AsOf::Stable => self.stable_skeleton().0,
        };
        Ok(skeleton.timely_neighborhood(p))
    }
}

/// On-disk form: `{"n": .., "prefix": [[[from,to],..],..], "tail": [[from,to],..]}`.
#[derive(Serialize, Deserialize)]
struct RunSpecFile {
    n: usize,
    #[serde(default)]
    prefix: Vec<Vec<(usize, usize)>>,
    tail: Vec<(usize, usize)>,
}

fn read_graph(n: usize, edges: Vec<(usize, usize)>) -> Result<RoundGraph, ModelError> {
    let mut graph = build(n, edges, true)?;
    for p in (0..n).map(ProcessId) {
        graph.add_edge(p, p);
    }
    Ok(RoundGraph { graph })
}

impl TryFrom<RunSpecFile> for RunSpec {
    type Error = ModelError;

    fn try_from(file: RunSpecFile) -> Result<Self, ModelError> {
        let prefix = file
            .prefix
            .into_iter()
            .map(|edges| read_graph(file.n, edges))
            .collect::<Result<Vec<_>, _>>()?;
        let tail = read_graph(file.n, file.tail)?;
        RunSpec::new(prefix, tail)
    }
}

fn write_graph(g: &RoundGraph) -> Vec<(usize, usize)> {
    let edges: BTreeSet<(usize, usize)> = g.edges().map(|(a, b)| (a.0, b.0)).collect();
    edges.into_iter().collect()
}

impl From<RunSpec> for RunSpecFile {
    fn from(run: RunSpec) -> Self {
        RunSpecFile {
            n: run.n,
            prefix: run.prefix.iter().map(write_graph).collect(),
            tail: write_graph(&run.tail),
        }
    }
}
