//! Directed graphs over process ids and the algorithms the protocol and the
//! verifiers need: strongly connected components, root components,
//! condensation, reachability pruning and simple-path lengths.
//!
//! Graphs are small (a few dozen vertices at most), so adjacency is kept as
//! one [`ProcessSet`] of successors per vertex.

use std::collections::VecDeque;

use thiserror::Error;

use crate::process::{ProcessId, ProcessSet, MAX_PROCESSES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("vertex {0} is not in the graph")]
    VertexNotInGraph(ProcessId),
    #[error("edge ({from} -> {to}) has an endpoint outside the vertex set")]
    EndpointNotVertex { from: ProcessId, to: ProcessId },
    #[error("vertex {vertex} is outside the universe of {universe} processes")]
    VertexOutOfRange { vertex: ProcessId, universe: usize },
}

/// An unlabeled digraph whose vertices are a subset of `{0, .., universe-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digraph {
    vertices: ProcessSet,
    succ: Vec<ProcessSet>,
}

impl Digraph {
    /// Empty graph over a universe of `universe` ids.
    pub fn new(universe: usize) -> Self {
        assert!(universe <= MAX_PROCESSES);
        Digraph {
            vertices: ProcessSet::EMPTY,
            succ: vec![ProcessSet::EMPTY; universe],
        }
    }

    /// Graph with the given vertices and no edges.
    pub fn with_vertices(universe: usize, vertices: ProcessSet) -> Self {
        let mut g = Digraph::new(universe);
        for v in vertices {
            g.add_vertex(v);
        }
        g
    }

    /// Builds a graph and checks that every edge endpoint is a vertex.
    pub fn from_edges<I>(
        universe: usize,
        vertices: ProcessSet,
        edges: I,
    ) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (ProcessId, ProcessId)>,
    {
        if let Some(v) = vertices.iter().find(|v| v.index() >= universe) {
            return Err(GraphError::VertexOutOfRange {
                vertex: v,
                universe,
            });
        }
        let mut g = Digraph::with_vertices(universe, vertices);
        for (from, to) in edges {
            if !vertices.contains(from) || !vertices.contains(to) {
                return Err(GraphError::EndpointNotVertex { from, to });
            }
            g.succ[from.index()].insert(to);
        }
        Ok(g)
    }

    /// Complete graph (with self-loops) on `{0, .., n-1}`.
    pub fn complete(n: usize) -> Self {
        let all = ProcessSet::full(n);
        Digraph {
            vertices: all,
            succ: vec![all; n],
        }
    }

    pub fn universe(&self) -> usize {
        self.succ.len()
    }

    pub fn vertices(&self) -> ProcessSet {
        self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, p: ProcessId) -> bool {
        self.vertices.contains(p)
    }

    pub fn add_vertex(&mut self, p: ProcessId) {
        assert!(p.index() < self.universe(), "vertex {p} outside universe");
        self.vertices.insert(p);
    }

    /// Adds `from -> to`, inserting both endpoints as vertices.
    pub fn add_edge(&mut self, from: ProcessId, to: ProcessId) {
        self.add_vertex(from);
        self.add_vertex(to);
        self.succ[from.index()].insert(to);
    }

    pub fn has_edge(&self, from: ProcessId, to: ProcessId) -> bool {
        self.vertices.contains(from) && self.succ[from.index()].contains(to)
    }

    pub fn successors(&self, p: ProcessId) -> ProcessSet {
        if self.vertices.contains(p) {
            self.succ[p.index()]
        } else {
            ProcessSet::EMPTY
        }
    }

    pub fn predecessors(&self, p: ProcessId) -> ProcessSet {
        self.vertices
            .iter()
            .filter(|&q| self.succ[q.index()].contains(p))
            .collect()
    }

    /// Edges in lexicographic `(from, to)` order.
    pub fn edges(&self) -> impl Iterator<Item = (ProcessId, ProcessId)> + '_ {
        self.vertices
            .iter()
            .flat_map(move |from| self.succ[from.index()].iter().map(move |to| (from, to)))
    }

    pub fn edge_count(&self) -> usize {
        self.vertices
            .iter()
            .map(|v| self.succ[v.index()].len())
            .sum()
    }

    /// Subgraph induced by `keep ∩ vertices`.
    pub fn induced(&self, keep: ProcessSet) -> Digraph {
        let keep = keep.intersection(self.vertices);
        let mut succ = vec![ProcessSet::EMPTY; self.universe()];
        for v in keep {
            succ[v.index()] = self.succ[v.index()].intersection(keep);
        }
        Digraph {
            vertices: keep,
            succ,
        }
    }

    /// Vertex-wise and edge-wise intersection.
    pub fn intersection(&self, other: &Digraph) -> Digraph {
        let universe = self.universe().min(other.universe());
        let vertices = self.vertices.intersection(other.vertices);
        let mut succ = vec![ProcessSet::EMPTY; universe];
        for v in vertices {
            succ[v.index()] = self.succ[v.index()].intersection(other.succ[v.index()]);
        }
        Digraph { vertices, succ }
    }

    /// Vertex and edge containment.
    pub fn is_subgraph_of(&self, other: &Digraph) -> bool {
        self.vertices.is_subset(other.vertices)
            && self
                .vertices
                .iter()
                .all(|v| self.succ[v.index()].is_subset(other.successors(v)))
    }

    /// Vertices reachable from `start` (including `start`).
    pub fn forward_closure(&self, start: ProcessId) -> ProcessSet {
        self.closure(start, |g, v| g.successors(v))
    }

    /// Vertices that reach `target` (including `target`).
    pub fn backward_closure(&self, target: ProcessId) -> ProcessSet {
        self.closure(target, |g, v| g.predecessors(v))
    }

    fn closure(
        &self,
        start: ProcessId,
        step: impl Fn(&Digraph, ProcessId) -> ProcessSet,
    ) -> ProcessSet {
        if !self.vertices.contains(start) {
            return ProcessSet::EMPTY;
        }
        let mut seen = ProcessSet::singleton(start);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for w in step(self, v).difference(seen) {
                seen.insert(w);
                queue.push_back(w);
            }
        }
        seen
    }
}

/// Maximal strongly connected components, ordered by smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccPartition {
    components: Vec<ProcessSet>,
    component_of: Vec<Option<usize>>,
}

impl SccPartition {
    pub fn components(&self) -> &[ProcessSet] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Index of the component containing `p`, if `p` is a vertex.
    pub fn component_of(&self, p: ProcessId) -> Option<usize> {
        self.component_of.get(p.index()).copied().flatten()
    }

    /// The component containing `p`, or the empty set.
    pub fn component_containing(&self, p: ProcessId) -> ProcessSet {
        self.component_of(p)
            .map(|i| self.components[i])
            .unwrap_or(ProcessSet::EMPTY)
    }
}

struct Tarjan<'a> {
    g: &'a Digraph,
    next_index: usize,
    index: Vec<Option<usize>>,
    low: Vec<usize>,
    stack: Vec<ProcessId>,
    on_stack: ProcessSet,
    comps: Vec<ProcessSet>,
}

impl Tarjan<'_> {
    fn visit(&mut self, v: ProcessId) {
        let vi = v.index();
        self.index[vi] = Some(self.next_index);
        self.low[vi] = self.next_index;
        self.next_index += 1;
        self.stack.push(v);
        self.on_stack.insert(v);

        for w in self.g.successors(v) {
            let wi = w.index();
            match self.index[wi] {
                None => {
                    self.visit(w);
                    self.low[vi] = self.low[vi].min(self.low[wi]);
                }
                Some(w_index) if self.on_stack.contains(w) => {
                    self.low[vi] = self.low[vi].min(w_index);
                }
                Some(_) => {}
            }
        }

        if Some(self.low[vi]) == self.index[vi] {
            let mut comp = ProcessSet::EMPTY;
            loop {
                let w = self.stack.pop().expect("tarjan stack underflow");
                self.on_stack.remove(w);
                comp.insert(w);
                if w == v {
                    break;
                }
            }
            self.comps.push(comp);
        }
    }
}

/// Tarjan's algorithm; components sorted by their smallest vertex id.
pub fn scc_partition(g: &Digraph) -> SccPartition {
    let mut t = Tarjan {
        g,
        next_index: 0,
        index: vec![None; g.universe()],
        low: vec![0; g.universe()],
        stack: Vec::new(),
        on_stack: ProcessSet::EMPTY,
        comps: Vec::new(),
    };
    for v in g.vertices() {
        if t.index[v.index()].is_none() {
            t.visit(v);
        }
    }
    let mut components = t.comps;
    components.sort_by_key(|c| c.first());
    let mut component_of = vec![None; g.universe()];
    for (i, comp) in components.iter().enumerate() {
        for v in *comp {
            component_of[v.index()] = Some(i);
        }
    }
    SccPartition {
        components,
        component_of,
    }
}

/// Components with no incoming edge from outside themselves.
pub fn root_components(g: &Digraph) -> Vec<ProcessSet> {
    scc_partition(g)
        .components()
        .iter()
        .copied()
        .filter(|&comp| comp.iter().all(|v| g.predecessors(v).is_subset(comp)))
        .collect()
}

/// Contracts every component to one node; node `i` is `partition.components()[i]`.
pub fn condensation(g: &Digraph, partition: &SccPartition) -> Digraph {
    let mut dag = Digraph::with_vertices(partition.len(), ProcessSet::full(partition.len()));
    for (from, to) in g.edges() {
        let (Some(ci), Some(cj)) = (partition.component_of(from), partition.component_of(to))
        else {
            continue;
        };
        if ci != cj {
            dag.add_edge(ProcessId(ci), ProcessId(cj));
        }
    }
    dag
}

/// True iff every vertex reaches every other one. A single vertex counts as
/// strongly connected with or without a self-loop.
pub fn is_strongly_connected(g: &Digraph) -> Result<bool, GraphError> {
    let first = g.vertices().first().ok_or(GraphError::EmptyGraph)?;
    Ok(g.forward_closure(first) == g.vertices() && g.backward_closure(first) == g.vertices())
}

/// Keeps `p` and every vertex with a directed path to `p`.
pub fn prune_unreachable_to(g: &Digraph, p: ProcessId) -> Result<Digraph, GraphError> {
    if !g.contains_vertex(p) {
        return Err(GraphError::VertexNotInGraph(p));
    }
    Ok(g.induced(g.backward_closure(p)))
}

/// For every ordered pair `(a, b)`, the set of lengths `ℓ` such that a simple
/// path of exactly `ℓ` edges leads from `a` to `b` (bit `ℓ` set). The empty
/// path gives bit 0 on the diagonal.
///
/// Exhaustive over (visited-set, endpoint) states, so exponential in the
/// vertex count; intended for graphs with at most ~12 vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplePathLengths {
    universe: usize,
    lengths: Vec<u64>,
}

impl SimplePathLengths {
    pub fn compute(g: &Digraph) -> Self {
        let n = g.universe();
        let mut lengths = vec![0u64; n * n];
        let mut seen = vec![false; (1usize << n) * n.max(1)];
        let mut stack = Vec::new();
        for source in g.vertices() {
            seen.iter_mut().for_each(|s| *s = false);
            let start = 1u64 << source.index();
            stack.push((start, source));
            seen[start as usize * n + source.index()] = true;
            while let Some((mask, last)) = stack.pop() {
                let len = mask.count_ones() - 1;
                lengths[source.index() * n + last.index()] |= 1u64 << len;
                for next in g.successors(last) {
                    let nb = 1u64 << next.index();
                    if mask & nb != 0 {
                        continue;
                    }
                    let m = mask | nb;
                    let slot = m as usize * n + next.index();
                    if !seen[slot] {
                        seen[slot] = true;
                        stack.push((m, next));
                    }
                }
            }
        }
        SimplePathLengths {
            universe: n,
            lengths,
        }
    }

    /// Bit mask of simple-path lengths from `a` to `b`.
    pub fn lengths(&self, a: ProcessId, b: ProcessId) -> u64 {
        self.lengths[a.index() * self.universe + b.index()]
    }
}

/// Transitive-closure reachability computed by the Warshall triple loop.
///
/// Deliberately shares nothing with the Tarjan and BFS code above so it can
/// serve as an independent oracle for them.
#[derive(Clone, Debug)]
pub struct ReachabilityMatrix {
    vertices: Vec<ProcessId>,
    reach: Vec<Vec<bool>>,
}

#[allow(clippy::needless_range_loop)]
pub fn reachability_oracle(g: &Digraph) -> ReachabilityMatrix {
    let vertices: Vec<ProcessId> = g.vertices().iter().collect();
    let m = vertices.len();
    let mut reach = vec![vec![false; m]; m];
    for i in 0..m {
        reach[i][i] = true;
        for j in 0..m {
            if g.has_edge(vertices[i], vertices[j]) {
                reach[i][j] = true;
            }
        }
    }
    for via in 0..m {
        for i in 0..m {
            if !reach[i][via] {
                continue;
            }
            for j in 0..m {
                if reach[via][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    ReachabilityMatrix { vertices, reach }
}

impl ReachabilityMatrix {
    fn position(&self, p: ProcessId) -> Option<usize> {
        self.vertices.iter().position(|&v| v == p)
    }

    /// Reflexive: every vertex reaches itself.
    pub fn reaches(&self, from: ProcessId, to: ProcessId) -> bool {
        match (self.position(from), self.position(to)) {
            (Some(i), Some(j)) => self.reach[i][j],
            _ => false,
        }
    }

    /// All reachable ordered pairs, reflexive ones included.
    pub fn pairs(&self) -> Vec<(ProcessId, ProcessId)> {
        let mut out = Vec::new();
        for (i, &a) in self.vertices.iter().enumerate() {
            for (j, &b) in self.vertices.iter().enumerate() {
                if self.reach[i][j] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Mutual-reachability classes, ordered by smallest member.
    #[allow(clippy::needless_range_loop)]
    pub fn mutual_classes(&self) -> Vec<Vec<ProcessId>> {
        let m = self.vertices.len();
        let mut assigned = vec![false; m];
        let mut classes = Vec::new();
        for i in 0..m {
            if assigned[i] {
                continue;
            }
            let mut class = Vec::new();
            for j in i..m {
                if self.reach[i][j] && self.reach[j][i] {
                    assigned[j] = true;
                    class.push(self.vertices[j]);
                }
            }
            classes.push(class);
        }
        classes
    }

    /// Classes that nothing outside the class reaches.
    pub fn root_classes(&self) -> Vec<Vec<ProcessId>> {
        self.mutual_classes()
            .into_iter()
            .filter(|class| {
                self.vertices.iter().all(|&outside| {
                    class.contains(&outside) || class.iter().all(|&c| !self.reaches(outside, c))
                })
            })
            .collect()
    }

    pub fn all_pairs_reachable(&self) -> bool {
        self.reach.iter().all(|row| row.iter().all(|&b| b))
    }
}
