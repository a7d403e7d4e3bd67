//! The per-process state machine of the k-set agreement algorithm.
//!
//! Each process keeps its perpetually-timely neighborhood `pt`, an estimate
//! `x`, and a round-labeled approximation graph of the stable skeleton. Every
//! round it broadcasts `(tag, x, graph)`; on receipt it
//!
//! 1. intersects `pt` with the senders it heard,
//! 2. adopts a decision broadcast by a timely neighbor, if undecided,
//! 3. rebuilds its approximation graph from its timely neighbors' graphs,
//! 4. if still undecided, takes the minimum timely estimate and decides once
//!    `r >= n` and the approximation graph is strongly connected.

use std::collections::BTreeMap;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{is_strongly_connected, Digraph};
use crate::process::{ProcessId, ProcessSet};
use crate::Round;

/// Proposal and estimate domain.
pub type Value = u64;

/// Map from sender to the message it delivered this round.
pub type Inbox = BTreeMap<ProcessId, Message>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error("inbox of {0} lacks its own message")]
    SelfMessageMissing(ProcessId),
}

/// A process's round-labeled digraph. At most one label per ordered pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ApproxGraph {
    vertices: ProcessSet,
    edges: BTreeMap<(ProcessId, ProcessId), Round>,
}

impl ApproxGraph {
    /// `⟨{owner}, ∅⟩`.
    pub fn trivial(owner: ProcessId) -> Self {
        ApproxGraph {
            vertices: ProcessSet::singleton(owner),
            edges: BTreeMap::new(),
        }
    }

    pub fn vertices(&self) -> ProcessSet {
        self.vertices
    }

    pub fn label(&self, from: ProcessId, to: ProcessId) -> Option<Round> {
        self.edges.get(&(from, to)).copied()
    }

    /// Labeled edges in lexicographic `(from, to)` order.
    pub fn edges(&self) -> impl Iterator<Item = (ProcessId, ProcessId, Round)> + '_ {
        self.edges.iter().map(|(&(a, b), &r)| (a, b, r))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Overwrites the label of an existing edge, returning the old one.
    /// Only meant for building corrupted traces in negative tests.
    pub fn relabel(&mut self, from: ProcessId, to: ProcessId, label: Round) -> Option<Round> {
        self.edges
            .get_mut(&(from, to))
            .map(|l| std::mem::replace(l, label))
    }

    /// Inserts a vertex or edge without any invariant checks. Only meant for
    /// building corrupted traces in negative tests.
    pub fn force_edge(&mut self, from: ProcessId, to: ProcessId, label: Round) {
        self.vertices.insert(from);
        self.vertices.insert(to);
        self.edges.insert((from, to), label);
    }

    /// Unlabeled view over a universe of `n` processes.
    pub fn unlabeled(&self, n: usize) -> Digraph {
        let mut g = Digraph::with_vertices(n, self.vertices);
        for &(a, b) in self.edges.keys() {
            g.add_edge(a, b);
        }
        g
    }
}

#[derive(Serialize, Deserialize)]
struct ApproxGraphFile {
    vertices: ProcessSet,
    edges: Vec<(ProcessId, ProcessId, Round)>,
}

impl Serialize for ApproxGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ApproxGraphFile {
            vertices: self.vertices,
            edges: self.edges().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ApproxGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let file = ApproxGraphFile::deserialize(deserializer)?;
        let mut edges = BTreeMap::new();
        for (a, b, r) in file.edges {
            if edges.insert((a, b), r).is_some() {
                return Err(de::Error::custom(format!(
                    "edge ({a} -> {b}) labeled twice"
                )));
            }
        }
        Ok(ApproxGraph {
            vertices: file.vertices,
            edges,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MessageTag {
    Prop,
    Decide,
}

/// The single message a process broadcasts in a round.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub sender: ProcessId,
    pub tag: MessageTag,
    pub x: Value,
    pub graph: ApproxGraph,
}

/// How a process reached its decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecisionRule {
    /// Own approximation graph became strongly connected.
    StronglyConnected,
    /// Adopted a value broadcast by a decided timely neighbor.
    Adopted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decision {
    pub value: Value,
    pub round: Round,
    pub rule: DecisionRule,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessState {
    pub id: ProcessId,
    pub n: usize,
    pub pt: ProcessSet,
    pub x: Value,
    pub graph: ApproxGraph,
    pub decision: Option<Decision>,
}

impl ProcessState {
    pub fn init(id: ProcessId, proposal: Value, n: usize) -> Self {
        ProcessState {
            id,
            n,
            pt: ProcessSet::full(n),
            x: proposal,
            graph: ApproxGraph::trivial(id),
            decision: None,
        }
    }

    pub fn decided(&self) -> bool {
        self.decision.is_some()
    }

    /// The round message; a value copy of the current estimate and graph.
    pub fn send(&self) -> Message {
        Message {
            sender: self.id,
            tag: if self.decided() {
                MessageTag::Decide
            } else {
                MessageTag::Prop
            },
            x: self.x,
            graph: self.graph.clone(),
        }
    }

    /// Full round-`r` transition. `inbox` holds exactly the messages
    /// delivered to this process in round `r`.
    pub fn transition(&self, r: Round, inbox: &Inbox) -> Result<ProcessState, ProtocolError> {
        if !inbox.contains_key(&self.id) {
            return Err(ProtocolError::SelfMessageMissing(self.id));
        }
        let mut next = self.clone();
        next.update_pt(inbox);
        next.handle_decide(r, inbox);
        next.approximate_skeleton(r, inbox);
        next.update_estimate_and_decide(r, inbox);
        Ok(next)
    }

    pub fn update_pt(&mut self, inbox: &Inbox) {
        let heard: ProcessSet = inbox.keys().copied().collect();
        self.pt = self.pt.intersection(heard);
    }

    /// Adopts the smallest value among decide messages from timely neighbors.
    pub fn handle_decide(&mut self, r: Round, inbox: &Inbox) {
        if self.decided() {
            return;
        }
        let adopted = self
            .timely_messages(inbox)
            .filter(|m| m.tag == MessageTag::Decide)
            .map(|m| m.x)
            .min();
        if let Some(value) = adopted {
            self.x = value;
            self.decision = Some(Decision {
                value,
                round: r,
                rule: DecisionRule::Adopted,
            });
        }
    }

    /// Rebuilds the approximation graph from the timely neighbors' graphs.
    pub fn approximate_skeleton(&mut self, r: Round, inbox: &Inbox) {
        let mut graph = ApproxGraph::trivial(self.id);
        for q in self.pt {
            graph.vertices.insert(q);
            graph.edges.insert((q, self.id), r);
        }
        for m in self.timely_messages(inbox) {
            graph.vertices = graph.vertices.union(m.graph.vertices);
        }
        for m in self.timely_messages(inbox) {
            for (a, b, label) in m.graph.edges() {
                if !graph.vertices.contains(a) || !graph.vertices.contains(b) {
                    continue;
                }
                graph
                    .edges
                    .entry((a, b))
                    .and_modify(|l| *l = (*l).max(label))
                    .or_insert(label);
            }
        }

        // stale: label <= r - n
        let n = self.n as Round;
        graph.edges.retain(|_, label| *label + n > r);

        let keep = graph.unlabeled(self.n).backward_closure(self.id);
        graph.vertices = keep;
        graph
            .edges
            .retain(|&(a, b), _| keep.contains(a) && keep.contains(b));
        self.graph = graph;
    }

    pub fn update_estimate_and_decide(&mut self, r: Round, inbox: &Inbox) {
        if self.decided() {
            return;
        }
        if let Some(min) = self.timely_messages(inbox).map(|m| m.x).min() {
            self.x = min;
        }
        if r >= self.n as Round
            && is_strongly_connected(&self.graph.unlabeled(self.n)).expect("owner is a vertex")
        {
            self.decision = Some(Decision {
                value: self.x,
                round: r,
                rule: DecisionRule::StronglyConnected,
            });
        }
    }

    fn timely_messages<'a>(&self, inbox: &'a Inbox) -> impl Iterator<Item = &'a Message> + 'a {
        let pt = self.pt;
        inbox
            .iter()
            .filter(move |(q, _)| pt.contains(**q))
            .map(|(_, m)| m)
    }
}
