//! Lock-step round executor.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::process::{ProcessId, ProcessSet};
use crate::protocol::{Decision, Inbox, Message, ProcessState, ProtocolError, Value};
use crate::run::RunSpec;
use crate::Round;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("no proposal for {0}")]
    MissingProposal(ProcessId),
    #[error("proposal given for {0}, which is not a process of this run")]
    UnknownProcess(ProcessId),
    #[error("horizon reached with undecided processes {undecided}")]
    HorizonExceeded {
        undecided: ProcessSet,
        trace: Box<Trace>,
    },
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

/// A message as delivered to one receiver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Delivery {
    pub receiver: ProcessId,
    pub message: Message,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: Round,
    /// Sorted by (sender, receiver).
    pub messages: Vec<Delivery>,
    /// Indexed by process id.
    pub states_after: Vec<ProcessState>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub run: RunSpec,
    pub proposals: BTreeMap<ProcessId, Value>,
    pub rounds: Vec<RoundRecord>,
    pub decisions: BTreeMap<ProcessId, Decision>,
}

impl Trace {
    pub fn n(&self) -> usize {
        self.run.n()
    }

    pub fn last_round(&self) -> Round {
        self.rounds.len() as Round
    }

    /// Initial states, as fixed by the proposals.
    pub fn initial_states(&self) -> Vec<ProcessState> {
        self.run
            .processes()
            .map(|p| {
                ProcessState::init(
                    p,
                    self.proposals.get(&p).copied().unwrap_or_default(),
                    self.n(),
                )
            })
            .collect()
    }

    /// State of `p` at the end of round `r`; round 0 is the initial state.
    pub fn state(&self, p: ProcessId, r: Round) -> Option<ProcessState> {
        if r == 0 {
            return self.initial_states().into_iter().nth(p.index());
        }
        self.rounds
            .get((r - 1) as usize)
            .and_then(|rec| rec.states_after.get(p.index()))
            .cloned()
    }

    pub fn record(&self, r: Round) -> Option<&RoundRecord> {
        r.checked_sub(1).and_then(|i| self.rounds.get(i as usize))
    }

    pub fn all_decided(&self) -> bool {
        self.decisions.len() == self.n()
    }

    pub fn distinct_decision_values(&self) -> Vec<Value> {
        let mut values: Vec<Value> = self.decisions.values().map(|d| d.value).collect();
        values.sort_unstable();
        values.dedup();
        values
    }
}

/// `L + 3n + 1` rounds: skeletons stabilize by `L + 1` and every
/// decision follows within `2n - 1` more rounds; the rest is slack.
pub fn default_horizon(run: &RunSpec) -> Round {
    (run.prefix_len() + 3 * run.n() + 1) as Round
}

/// Process `p` proposes `p + 1`.
pub fn distinct_proposals(n: usize) -> BTreeMap<ProcessId, Value> {
    (0..n).map(|i| (ProcessId(i), i as Value + 1)).collect()
}

/// Runs the algorithm on `run` until every process has decided or the
/// horizon (default [`default_horizon`]) is reached.
pub fn execute(
    run: &RunSpec,
    proposals: &BTreeMap<ProcessId, Value>,
    horizon: Option<Round>,
) -> Result<Trace, SimError> {
    let n = run.n();
    if let Some(&p) = proposals.keys().find(|p| p.index() >= n) {
        return Err(SimError::UnknownProcess(p));
    }
    let mut states = Vec::with_capacity(n);
    for p in run.processes() {
        let v = *proposals.get(&p).ok_or(SimError::MissingProposal(p))?;
        states.push(ProcessState::init(p, v, n));
    }

    let horizon = horizon.unwrap_or_else(|| default_horizon(run));
    let mut trace = Trace {
        run: run.clone(),
        proposals: proposals.clone(),
        rounds: Vec::new(),
        decisions: BTreeMap::new(),
    };

    for r in 1..=horizon {
        if states.iter().all(ProcessState::decided) {
            break;
        }
        let sent: Vec<Message> = states.iter().map(ProcessState::send).collect();
        let graph = run.round_graph(r).expect("r >= 1");

        let mut next = Vec::with_capacity(n);
        for state in &states {
            let inbox: Inbox = graph
                .senders_to(state.id)
                .iter()
                .map(|q| (q, sent[q.index()].clone()))
                .collect();
            next.push(state.transition(r, &inbox)?);
        }

        let mut messages = Vec::new();
        for (from, to) in graph.edges() {
            messages.push(Delivery {
                receiver: to,
                message: sent[from.index()].clone(),
            });
        }
        for s in &next {
            if let Some(d) = s.decision {
                trace.decisions.entry(s.id).or_insert(d);
            }
        }
        trace.rounds.push(RoundRecord {
            round: r,
            messages,
            states_after: next.clone(),
        });
        states = next;
    }

    let undecided: ProcessSet = states
        .iter()
        .filter(|s| !s.decided())
        .map(|s| s.id)
        .collect();
    if !undecided.is_empty() {
        return Err(SimError::HorizonExceeded {
            undecided,
            trace: Box::new(trace),
        });
    }
    Ok(trace)
}
