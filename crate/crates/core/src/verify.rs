//! Trace verifiers.
//!
//! Every check recomputes its ground truth (skeletons, timely neighborhoods,
//! strongly connected components) from the trace's [`RunSpec`] and compares
//! it with what the processes recorded. Nothing here reads the protocol's own
//! view of the run except as the subject under test.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    is_strongly_connected, root_components, scc_partition, Digraph, SccPartition, SimplePathLengths,
};
use crate::predicate::p_srcs_holds;
use crate::process::{ProcessId, ProcessSet};
use crate::protocol::{DecisionRule, ProcessState, Value};
use crate::run::{RunSpec, SkeletonGraph};
use crate::sim::Trace;
use crate::Round;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("P_srcs({k}) does not hold on this run")]
    PredicateNotSatisfied { k: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckId {
    Integrity,
    Validity,
    KAgreement,
    TerminationBound,
    ExactlyOnce,
    NoEarlyDecision,
    LabelWindow,
    TimelyNeighborhood,
    PathPropagation,
    ComponentCoverage,
    LabelTimeliness,
    ComponentBound,
    StableComponentClosure,
    LabelProvenance,
    EstimateMonotonicity,
    EstimateStability,
    RootBound,
    AdoptionProvenance,
    ComponentEstimates,
    RootCorrespondence,
}

impl CheckId {
    pub fn name(self) -> &'static str {
        match self {
            CheckId::Integrity => "integrity",
            CheckId::Validity => "validity",
            CheckId::KAgreement => "k-agreement",
            CheckId::TerminationBound => "termination-bound",
            CheckId::ExactlyOnce => "exactly-once",
            CheckId::NoEarlyDecision => "no-early-decision",
            CheckId::LabelWindow => "label-window",
            CheckId::TimelyNeighborhood => "timely-neighborhood",
            CheckId::PathPropagation => "path-propagation",
            CheckId::ComponentCoverage => "component-coverage",
            CheckId::LabelTimeliness => "label-timeliness",
            CheckId::ComponentBound => "component-bound",
            CheckId::StableComponentClosure => "stable-component-closure",
            CheckId::LabelProvenance => "label-provenance",
            CheckId::EstimateMonotonicity => "estimate-monotonicity",
            CheckId::EstimateStability => "estimate-stability",
            CheckId::RootBound => "root-bound",
            CheckId::AdoptionProvenance => "adoption-provenance",
            CheckId::ComponentEstimates => "component-estimates",
            CheckId::RootCorrespondence => "root-correspondence",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub process: Option<ProcessId>,
    pub round: Option<Round>,
    pub detail: String,
}

/// Result of one check: how many instances were examined and the first
/// violation, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub check: CheckId,
    pub passed: bool,
    pub instances: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl CheckOutcome {
    fn new(check: CheckId) -> Self {
        CheckOutcome {
            check,
            passed: true,
            instances: 0,
            counterexample: None,
        }
    }

    /// Counts one instance; records the first failure.
    fn expect(
        &mut self,
        ok: bool,
        process: Option<ProcessId>,
        round: Option<Round>,
        detail: impl FnOnce() -> String,
    ) {
        self.instances += 1;
        if !ok && self.passed {
            self.passed = false;
            self.counterexample = Some(Counterexample {
                process,
                round,
                detail: detail(),
            });
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} ({} instances)", self.check, self.instances)?;
        if let Some(cx) = &self.counterexample {
            write!(f, ": ")?;
            if let Some(p) = cx.process {
                write!(f, "{p} ")?;
            }
            if let Some(r) = cx.round {
                write!(f, "round {r} ")?;
            }
            write!(f, "{}", cx.detail)?;
        }
        Ok(())
    }
}

/// A group of check outcomes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<CheckOutcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, id: CheckId) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.check == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}

/// Skeletons and components recomputed from the run.
struct GroundTruth {
    /// Index `r - 1`.
    skeletons: Vec<SkeletonGraph>,
    sccs: Vec<SccPartition>,
    /// Index `r - 1`; shared between equal consecutive skeletons.
    paths: Vec<std::rc::Rc<SimplePathLengths>>,
    stable: SkeletonGraph,
    stable_scc: SccPartition,
}

impl GroundTruth {
    fn new(run: &RunSpec, last: Round, with_paths: bool) -> Self {
        let skeletons = run.skeletons(last.max(1));
        let sccs = skeletons
            .iter()
            .map(|s| scc_partition(s.as_digraph()))
            .collect();
        let mut paths: Vec<std::rc::Rc<SimplePathLengths>> = Vec::new();
        if with_paths {
            for (i, s) in skeletons.iter().enumerate() {
                let shared = match (i.checked_sub(1), paths.last()) {
                    (Some(j), Some(prev)) if skeletons[j].same_edges(s) => prev.clone(),
                    _ => std::rc::Rc::new(SimplePathLengths::compute(s.as_digraph())),
                };
                paths.push(shared);
            }
        }
        let (stable, _) = run.stable_skeleton();
        let stable_scc = scc_partition(stable.as_digraph());
        GroundTruth {
            skeletons,
            sccs,
            paths,
            stable,
            stable_scc,
        }
    }

    fn skeleton(&self, r: Round) -> &SkeletonGraph {
        &self.skeletons[(r - 1) as usize]
    }

    /// `PT(p, r)`.
    fn pt(&self, p: ProcessId, r: Round) -> ProcessSet {
        self.skeleton(r).timely_neighborhood(p)
    }

    /// `C_p^r` as the induced subgraph of the round-`r` skeleton.
    fn component(&self, p: ProcessId, r: Round) -> Digraph {
        let members = self.sccs[(r - 1) as usize].component_containing(p);
        self.skeleton(r).as_digraph().induced(members)
    }

    /// Processes holding, by the end of round `t`, information that `b`
    /// held at the end of round `s`, following timely edges only.
    fn spread(&self, b: ProcessId, s: Round, t: Round) -> ProcessSet {
        let mut reached = ProcessSet::singleton(b);
        for round in s + 1..=t {
            let skeleton = self.skeleton(round);
            reached = reached
                .iter()
                .fold(reached, |acc, x| acc.union(skeleton.timely_receivers(x)));
        }
        reached
    }

    /// `C_p^∞`.
    fn stable_component(&self, p: ProcessId) -> Digraph {
        let members = self.stable_scc.component_containing(p);
        self.stable.as_digraph().induced(members)
    }
}

/// Earliest round `r*` with `G^∩r* = G^∩(r*+j)` for all `j < n`.
pub fn stable_window_start(run: &RunSpec) -> Round {
    let n = run.n() as Round;
    let last = run.prefix_len() as Round + 1;
    let skeletons = run.skeletons(last + n);
    (1..=last)
        .find(|&r| {
            let base = &skeletons[(r - 1) as usize];
            (r..r + n).all(|s| skeletons[(s - 1) as usize].same_edges(base))
        })
        .unwrap_or(last)
}

/// Deliveries match the round graphs and each delivered message is what the
/// sender's previous state sends.
pub fn check_integrity(trace: &Trace) -> CheckOutcome {
    let mut out = CheckOutcome::new(CheckId::Integrity);
    let n = trace.n();
    out.expect(
        trace.proposals.len() == n && trace.proposals.keys().all(|p| p.index() < n),
        None,
        None,
        || "proposals do not cover exactly the processes".into(),
    );
    let mut prev = trace.initial_states();
    for (i, rec) in trace.rounds.iter().enumerate() {
        let r = i as Round + 1;
        out.expect(rec.round == r, None, Some(r), || {
            format!("record numbered {}", rec.round)
        });
        let Ok(graph) = trace.run.round_graph(r) else {
            continue;
        };
        let delivered: BTreeSet<(ProcessId, ProcessId)> = rec
            .messages
            .iter()
            .map(|d| (d.message.sender, d.receiver))
            .collect();
        let expected: BTreeSet<(ProcessId, ProcessId)> = graph.edges().collect();
        out.expect(
            delivered == expected && rec.messages.len() == expected.len(),
            None,
            Some(r),
            || "delivered messages differ from the round graph".into(),
        );
        for d in &rec.messages {
            let sender = d.message.sender;
            let ok = prev
                .get(sender.index())
                .is_some_and(|s| s.send() == d.message);
            out.expect(ok, Some(sender), Some(r), || {
                format!("message to {} differs from the sender's state", d.receiver)
            });
        }
        out.expect(
            rec.states_after.len() == n
                && rec
                    .states_after
                    .iter()
                    .enumerate()
                    .all(|(i, s)| s.id.index() == i && s.n == n),
            None,
            Some(r),
            || "states are not indexed by process id".into(),
        );
        prev = rec.states_after.clone();
    }
    out
}

/// Every decision value was proposed by some process.
pub fn check_validity(trace: &Trace) -> CheckOutcome {
    let mut out = CheckOutcome::new(CheckId::Validity);
    let proposed: BTreeSet<Value> = trace.proposals.values().copied().collect();
    for (&p, d) in &trace.decisions {
        out.expect(proposed.contains(&d.value), Some(p), Some(d.round), || {
            format!("decided {} which nobody proposed", d.value)
        });
    }
    out
}

/// At most `k` distinct decision values.
pub fn check_k_agreement(trace: &Trace, k: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new(CheckId::KAgreement);
    let values = trace.distinct_decision_values();
    out.expect(values.len() <= k, None, None, || {
        format!("{} distinct values {values:?} exceed k = {k}", values.len())
    });
    out
}

/// Every process decided, by round `r* + 2n - 1`.
pub fn check_termination_bound(trace: &Trace) -> CheckOutcome {
    let mut out = CheckOutcome::new(CheckId::TerminationBound);
    let n = trace.n() as Round;
    let bound = stable_window_start(&trace.run) + 2 * n - 1;
    for p in trace.run.processes() {
        match trace.decisions.get(&p) {
            Some(d) => out.expect(d.round <= bound, Some(p), Some(d.round), || {
                format!("decided after the bound {bound}")
            }),
            None => out.expect(false, Some(p), None, || "never decided".into()),
        }
    }
    out
}

/// Decisions are never revoked or changed, the decision map agrees with the
/// states, and nobody decides before round `n`.
pub fn check_decision_record(trace: &Trace) -> Report {
    let mut once = CheckOutcome::new(CheckId::ExactlyOnce);
    let mut early = CheckOutcome::new(CheckId::NoEarlyDecision);
    let n = trace.n() as Round;
    let mut first: BTreeMap<ProcessId, crate::protocol::Decision> = BTreeMap::new();
    for rec in &trace.rounds {
        for s in &rec.states_after {
            match (first.get(&s.id), s.decision) {
                (Some(d), now) => once.expect(now == Some(*d), Some(s.id), Some(rec.round), || {
                    format!("decision changed from {d:?} to {now:?}")
                }),
                (None, Some(d)) => {
                    once.expect(d.round == rec.round, Some(s.id), Some(rec.round), || {
                        format!("new decision stamped round {}", d.round)
                    });
                    first.insert(s.id, d);
                }
                (None, None) => {}
            }
        }
    }
    once.expect(first == trace.decisions, None, None, || {
        "decision map disagrees with recorded states".into()
    });
    for (&p, d) in &trace.decisions {
        early.expect(d.round >= n, Some(p), Some(d.round), || {
            format!("decided before round n = {n}")
        });
    }
    Report {
        checks: vec![once, early],
    }
}

fn graph_is_sc(s: &ProcessState) -> bool {
    is_strongly_connected(&s.graph.unlabeled(s.n)).unwrap_or(false)
}

fn missing_from(sub: &Digraph, sup: &Digraph) -> String {
    let v = sub.vertices().difference(sup.vertices());
    let e: Vec<_> = sub.edges().filter(|&(a, b)| !sup.has_edge(a, b)).collect();
    format!("missing vertices {v}, missing edges {e:?}")
}

/// Approximation properties, checked at every recorded `(p, r)`.
pub fn verify_approximation(trace: &Trace) -> Report {
    let n = trace.n();
    let nr = n as Round;
    let last = trace.last_round();
    let mut window = CheckOutcome::new(CheckId::LabelWindow);
    let mut timely = CheckOutcome::new(CheckId::TimelyNeighborhood);
    let mut paths_ok = CheckOutcome::new(CheckId::PathPropagation);
    let mut coverage = CheckOutcome::new(CheckId::ComponentCoverage);
    let mut timeliness = CheckOutcome::new(CheckId::LabelTimeliness);
    let mut bound = CheckOutcome::new(CheckId::ComponentBound);
    let mut closure = CheckOutcome::new(CheckId::StableComponentClosure);
    let mut exact = CheckOutcome::new(CheckId::LabelProvenance);
    if last == 0 {
        return Report {
            checks: vec![
                window, timely, paths_ok, coverage, timeliness, bound, closure, exact,
            ],
        };
    }
    let truth = GroundTruth::new(&trace.run, last, true);
    // spread[b][s - 1][t - s] for t in s..s + n - 1
    let spread: Vec<Vec<Vec<ProcessSet>>> = (0..n)
        .map(|b| {
            (1..=last)
                .map(|s| {
                    (s..(s + nr).min(last + 1))
                        .map(|t| truth.spread(ProcessId(b), s, t))
                        .collect()
                })
                .collect()
        })
        .collect();

    for rec in &trace.rounds {
        let r = rec.round;
        if r == 0 || r > last {
            continue;
        }
        for s in &rec.states_after {
            let p = s.id;
            if p.index() >= n {
                continue;
            }
            let g = &s.graph;
            let at = (Some(p), Some(r));

            // owner present; endpoints are vertices; r - n < label <= r
            window.expect(g.vertices().contains(p), at.0, at.1, || {
                "owner missing from its graph".into()
            });
            for (a, b, label) in g.edges() {
                window.expect(
                    g.vertices().contains(a)
                        && g.vertices().contains(b)
                        && label + nr > r
                        && label <= r,
                    at.0,
                    at.1,
                    || {
                        format!(
                            "edge ({a} -> {b}) label {label} outside ({}, {r}]",
                            r as i64 - nr as i64
                        )
                    },
                );
            }

            // pt and the edges into the owner
            let pt = truth.pt(p, r);
            timely.expect(s.pt == pt, at.0, at.1, || {
                format!("pt {} but PT(p, r) = {pt}", s.pt)
            });
            for q in (0..n).map(ProcessId) {
                // older labels on non-timely senders may survive via neighbours
                let label = g.label(q, p);
                let fresh = label == Some(r);
                timely.expect(fresh == pt.contains(q), at.0, at.1, || {
                    format!(
                        "edge ({q} -> {p}) has label {label:?}, timely: {}",
                        pt.contains(q)
                    )
                });
            }

            // every label is backed by timeliness at that round
            for (a, b, label) in g.edges() {
                let ok = (1..=r).contains(&label) && truth.pt(b, label).contains(a);
                timeliness.expect(ok, at.0, at.1, || {
                    format!("edge ({a} -> {b}) label {label} not timely")
                });
            }

            // each label is the latest in-window round whose edge could reach p by r
            let mut expected_vertices = ProcessSet::singleton(p);
            for a in (0..n).map(ProcessId) {
                for b in (0..n).map(ProcessId) {
                    let expected = (r.saturating_sub(nr) + 1..=r).rev().find(|&sl| {
                        truth.pt(b, sl).contains(a)
                            && spread[b.index()][(sl - 1) as usize][(r - sl) as usize].contains(p)
                    });
                    if expected.is_some() {
                        expected_vertices.insert(a);
                        expected_vertices.insert(b);
                    }
                    let label = g.label(a, b);
                    exact.expect(label == expected, at.0, at.1, || {
                        format!("edge ({a} -> {b}) has label {label:?}, expected {expected:?}")
                    });
                }
            }
            exact.expect(g.vertices() == expected_vertices, at.0, at.1, || {
                format!("vertices {} but expected {expected_vertices}", g.vertices())
            });

            if r < nr {
                continue;
            }

            // paths of length <= n-1 ending at p carry the start's neighborhood
            let paths = &truth.paths[(r - 1) as usize];
            for start in (0..n).map(ProcessId) {
                let lengths = paths.lengths(start, p);
                for len in 0..nr {
                    if lengths & (1u64 << len) == 0 {
                        continue;
                    }
                    for q in truth.pt(start, r - len) {
                        let label = g.label(q, start);
                        let ok = label.is_some_and(|l| r - len <= l && l <= r);
                        paths_ok.expect(ok, at.0, at.1, || {
                            format!(
                                "path of length {len} from {start}: edge ({q} -> {start}) has label {label:?}, \
                                 expected within [{}, {r}]",
                                r - len
                            )
                        });
                    }
                }
            }

            let unlabeled = g.unlabeled(n);
            let own_component = truth.component(p, r);
            coverage.expect(own_component.is_subgraph_of(&unlabeled), at.0, at.1, || {
                format!(
                    "C_p^r not contained: {}",
                    missing_from(&own_component, &unlabeled)
                )
            });

            if graph_is_sc(s) {
                let earlier = truth.component(p, r + 1 - nr);
                bound.expect(unlabeled.is_subgraph_of(&earlier), at.0, at.1, || {
                    format!(
                        "strongly connected graph exceeds C_p^{}: {}",
                        r + 1 - nr,
                        missing_from(&unlabeled, &earlier)
                    )
                });
                for q in g.vertices() {
                    let stable = truth.stable_component(q);
                    closure.expect(stable.is_subgraph_of(&unlabeled), at.0, at.1, || {
                        format!(
                            "C_{q}^inf not contained: {}",
                            missing_from(&stable, &unlabeled)
                        )
                    });
                }
            }
        }
    }
    Report {
        checks: vec![
            window, timely, paths_ok, coverage, timeliness, bound, closure, exact,
        ],
    }
}

/// Estimate properties that hold in every run: values are proposals, an
/// undecided estimate never increases, and processes that never adopt a
/// decision keep their estimate fixed from the end of round `n - 1` on.
pub fn verify_estimates(trace: &Trace) -> Report {
    let mut mono = CheckOutcome::new(CheckId::EstimateMonotonicity);
    let mut stability = CheckOutcome::new(CheckId::EstimateStability);
    let n = trace.n() as Round;
    let proposed: BTreeSet<Value> = trace.proposals.values().copied().collect();
    for p in trace.run.processes() {
        let adopts = trace
            .decisions
            .get(&p)
            .is_some_and(|d| d.rule == DecisionRule::Adopted);
        let mut prev = trace.state(p, 0).expect("process exists");
        let anchor = trace.state(p, n - 1);
        for r in 1..=trace.last_round() {
            let Some(cur) = trace.state(p, r) else { break };
            mono.expect(proposed.contains(&cur.x), Some(p), Some(r), || {
                format!("estimate {} was never proposed", cur.x)
            });
            let adopted_now = cur
                .decision
                .is_some_and(|d| d.rule == DecisionRule::Adopted && d.round == r);
            if !adopted_now {
                mono.expect(cur.x <= prev.x, Some(p), Some(r), || {
                    format!("estimate rose from {} to {}", prev.x, cur.x)
                });
            }
            if !adopts && r >= n {
                if let Some(anchor) = &anchor {
                    stability.expect(cur.x == anchor.x, Some(p), Some(r), || {
                        format!(
                            "estimate {} differs from {} at round {}",
                            cur.x,
                            anchor.x,
                            n - 1
                        )
                    });
                }
            }
            prev = cur;
        }
    }
    Report {
        checks: vec![mono, stability],
    }
}

/// Structure of decisions in a run satisfying `P_srcs(k)`: root-component
/// bound, estimate agreement inside round-`n` components, decision values
/// bounded by root components, and provenance of adopted decisions.
pub fn verify_agreement_structure(trace: &Trace, k: usize) -> Result<Report, VerifyError> {
    if !p_srcs_holds(&trace.run, k).holds {
        return Err(VerifyError::PredicateNotSatisfied { k });
    }
    let n = trace.n();
    let nr = n as Round;
    let mut bound = CheckOutcome::new(CheckId::RootBound);
    let mut adoption = CheckOutcome::new(CheckId::AdoptionProvenance);
    let mut estimates = CheckOutcome::new(CheckId::ComponentEstimates);
    let mut corr = CheckOutcome::new(CheckId::RootCorrespondence);

    let (stable, _) = trace.run.stable_skeleton();
    let roots = root_components(stable.as_digraph());
    bound.expect(roots.len() <= k, None, None, || {
        format!("{} root components exceed k = {k}", roots.len())
    });

    if trace.last_round() >= nr {
        let truth = GroundTruth::new(&trace.run, nr, false);
        let rec = trace.record(nr).expect("round n recorded");
        for p in trace.run.processes() {
            let comp = truth.sccs[(nr - 1) as usize].component_containing(p);
            let xp = rec.states_after[p.index()].x;
            for q in comp {
                let xq = rec.states_after[q.index()].x;
                estimates.expect(xp == xq, Some(p), Some(nr), || {
                    format!("estimate {xp} but {q} in the same component holds {xq}")
                });
            }
        }
    } else {
        estimates.expect(false, None, None, || {
            format!(
                "trace ends at round {} before round n = {n}",
                trace.last_round()
            )
        });
    }

    let values = trace.distinct_decision_values();
    corr.expect(values.len() <= roots.len(), None, None, || {
        format!(
            "{} decision values but {} root components",
            values.len(),
            roots.len()
        )
    });

    for (&p, d) in &trace.decisions {
        if d.rule != DecisionRule::Adopted {
            continue;
        }
        let origin = trace.decisions.iter().any(|(&q, e)| {
            q != p
                && e.rule == DecisionRule::StronglyConnected
                && e.value == d.value
                && e.round < d.round
        });
        adoption.expect(origin, Some(p), Some(d.round), || {
            format!(
                "adopted {} with no earlier own-graph decision on it",
                d.value
            )
        });
    }

    Ok(Report {
        checks: vec![bound, estimates, corr, adoption],
    })
}

/// Everything [`verify_trace`] ran, plus the suites it skipped and why.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: usize,
    pub k: Option<usize>,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
    pub skipped: Vec<String>,
}

/// The full suite: integrity, validity, termination bound, decision record,
/// approximation and estimates always; with `k`, also k-agreement and, when
/// the predicate holds, the agreement structure.
pub fn verify_trace(trace: &Trace, k: Option<usize>) -> VerificationReport {
    let mut report = Report::default();
    report.checks.push(check_integrity(trace));
    report.checks.push(check_validity(trace));
    report.checks.push(check_termination_bound(trace));
    report.extend(check_decision_record(trace));
    report.extend(verify_approximation(trace));
    report.extend(verify_estimates(trace));
    let mut skipped = Vec::new();
    if let Some(k) = k {
        report.checks.push(check_k_agreement(trace, k));
        match verify_agreement_structure(trace, k) {
            Ok(r) => report.extend(r),
            Err(e) => skipped.push(format!("agreement structure: {e}")),
        }
    } else {
        skipped.push("k-agreement and agreement structure: no k given".into());
    }
    VerificationReport {
        n: trace.n(),
        k,
        passed: report.passed(),
        checks: report.checks,
        skipped,
    }
}
