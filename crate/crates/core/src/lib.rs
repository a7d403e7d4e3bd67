//! Stable skeleton graphs and k-set agreement in round-based message passing.
//!
//! Runs are sequences of per-round communication graphs ([`run`]). The
//! skeleton of a run keeps the edges that were timely in every round so far;
//! its limit, the stable skeleton, captures the run's perpetual synchrony.
//! [`protocol`] implements a k-set agreement algorithm in which every process
//! maintains a local approximation of the stable skeleton and decides once
//! that approximation is strongly connected. [`predicate`] checks and
//! generates runs satisfying the 2-source predicate `P_srcs(k)` under which
//! the algorithm guarantees at most `k` decision values, [`sim`] executes
//! runs, and [`verify`] checks recorded traces against ground truth derived
//! directly from the run.

pub mod dot;
pub mod graph;
pub mod predicate;
pub mod process;
pub mod protocol;
pub mod run;
pub mod sim;
pub mod verify;

/// Round numbers start at 1.
pub type Round = u64;

pub use process::{ProcessId, ProcessSet};
pub use protocol::Value;
pub use run::{RoundGraph, RunSpec};
pub use sim::{execute, Trace};
