//! Ordered-parallel multi-objective search.
//!
//! One coordinator thread owns OPEN. Each iteration it extracts up to
//! `num_pop` live labels into the next bags while `num_threads - 1` workers
//! process the bags extracted in the previous iteration. Workers never touch
//! OPEN: they record their effects in per-worker update buffers which the
//! coordinator applies as soon as each worker signals it is done.

mod coordinator;
mod shared;
pub mod split;
mod worker;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::search::QueueKind;
use crate::stats::SolveResult;

pub use split::{nbr_splitting, WorkerSlice};

/// How extraction, label processing and update application are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum ExecModel {
    /// Pipelined extraction, updates applied per worker as they arrive,
    /// lazy OPEN deletes.
    #[default]
    #[serde(rename = "async")]
    Async,
    /// As `Async` but OPEN deletes remove the entry immediately.
    #[serde(rename = "in-place")]
    InPlaceDeletes,
    /// Pipelined extraction, updates applied only after every worker returned.
    #[serde(rename = "async-open-sync-upd")]
    AsyncOpenSyncUpd,
    /// Extract, process and apply in strict sequence each iteration.
    #[serde(rename = "sync")]
    SyncOpenSyncUpd,
    /// Workers reduce duplicate and dominated inserts among themselves
    /// before handing updates over.
    #[serde(rename = "dup-dom")]
    DupDom,
}

impl ExecModel {
    pub const ALL: [ExecModel; 5] = [
        ExecModel::Async,
        ExecModel::InPlaceDeletes,
        ExecModel::AsyncOpenSyncUpd,
        ExecModel::SyncOpenSyncUpd,
        ExecModel::DupDom,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExecModel::Async => "async",
            ExecModel::InPlaceDeletes => "in-place",
            ExecModel::AsyncOpenSyncUpd => "async-open-sync-upd",
            ExecModel::SyncOpenSyncUpd => "sync",
            ExecModel::DupDom => "dup-dom",
        }
    }

    fn pipelined(self) -> bool {
        self != ExecModel::SyncOpenSyncUpd
    }

    fn applies_as_ready(self) -> bool {
        matches!(self, ExecModel::Async | ExecModel::InPlaceDeletes)
    }
}

/// How bag labels are spread across workers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum LbPolicy {
    /// Goal labels: node-centric G_OP pruning biased by bag index, P work
    /// round-robin. Regular labels: neighbor-granular splitting.
    #[default]
    #[serde(rename = "opmos")]
    Opmos,
    /// Whole labels round-robin, goal and regular alike.
    #[serde(rename = "label")]
    LabelCentric,
    /// Goal labels whole and round-robin, regular labels split by neighbor.
    #[serde(rename = "neighbor")]
    NeighborCentric,
    /// Goal labels one at a time: worker 0 does all P work, the others split
    /// node pruning. Regular labels split by neighbor.
    #[serde(rename = "goal-priority")]
    GoalPriority,
}

impl LbPolicy {
    pub const ALL: [LbPolicy; 4] =
        [LbPolicy::Opmos, LbPolicy::LabelCentric, LbPolicy::NeighborCentric, LbPolicy::GoalPriority];

    pub fn as_str(self) -> &'static str {
        match self {
            LbPolicy::Opmos => "opmos",
            LbPolicy::LabelCentric => "label",
            LbPolicy::NeighborCentric => "neighbor",
            LbPolicy::GoalPriority => "goal-priority",
        }
    }
}

macro_rules! str_enum {
    ($ty:ty, $what:literal) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = ConfigError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                <$ty>::ALL
                    .into_iter()
                    .find(|v| v.as_str() == s)
                    .ok_or_else(|| ConfigError::UnknownValue { what: $what, value: s.to_string() })
            }
        }
    };
}

str_enum!(ExecModel, "execution model");
str_enum!(LbPolicy, "load-balancing policy");

impl QueueKind {
    pub const ALL: [QueueKind; 2] = [QueueKind::Priority, QueueKind::Fifo];
}

str_enum!(QueueKind, "queue kind");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("num_threads must be at least 2 (one coordinator and one worker), got {0}")]
    TooFewThreads(usize),
    #[error("num_pop must be at least 1")]
    ZeroPop,
    #[error("unknown {what} '{value}'")]
    UnknownValue { what: &'static str, value: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RunConfig {
    /// Coordinator plus workers.
    pub num_threads: usize,
    /// Maximum live labels extracted per iteration.
    pub num_pop: usize,
    pub queue: QueueKind,
    pub exec: ExecModel,
    pub lb: LbPolicy,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { num_threads: 2, num_pop: 1, queue: QueueKind::Priority, exec: ExecModel::Async, lb: LbPolicy::Opmos }
    }
}

impl RunConfig {
    pub fn num_workers(&self) -> usize {
        self.num_threads.saturating_sub(1)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.num_threads < 2 {
            return Err(ConfigError::TooFewThreads(self.num_threads));
        }
        if self.num_pop == 0 {
            return Err(ConfigError::ZeroPop);
        }
        Ok(())
    }
}

/// Solves with the parallel solver. The cost set of the returned front equals
/// the sequential solver's for every valid configuration.
pub fn solve_parallel(g: &Graph, cfg: &RunConfig) -> Result<SolveResult, ConfigError> {
    cfg.validate()?;
    let graph = crate::namoa::with_heuristic(g);
    Ok(coordinator::run(&graph, cfg))
}
