//! Safety, deadlock and progress checks over a composed system, plus the
//! stepping kernel used by the simulator.

mod progress;
mod safety;
mod scc;
mod sim;
mod traces;

use std::fmt;
use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::label::ActionLabel;
use crate::lts::Lts;

pub use progress::{check_progress, progress_sets, ProgressSet};
pub use safety::{check_deadlock, check_safety, shortest_path};
pub use scc::{sccs, terminal_sccs, Scc};
pub use sim::{enabled, step, Simulator};
pub use traces::visible_sequences;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Safety,
    Deadlock,
    Progress,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckKind::Safety => "safety",
            CheckKind::Deadlock => "deadlock",
            CheckKind::Progress => "progress",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    NotEvaluated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats {
    pub states: usize,
    pub transitions: usize,
    pub elapsed_ms: f64,
}

impl Stats {
    pub fn of(lts: &Lts, elapsed: Duration) -> Stats {
        Stats {
            states: lts.num_states(),
            transitions: lts.num_transitions(),
            elapsed_ms: elapsed.as_secs_f64() * 1000.0,
        }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub kind: CheckKind,
    pub verdict: Verdict,
    /// Progress set the report is about (progress checks only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<String>,
    /// Path from the initial state to the violation; empty when the check holds.
    pub trace: Vec<ActionLabel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violated_set: Option<String>,
    /// A cycle inside the terminal component reached by `trace`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<ActionLabel>>,
    pub stats: Stats,
}

impl AnalysisReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("progress set `{set}` names labels outside the alphabet: {}", labels.join(", "))]
    LabelsOutsideAlphabet { set: String, labels: Vec<String> },
    #[error("progress set `{0}` is empty")]
    EmptyProgressSet(String),
    #[error("progress set `{set}`: {msg}")]
    BadProgressSet { set: String, msg: String },
    #[error("label `{label}` is not enabled in state {state}")]
    NotEnabled { label: String, state: String },
    #[error("trace cannot be replayed: no path for `{label}` after {step} step(s)")]
    Replay { step: usize, label: String },
}
