use std::io::{self, Write};

use fspcheck_core::analysis::{AnalysisReport, CheckKind, Stats, Verdict};
use fspcheck_core::ActionLabel;
use serde_json::json;

/// Everything `check` found for one target.
pub struct CheckOutcome {
    pub target: String,
    pub stats: Stats,
    pub reports: Vec<AnalysisReport>,
    /// Declared progress sets that share no label with the target.
    pub inapplicable: Vec<String>,
}

impl CheckOutcome {
    pub fn all_hold(&self) -> bool {
        self.reports.iter().all(AnalysisReport::holds)
    }

    pub fn write_json(&self, out: &mut impl Write) -> io::Result<()> {
        let value = json!({
            "target": self.target,
            "states": self.stats.states,
            "transitions": self.stats.transitions,
            "elapsed_ms": self.stats.elapsed_ms,
            "reports": self.reports,
            "inapplicable_progress_sets": self.inapplicable,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&value)?)
    }

    pub fn write_human(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "Composition: {}", self.target)?;
        writeln!(
            out,
            "States: {} Transitions: {} ({:.0} ms)",
            self.stats.states, self.stats.transitions, self.stats.elapsed_ms
        )?;
        let of = |kind| self.reports.iter().find(|r| r.kind == kind);
        match (of(CheckKind::Safety), of(CheckKind::Deadlock)) {
            (Some(s), Some(d)) if s.holds() && d.holds() => writeln!(out, "No deadlocks/errors")?,
            (safety, deadlock) => {
                for report in [safety, deadlock].into_iter().flatten() {
                    write_safety(out, report)?;
                }
            }
        }
        let progress: Vec<&AnalysisReport> = self
            .reports
            .iter()
            .filter(|r| r.kind == CheckKind::Progress)
            .collect();
        if progress.is_empty() && self.inapplicable.is_empty() {
            return Ok(());
        }
        writeln!(out, "Progress Check...")?;
        for set in &self.inapplicable {
            writeln!(out, "Progress set {set} skipped: none of its labels occur in {}", self.target)?;
        }
        if progress.iter().any(|r| r.verdict == Verdict::NotEvaluated) {
            return writeln!(out, "Progress Check skipped: ERROR is reachable");
        }
        let violated: Vec<_> = progress.iter().filter(|r| !r.holds()).collect();
        if violated.is_empty() {
            if !progress.is_empty() {
                writeln!(out, "No progress violations detected.")?;
            }
            return Ok(());
        }
        for report in violated {
            let name = report.violated_set.as_deref().or(report.set.as_deref()).unwrap_or("?");
            writeln!(out, "Progress violation: {name}")?;
            writeln!(out, "Trace to terminal set of states:")?;
            write_labels(out, &report.trace)?;
            writeln!(out, "Cycle in terminal set:")?;
            write_labels(out, report.cycle.as_deref().unwrap_or_default())?;
        }
        Ok(())
    }
}

fn write_safety(out: &mut impl Write, report: &AnalysisReport) -> io::Result<()> {
    match (report.kind, report.holds()) {
        (CheckKind::Safety, true) => writeln!(out, "No errors"),
        (CheckKind::Deadlock, true) => writeln!(out, "No deadlocks"),
        (CheckKind::Safety, false) => {
            writeln!(out, "Trace to property violation:")?;
            write_labels(out, &report.trace)
        }
        _ => {
            writeln!(out, "Trace to DEADLOCK:")?;
            write_labels(out, &report.trace)
        }
    }
}

fn write_labels(out: &mut impl Write, labels: &[ActionLabel]) -> io::Result<()> {
    labels.iter().try_for_each(|l| writeln!(out, "\t{l}"))
}
