//! End-to-end steps shared by the command-line tool and the tests.

use crate::error::Result;
use crate::io::{analyze, segment, Mode, RunConfig, TransitionRecord};
use crate::monitor::{capture_baseline, diagnose, Baseline, DiagnosisReport};

/// Baseline from the sliding-window signatures whose step lies in
/// `[from_step, to_step]`.
pub fn baseline_from_log<I>(records: I, cfg: &RunConfig, from_step: u64, to_step: u64) -> Result<Baseline>
where
    I: IntoIterator<Item = Result<TransitionRecord>>,
{
    let sigs = analyze(records, cfg, Mode::Sliding)?;
    capture_baseline(&segment(&sigs, from_step, to_step), cfg.window as u64)
}

/// Sliding analysis, then delta, classification and severity against `base`.
pub fn diagnose_log<I>(records: I, cfg: &RunConfig, base: &Baseline) -> Result<DiagnosisReport>
where
    I: IntoIterator<Item = Result<TransitionRecord>>,
{
    let sigs = analyze(records, cfg, Mode::Sliding)?;
    diagnose(&sigs, base, &cfg.thresholds)
}

/// Baseline from the configured segment of the same log, then diagnosis.
pub fn self_diagnose(records: &[TransitionRecord], cfg: &RunConfig) -> Result<DiagnosisReport> {
    let sigs = analyze(records.iter().cloned().map(Ok), cfg, Mode::Sliding)?;
    let seg = segment(&sigs, cfg.baseline.from_step, cfg.baseline.to_step);
    let base = capture_baseline(&seg, cfg.window as u64)?;
    diagnose(&sigs, &base, &cfg.thresholds)
}
