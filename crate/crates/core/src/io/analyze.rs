use serde::{Deserialize, Serialize};

use super::config::{EpisodeBoundary, RunConfig};
use super::log::TransitionRecord;
use crate::counts::{CountTable, SlidingCounts};
use crate::error::{Error, Result};
use crate::infometrics::{signature, InfoSignature};
use crate::symbolizer::SymbolTriple;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Everything seen so far, snapshotted every `boundary` transitions.
    Cumulative,
    /// The trailing `window` transitions, emitted every `stride` transitions
    /// once the window is full.
    Sliding,
}

pub fn symbolize(rec: &TransitionRecord, cfg: &RunConfig) -> Result<SymbolTriple> {
    let grid = &cfg.symbolizer;
    Ok(SymbolTriple::new(
        grid.state.encode(rec.state(cfg.stream))?,
        grid.action.encode(&rec.a)?,
        grid.state.encode(rec.next_state(cfg.stream))?,
    ))
}

/// Signature series of a transition stream.
///
/// `step_index` counts the transitions that entered the analysis (so with
/// terminal transitions excluded it can lag the log's `t`). Sliding mode
/// holds only the current window in memory.
pub fn analyze<I>(records: I, cfg: &RunConfig, mode: Mode) -> Result<Vec<InfoSignature>>
where
    I: IntoIterator<Item = Result<TransitionRecord>>,
{
    cfg.validate()?;
    let mut out = Vec::new();
    let mut consumed = 0u64;
    match mode {
        Mode::Cumulative => {
            let mut table = CountTable::new();
            for rec in records {
                let rec = rec?;
                if skip(&rec, cfg) {
                    continue;
                }
                table.record(symbolize(&rec, cfg)?);
                consumed += 1;
                if consumed % cfg.boundary == 0 {
                    out.push(signature(&table, consumed)?);
                }
            }
        }
        Mode::Sliding => {
            let mut window = SlidingCounts::new(cfg.window)?;
            for rec in records {
                let rec = rec?;
                if skip(&rec, cfg) {
                    continue;
                }
                window.push(symbolize(&rec, cfg)?);
                consumed += 1;
                if window.is_full() && consumed % cfg.stride == 0 {
                    out.push(signature(window.table(), consumed)?);
                }
            }
            if consumed < cfg.window as u64 {
                return Err(Error::InsufficientData {
                    what: "sliding analysis (transitions)",
                    needed: cfg.window,
                    got: consumed as usize,
                });
            }
        }
    }
    Ok(out)
}

fn skip(rec: &TransitionRecord, cfg: &RunConfig) -> bool {
    cfg.episode_boundary == EpisodeBoundary::ExcludeTerminal && rec.done
}

/// Convenience wrapper for in-memory logs.
pub fn analyze_records(records: &[TransitionRecord], cfg: &RunConfig, mode: Mode) -> Result<Vec<InfoSignature>> {
    analyze(records.iter().cloned().map(Ok), cfg, mode)
}

/// Signatures whose `step_index` lies in `[from, to]`.
pub fn segment(signatures: &[InfoSignature], from: u64, to: u64) -> Vec<InfoSignature> {
    signatures
        .iter()
        .filter(|s| (from..=to).contains(&s.step_index))
        .copied()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(t: u64, s: f64, a: f64, s_next: f64, done: bool) -> TransitionRecord {
        TransitionRecord {
            t,
            s: vec![s; 3],
            a: vec![a; 3],
            s_next: vec![s_next; 3],
            r: None,
            done,
            s_true: None,
            s_next_true: None,
        }
    }

    fn cfg(window: usize, boundary: u64, stride: u64) -> RunConfig {
        RunConfig {
            window,
            boundary,
            stride,
            ..RunConfig::default()
        }
    }

    #[test]
    fn cumulative_emits_at_each_boundary() {
        let log: Vec<_> = (0..10_000).map(|t| rec(t, 0.0, 0.0, 0.0, false)).collect();
        let sigs = analyze_records(&log, &cfg(2000, 5000, 100), Mode::Cumulative).unwrap();
        assert_eq!(sigs.iter().map(|s| s.step_index).collect::<Vec<_>>(), vec![5000, 10_000]);
        for s in &sigs {
            assert_eq!(s.metrics(), crate::infometrics::Metrics::default());
        }
    }

    #[test]
    fn sliding_emits_full_windows_at_stride() {
        let log: Vec<_> = (0..1000).map(|t| rec(t, (t % 7) as f64 / 10.0 - 0.3, 0.0, 0.1, false)).collect();
        let sigs = analyze_records(&log, &cfg(300, 5000, 100), Mode::Sliding).unwrap();
        assert_eq!(
            sigs.iter().map(|s| s.step_index).collect::<Vec<_>>(),
            vec![300, 400, 500, 600, 700, 800, 900, 1000]
        );
        assert!(sigs.iter().all(|s| s.n == 300));
    }

    #[test]
    fn sliding_signature_depends_only_on_the_tail() {
        let tail: Vec<_> = (0..300).map(|t| rec(t, ((t * 13) % 10) as f64 / 10.0 - 0.45, 0.5, 0.0, false)).collect();
        let mut long: Vec<_> = (0..500).map(|t| rec(t, 0.2, -1.0, 0.2, false)).collect();
        long.extend(tail.iter().enumerate().map(|(i, r)| TransitionRecord { t: 500 + i as u64, ..r.clone() }));
        let c = cfg(300, 5000, 1);
        let a = analyze_records(&tail, &c, Mode::Sliding).unwrap();
        let b = analyze_records(&long, &c, Mode::Sliding).unwrap();
        assert_eq!(a.last().unwrap().metrics(), b.last().unwrap().metrics());
    }

    #[test]
    fn short_log_is_insufficient_for_sliding_mode() {
        let log: Vec<_> = (0..10).map(|t| rec(t, 0.0, 0.0, 0.0, false)).collect();
        assert!(matches!(
            analyze_records(&log, &cfg(2000, 5000, 100), Mode::Sliding),
            Err(Error::InsufficientData { needed: 2000, got: 10, .. })
        ));
    }

    #[test]
    fn terminal_transitions_can_be_excluded() {
        let log: Vec<_> = (0..10).map(|t| rec(t, 0.0, 0.0, 0.0, t % 2 == 1)).collect();
        let mut c = cfg(5, 5, 1);
        assert_eq!(analyze_records(&log, &c, Mode::Cumulative).unwrap().len(), 2);
        c.episode_boundary = EpisodeBoundary::ExcludeTerminal;
        let sigs = analyze_records(&log, &c, Mode::Cumulative).unwrap();
        assert_eq!(sigs.len(), 1);
        assert_eq!(sigs[0].n, 5);
    }

    #[test]
    fn true_stream_uses_ground_truth_when_present() {
        let mut r = rec(0, 0.45, 0.0, 0.45, false);
        r.s_true = Some(vec![-0.45; 3]);
        r.s_next_true = Some(vec![0.0; 3]);
        let mut c = cfg(1, 1, 1);
        assert_eq!(symbolize(&r, &c).unwrap(), SymbolTriple::new(999, 171, 999));
        c.stream = super::super::log::StateStream::True;
        assert_eq!(symbolize(&r, &c).unwrap(), SymbolTriple::new(0, 171, 555));
    }

    #[test]
    fn parse_errors_propagate() {
        let items = vec![Ok(rec(0, 0.0, 0.0, 0.0, false)), Err(Error::MalformedInput("x".into()))];
        assert!(analyze(items, &cfg(1, 1, 1), Mode::Cumulative).is_err());
    }
}
