//! Baselines, per-window deltas, drift detection and fault classification.
//!
//! A [`Baseline`] summarizes a healthy stretch of sliding-window signatures.
//! Later windows are compared against it; the pattern of metric deltas is
//! mapped to a [`Verdict`] and the depth of the smoothed MI(S;S') trough is
//! reported as severity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infometrics::{InfoSignature, Metric, Metrics};

pub const BASELINE_SCHEMA_VERSION: u32 = 1;

/// Inclusive range of stream positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRange {
    pub start: u64,
    pub end: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    pub schema_version: u32,
    /// Sliding-window length the signatures were computed with.
    pub window: u64,
    pub source: StepRange,
    pub windows: usize,
    pub mean: Metrics,
    /// Population standard deviation.
    pub std: Metrics,
}

/// Mean and population std of each metric over `signatures`, all of which
/// must be full windows of length `window`.
pub fn capture_baseline(signatures: &[InfoSignature], window: u64) -> Result<Baseline> {
    if signatures.len() < 2 {
        return Err(Error::InsufficientBaseline(signatures.len()));
    }
    if let Some(sig) = signatures.iter().find(|s| s.n != window) {
        return Err(Error::Config(format!(
            "baseline signature at step {} covers {} transitions, expected window {window}",
            sig.step_index, sig.n
        )));
    }
    let k = signatures.len() as f64;
    let mean = Metrics::from_fn(|m| signatures.iter().map(|s| s.get(m)).sum::<f64>() / k);
    let std = Metrics::from_fn(|m| {
        let mu = mean.get(m);
        let var = signatures.iter().map(|s| (s.get(m) - mu).powi(2)).sum::<f64>() / k;
        var.sqrt()
    });
    let start = signatures.iter().map(|s| s.step_index).min().unwrap_or(0);
    let end = signatures.iter().map(|s| s.step_index).max().unwrap_or(0);
    Ok(Baseline {
        schema_version: BASELINE_SCHEMA_VERSION,
        window,
        source: StepRange { start, end },
        windows: signatures.len(),
        mean,
        std,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignatureDelta {
    pub step_index: u64,
    /// Current minus baseline mean, in bits.
    pub delta: Metrics,
    /// `delta / std`, absent where the baseline std is zero.
    pub z: Metrics<Option<f64>>,
}

impl SignatureDelta {
    /// A delta with no z-scores, e.g. from externally reported values.
    pub fn from_delta(step_index: u64, delta: Metrics) -> Self {
        Self {
            step_index,
            delta,
            z: Metrics::from_fn(|_| None),
        }
    }
}

pub fn delta(sig: &InfoSignature, base: &Baseline) -> Result<SignatureDelta> {
    if sig.n != base.window {
        return Err(Error::Config(format!(
            "signature at step {} covers {} transitions but the baseline was built with window {}",
            sig.step_index, sig.n, base.window
        )));
    }
    let delta = Metrics::from_fn(|m| sig.get(m) - base.mean.get(m));
    let z = delta.map(|m, d| {
        let sd = base.std.get(m);
        (sd > 0.0).then(|| d / sd)
    });
    Ok(SignatureDelta {
        step_index: sig.step_index,
        delta,
        z,
    })
}

/// Decision thresholds, all in bits and all positive magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// Any MI term falling by more than this counts as drift.
    pub drift: f64,
    /// Minimum MI(S;S') fall for a sensor verdict.
    pub sensor: f64,
    /// Minimum H(A) fall for a sensor verdict.
    pub action_entropy: f64,
    /// Minimum MI(A;S') fall for a sensor verdict.
    pub deep: f64,
    /// Largest |change| of MI(S;A) still considered stable (actuator rule).
    pub stable: f64,
    /// When set, the sensor rule also requires MI(S;A) to fall by this much.
    pub sensor_mi_sa: Option<f64>,
    /// When set, a drop only counts as drift if its z-score is below
    /// `-z_gate` (metrics with zero baseline spread are not gated).
    pub z_gate: Option<f64>,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            drift: 0.10,
            sensor: 1.0,
            action_entropy: 0.10,
            deep: 0.40,
            stable: 0.05,
            sensor_mi_sa: None,
            z_gate: None,
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("drift", Some(self.drift)),
            ("sensor", Some(self.sensor)),
            ("action_entropy", Some(self.action_entropy)),
            ("deep", Some(self.deep)),
            ("stable", Some(self.stable)),
            ("sensor_mi_sa", self.sensor_mi_sa),
            ("z_gate", self.z_gate),
        ];
        for (name, value) in fields {
            if let Some(v) = value {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::Config(format!("threshold {name} must be finite and >= 0, got {v}")));
                }
            }
        }
        Ok(())
    }

    /// MI metrics whose drop exceeds the drift threshold (and the z gate, if
    /// configured).
    pub fn triggered(&self, d: &SignatureDelta) -> Vec<Metric> {
        Metric::MUTUAL_INFORMATION
            .into_iter()
            .filter(|&m| {
                let gated = match (self.z_gate, d.z.get(m)) {
                    (Some(gate), Some(z)) => z < -gate,
                    _ => true,
                };
                d.delta.get(m) < -self.drift && gated
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Nominal,
    ActuatorFault,
    SensorFault,
    Indeterminate,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Nominal => "nominal",
            Verdict::ActuatorFault => "actuator_fault",
            Verdict::SensorFault => "sensor_fault",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Sensor faults show a broad collapse: MI(S;S') and MI(A;S') fall sharply
/// and the action distribution narrows. Actuator faults leave the
/// state-to-action mapping intact while the action loses its grip on the
/// outcome.
pub fn classify(d: &SignatureDelta, th: &Thresholds) -> Verdict {
    if th.triggered(d).is_empty() {
        return Verdict::Nominal;
    }
    let x = &d.delta;
    let sensor = x.mi_ssnext < -th.sensor
        && x.h_a < -th.action_entropy
        && x.mi_asnext < -th.deep
        && th.sensor_mi_sa.is_none_or(|t| x.mi_sa < -t);
    if sensor {
        return Verdict::SensorFault;
    }
    if x.mi_sa.abs() < th.stable && x.mi_asnext < -th.drift {
        return Verdict::ActuatorFault;
    }
    Verdict::Indeterminate
}

/// Centered rolling mean with window `k`; near the ends the window is
/// truncated to the available elements.
///
/// # Panics
/// If `k` is even or zero.
pub fn smooth(series: &[f64], k: usize) -> Vec<f64> {
    assert!(k >= 1 && k % 2 == 1, "smoothing window must be odd and >= 1, got {k}");
    let half = k / 2;
    (0..series.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(series.len());
            series[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

pub const SEVERITY_SMOOTHING: usize = 3;

/// Depth (bits, >= 0) of the lowest point of the smoothed MI(S;S') delta.
pub fn severity(series: &[SignatureDelta]) -> Result<f64> {
    if series.len() < SEVERITY_SMOOTHING {
        return Err(Error::InsufficientData {
            what: "severity",
            needed: SEVERITY_SMOOTHING,
            got: series.len(),
        });
    }
    let raw: Vec<f64> = series.iter().map(|d| d.delta.mi_ssnext).collect();
    let nadir = smooth(&raw, SEVERITY_SMOOTHING).into_iter().fold(0.0, f64::min);
    Ok(if nadir < 0.0 { -nadir } else { 0.0 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosisReport {
    pub verdict: Verdict,
    pub drift: bool,
    pub severity_bits: f64,
    /// Mean delta over the windows the verdict was based on.
    pub deltas: Metrics,
    pub triggered: Vec<Metric>,
    /// Step range of the windows the verdict was based on.
    pub window_steps: StepRange,
    pub windows_classified: usize,
    /// All windows after the baseline segment (used for severity).
    pub monitored_steps: StepRange,
    pub baseline_source: StepRange,
    pub thresholds: Thresholds,
}

/// Compares every signature after the baseline segment with the baseline.
///
/// The verdict is taken from the mean delta over windows that contain no
/// baseline-period transitions (step >= baseline end + window); if there
/// are none, all post-baseline windows are used. Severity is the smoothed
/// MI(S;S') nadir over all post-baseline windows.
pub fn diagnose(signatures: &[InfoSignature], base: &Baseline, th: &Thresholds) -> Result<DiagnosisReport> {
    th.validate()?;
    let after: Vec<&InfoSignature> = signatures
        .iter()
        .filter(|s| s.step_index > base.source.end)
        .collect();
    if after.len() < SEVERITY_SMOOTHING {
        return Err(Error::InsufficientData {
            what: "diagnosis (windows after the baseline segment)",
            needed: SEVERITY_SMOOTHING,
            got: after.len(),
        });
    }
    let deltas = after
        .iter()
        .map(|s| delta(s, base))
        .collect::<Result<Vec<_>>>()?;
    let clean_from = base.source.end + base.window;
    let clean: Vec<&SignatureDelta> = deltas.iter().filter(|d| d.step_index >= clean_from).collect();
    let used: Vec<&SignatureDelta> = if clean.is_empty() { deltas.iter().collect() } else { clean };

    let k = used.len() as f64;
    let mean = Metrics::from_fn(|m| used.iter().map(|d| d.delta.get(m)).sum::<f64>() / k);
    let summary = SignatureDelta {
        step_index: used.last().map_or(0, |d| d.step_index),
        delta: mean,
        z: mean.map(|m, d| {
            let sd = base.std.get(m);
            (sd > 0.0).then(|| d / sd)
        }),
    };
    let verdict = classify(&summary, th);
    let triggered = th.triggered(&summary);
    let severity_bits = match verdict {
        Verdict::Nominal => 0.0,
        _ => severity(&deltas)?,
    };
    let span = |v: &[&SignatureDelta]| StepRange {
        start: v.first().map_or(0, |d| d.step_index),
        end: v.last().map_or(0, |d| d.step_index),
    };
    Ok(DiagnosisReport {
        verdict,
        drift: !triggered.is_empty(),
        severity_bits,
        deltas: mean,
        triggered,
        window_steps: span(&used),
        windows_classified: used.len(),
        monitored_steps: span(&deltas.iter().collect::<Vec<_>>()),
        baseline_source: base.source,
        thresholds: *th,
    })
}
