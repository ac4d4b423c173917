//! Fixed-grid discretization of continuous state and action vectors.
//!
//! Each dimension is cut into equal-width bins over `[lo, hi]`. Bins are
//! half-open except the last, which is closed so that `x == hi` lands in
//! bin `n - 1`. Values outside the range clamp to the nearest edge bin.
//!
//! Per-dimension bin indices are packed into a single code with a
//! mixed-radix layout, dimension 0 most significant:
//!
//! ```text
//! code = ((b0 * n1) + b1) * n2 + b2
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bin index of `x` on an `n_bins` grid over `[lo, hi]`.
pub fn bin_value(x: f64, lo: f64, hi: f64, n_bins: u32) -> Result<u32> {
    if !x.is_finite() {
        return Err(Error::MalformedInput(format!("non-finite value {x}")));
    }
    // `!(lo < hi)` also rejects NaN bounds.
    if !(lo < hi) || n_bins == 0 {
        return Err(Error::Config(format!(
            "invalid grid lo={lo} hi={hi} bins={n_bins}"
        )));
    }
    let scaled = ((x - lo) / (hi - lo) * f64::from(n_bins)).floor();
    Ok(scaled.clamp(0.0, f64::from(n_bins - 1)) as u32)
}

/// Equal-width grid over one vector-valued channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisGrid {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub bins: Vec<u32>,
}

impl AxisGrid {
    pub fn uniform(dims: usize, lo: f64, hi: f64, bins: u32) -> Self {
        Self {
            lo: vec![lo; dims],
            hi: vec![hi; dims],
            bins: vec![bins; dims],
        }
    }

    pub fn dims(&self) -> usize {
        self.bins.len()
    }

    /// Product of per-dimension bin counts.
    pub fn n_symbols(&self) -> u32 {
        self.bins.iter().product()
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        let d = self.bins.len();
        if d == 0 {
            return Err(Error::Config(format!("{name} grid has no dimensions")));
        }
        if self.lo.len() != d || self.hi.len() != d {
            return Err(Error::Config(format!(
                "{name} grid: lo/hi/bins lengths differ ({}, {}, {d})",
                self.lo.len(),
                self.hi.len()
            )));
        }
        for (i, ((&lo, &hi), &n)) in self.lo.iter().zip(&self.hi).zip(&self.bins).enumerate() {
            if !(lo < hi) {
                return Err(Error::Config(format!(
                    "{name} grid dim {i}: lo {lo} must be below hi {hi}"
                )));
            }
            if n == 0 {
                return Err(Error::Config(format!("{name} grid dim {i}: zero bins")));
            }
        }
        if self
            .bins
            .iter()
            .try_fold(1u32, |acc, &n| acc.checked_mul(n))
            .is_none()
        {
            return Err(Error::Config(format!("{name} grid: symbol count overflows u32")));
        }
        Ok(())
    }

    /// Packs per-dimension bin indices into one code.
    pub fn encode_bins(&self, bins: &[u32]) -> Result<u32> {
        if bins.len() != self.dims() {
            return Err(Error::Config(format!(
                "expected {} bin indices, got {}",
                self.dims(),
                bins.len()
            )));
        }
        let mut code = 0u32;
        for (&b, &n) in bins.iter().zip(&self.bins) {
            if b >= n {
                return Err(Error::CodeOutOfRange {
                    kind: "bin",
                    code: b,
                    limit: n,
                });
            }
            code = code * n + b;
        }
        Ok(code)
    }

    pub fn encode(&self, v: &[f64]) -> Result<u32> {
        if v.len() != self.dims() {
            return Err(Error::Config(format!(
                "vector has {} components, grid has {} dimensions",
                v.len(),
                self.dims()
            )));
        }
        let mut code = 0u32;
        for (i, &x) in v.iter().enumerate() {
            let b = bin_value(x, self.lo[i], self.hi[i], self.bins[i])?;
            code = code * self.bins[i] + b;
        }
        Ok(code)
    }

    pub fn decode(&self, code: u32) -> Result<Vec<u32>> {
        let limit = self.n_symbols();
        if code >= limit {
            return Err(Error::CodeOutOfRange {
                kind: "symbol",
                code,
                limit,
            });
        }
        let mut out = vec![0; self.dims()];
        let mut rest = code;
        for (slot, &n) in out.iter_mut().zip(&self.bins).rev() {
            *slot = rest % n;
            rest /= n;
        }
        Ok(out)
    }

    /// Continuous value at the center of each bin of `code`.
    pub fn bin_center(&self, code: u32) -> Result<Vec<f64>> {
        let bins = self.decode(code)?;
        Ok(bins
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let width = (self.hi[i] - self.lo[i]) / f64::from(self.bins[i]);
                self.lo[i] + (f64::from(b) + 0.5) * width
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SymbolizerConfig {
    pub state: AxisGrid,
    pub action: AxisGrid,
}

impl Default for SymbolizerConfig {
    /// Distance-to-target states over ±0.5 m with 10 bins per axis; actions
    /// over ±1.0 with 7 levels per axis.
    fn default() -> Self {
        Self {
            state: AxisGrid::uniform(3, -0.5, 0.5, 10),
            action: AxisGrid::uniform(3, -1.0, 1.0, 7),
        }
    }
}

impl SymbolizerConfig {
    pub fn validate(&self) -> Result<()> {
        self.state.validate("state")?;
        self.action.validate("action")?;
        if self.state.dims() != self.action.dims() {
            return Err(Error::Config(format!(
                "state dims {} differ from action dims {}",
                self.state.dims(),
                self.action.dims()
            )));
        }
        Ok(())
    }

    pub fn dims(&self) -> usize {
        self.state.dims()
    }

    pub fn n_state_symbols(&self) -> u32 {
        self.state.n_symbols()
    }

    pub fn n_action_symbols(&self) -> u32 {
        self.action.n_symbols()
    }

    pub fn limits(&self) -> SymbolLimits {
        SymbolLimits {
            states: self.n_state_symbols(),
            actions: self.n_action_symbols(),
        }
    }
}

pub fn symbolize_state(v: &[f64], cfg: &SymbolizerConfig) -> Result<u32> {
    cfg.state.encode(v)
}

pub fn symbolize_action(v: &[f64], cfg: &SymbolizerConfig) -> Result<u32> {
    cfg.action.encode(v)
}

pub fn decode_state(code: u32, cfg: &SymbolizerConfig) -> Result<Vec<u32>> {
    cfg.state.decode(code)
}

pub fn decode_action(code: u32, cfg: &SymbolizerConfig) -> Result<Vec<u32>> {
    cfg.action.decode(code)
}

/// Upper bounds (exclusive) on state and action codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolLimits {
    pub states: u32,
    pub actions: u32,
}

impl SymbolLimits {
    pub const UNBOUNDED: SymbolLimits = SymbolLimits {
        states: u32::MAX,
        actions: u32::MAX,
    };
}

/// One discretized transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolTriple {
    pub s: u32,
    pub a: u32,
    pub s_next: u32,
}

impl SymbolTriple {
    pub fn new(s: u32, a: u32, s_next: u32) -> Self {
        Self { s, a, s_next }
    }

    pub fn check(&self, limits: SymbolLimits) -> Result<()> {
        let check = |kind, code, limit| {
            if code < limit {
                Ok(())
            } else {
                Err(Error::CodeOutOfRange { kind, code, limit })
            }
        };
        check("state", self.s, limits.states)?;
        check("action", self.a, limits.actions)?;
        check("next-state", self.s_next, limits.states)
    }
}
