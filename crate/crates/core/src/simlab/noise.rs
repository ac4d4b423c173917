use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseChannel {
    Observation,
    Action,
}

/// Zero-mean Gaussian corruption of one channel from `onset` onward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub channel: NoiseChannel,
    pub variance: f64,
    pub onset: u64,
}

impl NoiseSpec {
    pub fn new(channel: NoiseChannel, variance: f64, onset: u64) -> Result<Self> {
        if !(variance >= 0.0) || !variance.is_finite() {
            return Err(Error::Config(format!("noise variance must be finite and >= 0, got {variance}")));
        }
        Ok(Self { channel, variance, onset })
    }

    pub fn none() -> Self {
        Self {
            channel: NoiseChannel::Observation,
            variance: 0.0,
            onset: 0,
        }
    }

    pub fn active_at(&self, step: u64) -> bool {
        self.variance > 0.0 && step >= self.onset
    }

    pub fn applies(&self, channel: NoiseChannel, step: u64) -> bool {
        self.channel == channel && self.active_at(step)
    }
}

/// `v + g` with independent `g_i ~ N(0, variance)`. Zero variance returns
/// `v` unchanged and draws nothing from `rng`.
pub fn inject_noise<R: Rng + ?Sized>(v: &[f64], variance: f64, rng: &mut R) -> Vec<f64> {
    if variance <= 0.0 {
        return v.to_vec();
    }
    let normal = Normal::new(0.0, variance.sqrt()).expect("finite positive std");
    v.iter().map(|x| x + normal.sample(rng)).collect()
}
