//! Run configuration, read from TOML. Every field has a default, so an
//! empty file (or no file) is a valid configuration.
//!
//! ```toml
//! window = 2000
//! boundary = 5000
//! stride = 100
//! stream = "observed"             # or "true"
//! episode_boundary = "include"    # or "exclude_terminal"
//!
//! [baseline]
//! from_step = 8000
//! to_step = 10000
//!
//! [thresholds]
//! drift = 0.10
//!
//! [symbolizer.state]
//! lo = [-0.5, -0.5, -0.5]
//! hi = [0.5, 0.5, 0.5]
//! bins = [10, 10, 10]
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::log::StateStream;
use crate::error::{Error, Result};
use crate::monitor::Thresholds;
use crate::simlab::{AgentParams, ReachParams, TrainParams};
use crate::symbolizer::SymbolizerConfig;

/// How transitions that end an episode are treated by the analyzer. No
/// transition from a terminal state into the next episode's start is ever
/// synthesized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpisodeBoundary {
    /// Terminal transitions are counted like any other.
    #[default]
    Include,
    /// Terminal transitions are skipped.
    ExcludeTerminal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaselineSegment {
    pub from_step: u64,
    pub to_step: u64,
}

impl Default for BaselineSegment {
    fn default() -> Self {
        Self {
            from_step: 8000,
            to_step: 10000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub symbolizer: SymbolizerConfig,
    /// Sliding window length W.
    pub window: usize,
    /// Cumulative snapshot interval B.
    pub boundary: u64,
    /// Emit a sliding-window signature every `stride` transitions.
    pub stride: u64,
    pub stream: StateStream,
    pub episode_boundary: EpisodeBoundary,
    pub baseline: BaselineSegment,
    pub thresholds: Thresholds,
    pub env: ReachParams,
    pub agent: AgentParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            symbolizer: SymbolizerConfig::default(),
            window: 2000,
            boundary: 5000,
            stride: 100,
            stream: StateStream::Observed,
            episode_boundary: EpisodeBoundary::Include,
            baseline: BaselineSegment::default(),
            thresholds: Thresholds::default(),
            env: ReachParams::default(),
            agent: AgentParams::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.symbolizer.validate()?;
        if self.window == 0 {
            return Err(Error::Config("window must be >= 1".into()));
        }
        if self.boundary == 0 {
            return Err(Error::Config("boundary must be >= 1".into()));
        }
        if self.stride == 0 {
            return Err(Error::Config("stride must be >= 1".into()));
        }
        if self.baseline.from_step > self.baseline.to_step {
            return Err(Error::Config(format!(
                "baseline segment is empty: from_step {} > to_step {}",
                self.baseline.from_step, self.baseline.to_step
            )));
        }
        self.thresholds.validate()?;
        self.train_params().validate()
    }

    pub fn train_params(&self) -> TrainParams {
        TrainParams {
            env: self.env.clone(),
            symbolizer: self.symbolizer.clone(),
            agent: self.agent.clone(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }
}
