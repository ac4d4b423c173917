use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReachParams {
    pub dims: usize,
    /// Workspace is `[-half_extent, half_extent]` on every axis (meters).
    pub half_extent: f64,
    /// Targets are drawn uniformly from `[-target_range, target_range]` per
    /// axis around the home position (the origin).
    pub target_range: f64,
    pub success_radius: f64,
    pub max_steps: u32,
    /// Meters of displacement per unit of action.
    pub step_scale: f64,
}

impl Default for ReachParams {
    fn default() -> Self {
        Self {
            dims: 3,
            half_extent: 0.5,
            target_range: 0.15,
            success_radius: 0.1,
            max_steps: 500,
            step_scale: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub observation: Vec<f64>,
    pub reward: f64,
    pub done: bool,
    pub success: bool,
}

/// Point end-effector moved by Cartesian displacement commands. The
/// observation is the target-minus-position vector.
#[derive(Debug, Clone)]
pub struct ReachEnv {
    params: ReachParams,
    position: Vec<f64>,
    target: Vec<f64>,
    steps: u32,
}

impl ReachEnv {
    pub fn new(params: ReachParams) -> Self {
        let d = params.dims;
        Self {
            params,
            position: vec![0.0; d],
            target: vec![0.0; d],
            steps: 0,
        }
    }

    /// Places the effector and target explicitly (positions are clamped).
    pub fn with_positions(params: ReachParams, position: Vec<f64>, target: Vec<f64>) -> Result<Self> {
        if position.len() != params.dims || target.len() != params.dims {
            return Err(Error::Config("position/target dimensionality mismatch".into()));
        }
        let mut env = Self::new(params);
        env.position = position;
        env.target = target;
        env.clamp_position();
        Ok(env)
    }

    /// Starts a new episode from home with a freshly drawn target.
    pub fn reset<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Vec<f64> {
        let range = self.params.target_range;
        self.position.iter_mut().for_each(|p| *p = 0.0);
        for t in self.target.iter_mut() {
            *t = if range > 0.0 { rng.random_range(-range..=range) } else { 0.0 };
        }
        self.steps = 0;
        self.observation()
    }

    pub fn observation(&self) -> Vec<f64> {
        self.target
            .iter()
            .zip(&self.position)
            .map(|(t, p)| t - p)
            .collect()
    }

    pub fn distance(&self) -> f64 {
        self.observation().iter().map(|d| d * d).sum::<f64>().sqrt()
    }

    pub fn position(&self) -> &[f64] {
        &self.position
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn params(&self) -> &ReachParams {
        &self.params
    }

    fn clamp_position(&mut self) {
        let h = self.params.half_extent;
        self.position.iter_mut().for_each(|p| *p = p.clamp(-h, h));
    }

    pub fn step(&mut self, action: &[f64]) -> Result<StepOutcome> {
        if action.len() != self.params.dims {
            return Err(Error::Config(format!(
                "action has {} components, environment has {}",
                action.len(),
                self.params.dims
            )));
        }
        if let Some(x) = action.iter().find(|x| !x.is_finite()) {
            return Err(Error::MalformedInput(format!("non-finite action component {x}")));
        }
        for (p, a) in self.position.iter_mut().zip(action) {
            *p += self.params.step_scale * a;
        }
        self.clamp_position();
        self.steps += 1;
        let success = self.distance() < self.params.success_radius;
        Ok(StepOutcome {
            observation: self.observation(),
            reward: -1.0,
            done: success || self.steps >= self.params.max_steps,
            success,
        })
    }
}
