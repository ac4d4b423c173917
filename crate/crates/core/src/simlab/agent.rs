use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolizer::SymbolizerConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AgentParams {
    pub alpha: f64,
    pub gamma: f64,
    pub epsilon_start: f64,
    pub epsilon_end: f64,
    /// Fraction of the training run over which epsilon decays linearly.
    pub decay_fraction: f64,
    /// Initial value of every table entry.
    pub initial_value: f64,
}

impl Default for AgentParams {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            gamma: 0.95,
            epsilon_start: 0.3,
            epsilon_end: 0.01,
            decay_fraction: 0.6,
            // -1 / (1 - gamma): the value of never arriving, so untried
            // actions look no better than known-bad ones.
            initial_value: -20.0,
        }
    }
}

impl AgentParams {
    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, x: f64| {
            if (0.0..=1.0).contains(&x) {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must lie in [0, 1], got {x}")))
            }
        };
        unit("alpha", self.alpha)?;
        unit("gamma", self.gamma)?;
        unit("epsilon_start", self.epsilon_start)?;
        unit("epsilon_end", self.epsilon_end)?;
        unit("decay_fraction", self.decay_fraction)?;
        if self.epsilon_end > self.epsilon_start {
            return Err(Error::Config("epsilon_end exceeds epsilon_start".into()));
        }
        if !self.initial_value.is_finite() {
            return Err(Error::Config("initial_value must be finite".into()));
        }
        Ok(())
    }

    /// Linearly decaying exploration rate; nonincreasing in `step`.
    pub fn epsilon(&self, step: u64, total: u64) -> f64 {
        let horizon = (self.decay_fraction * total as f64).max(1.0);
        let frac = step as f64 / horizon;
        if frac >= 1.0 {
            return self.epsilon_end;
        }
        (self.epsilon_start + (self.epsilon_end - self.epsilon_start) * frac).max(self.epsilon_end)
    }
}

/// Epsilon-greedy one-step Q-learner over symbol codes.
#[derive(Debug, Clone)]
pub struct TabularAgent {
    params: AgentParams,
    n_states: usize,
    n_actions: usize,
    rest_action: Option<u32>,
    values: Vec<f64>,
}

impl TabularAgent {
    pub fn new(n_states: u32, n_actions: u32, params: AgentParams) -> Result<Self> {
        params.validate()?;
        if n_states == 0 || n_actions == 0 {
            return Err(Error::Config("agent needs at least one state and one action".into()));
        }
        let (n_states, n_actions) = (n_states as usize, n_actions as usize);
        Ok(Self {
            values: vec![params.initial_value; n_states * n_actions],
            params,
            n_states,
            n_actions,
            rest_action: None,
        })
    }

    /// Action preferred among equally valued ones (typically the zero
    /// command), so untrained states hold position.
    pub fn with_rest_action(mut self, a: u32) -> Result<Self> {
        if a as usize >= self.n_actions {
            return Err(Error::CodeOutOfRange { kind: "action", code: a, limit: self.n_actions as u32 });
        }
        self.rest_action = Some(a);
        Ok(self)
    }

    pub fn params(&self) -> &AgentParams {
        &self.params
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    fn row(&self, s: u32) -> &[f64] {
        let lo = s as usize * self.n_actions;
        &self.values[lo..lo + self.n_actions]
    }

    pub fn value(&self, s: u32, a: u32) -> f64 {
        self.row(s)[a as usize]
    }

    /// Highest-valued action. Ties go to the rest action when it is among
    /// them, otherwise to the lowest code.
    pub fn greedy(&self, s: u32) -> u32 {
        let row = self.row(s);
        let mut best = 0;
        for (a, &v) in row.iter().enumerate().skip(1) {
            if v > row[best] {
                best = a;
            }
        }
        match self.rest_action {
            Some(r) if row[r as usize] == row[best] => r,
            _ => best as u32,
        }
    }

    fn max_value(&self, s: u32) -> f64 {
        self.row(s).iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn act<R: Rng + ?Sized>(&self, s: u32, epsilon: f64, rng: &mut R) -> u32 {
        if rng.random::<f64>() < epsilon {
            rng.random_range(0..self.n_actions as u32)
        } else {
            self.greedy(s)
        }
    }

    /// One-step backup toward `r + gamma * max_a' Q(s', a')` (no bootstrap
    /// on terminal transitions).
    pub fn update(&mut self, s: u32, a: u32, reward: f64, s_next: u32, terminal: bool) {
        let target = if terminal {
            reward
        } else {
            reward + self.params.gamma * self.max_value(s_next)
        };
        let idx = s as usize * self.n_actions + a as usize;
        self.values[idx] += self.params.alpha * (target - self.values[idx]);
    }

    pub fn freeze(&self, symbolizer: &SymbolizerConfig) -> Policy {
        Policy {
            symbolizer: symbolizer.clone(),
            actions: (0..self.n_states as u32).map(|s| self.greedy(s)).collect(),
        }
    }
}

/// Frozen greedy policy: one action code per state code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Policy {
    pub symbolizer: SymbolizerConfig,
    pub actions: Vec<u32>,
}

impl Policy {
    pub fn validate(&self) -> Result<()> {
        self.symbolizer.validate()?;
        if self.actions.len() != self.symbolizer.n_state_symbols() as usize {
            return Err(Error::Schema(format!(
                "policy lists {} actions for {} states",
                self.actions.len(),
                self.symbolizer.n_state_symbols()
            )));
        }
        let limit = self.symbolizer.n_action_symbols();
        if let Some(&a) = self.actions.iter().find(|&&a| a >= limit) {
            return Err(Error::CodeOutOfRange { kind: "action", code: a, limit });
        }
        Ok(())
    }

    pub fn action(&self, s: u32) -> u32 {
        self.actions[s as usize]
    }
}
