//! Desk-scale reach task, tabular learner, noise injectors and scenario
//! runners that regenerate learning-phase and perturbation signatures.

mod agent;
mod env;
mod noise;
mod scenario;

pub use agent::{AgentParams, Policy, TabularAgent};
pub use env::{ReachEnv, ReachParams, StepOutcome};
pub use noise::{inject_noise, NoiseChannel, NoiseSpec};
pub use scenario::{evaluate, run_deployment, run_training, Evaluation, TrainParams, TrainingRun};
