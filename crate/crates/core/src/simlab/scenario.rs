use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::agent::{AgentParams, Policy, TabularAgent};
use super::env::{ReachEnv, ReachParams};
use super::noise::{inject_noise, NoiseChannel, NoiseSpec};
use crate::error::{Error, Result};
use crate::io::log::TransitionRecord;
use crate::symbolizer::SymbolizerConfig;

// Independent random streams derived from one seed, so that e.g. enabling
// noise never changes the target sequence.
const STREAM_ENV: u64 = 1;
const STREAM_AGENT: u64 = 2;
const STREAM_NOISE: u64 = 3;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainParams {
    pub env: ReachParams,
    pub symbolizer: SymbolizerConfig,
    pub agent: AgentParams,
}

impl TrainParams {
    pub fn validate(&self) -> Result<()> {
        self.symbolizer.validate()?;
        self.agent.validate()?;
        if self.symbolizer.dims() != self.env.dims {
            return Err(Error::Config(format!(
                "symbolizer has {} dims, environment has {}",
                self.symbolizer.dims(),
                self.env.dims
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct TrainingRun {
    pub log: Vec<TransitionRecord>,
    pub agent: TabularAgent,
    pub policy: Policy,
}

/// Epsilon-greedy tabular learning on the reach task; logs every transition.
pub fn run_training(seed: u64, steps: u64, params: &TrainParams) -> Result<TrainingRun> {
    if steps == 0 {
        return Err(Error::Config("training needs at least 1 step".into()));
    }
    params.validate()?;
    let sym = &params.symbolizer;
    let mut env_rng = rng(seed, STREAM_ENV);
    let mut agent_rng = rng(seed, STREAM_AGENT);
    let mut env = ReachEnv::new(params.env.clone());
    let rest = sym.action.encode(&vec![0.0; sym.dims()])?;
    let mut agent = TabularAgent::new(sym.n_state_symbols(), sym.n_action_symbols(), params.agent.clone())?
        .with_rest_action(rest)?;

    let mut log = Vec::with_capacity(steps as usize);
    let mut obs = env.reset(&mut env_rng);
    for t in 0..steps {
        let s = sym.state.encode(&obs)?;
        let a = agent.act(s, params.agent.epsilon(t, steps), &mut agent_rng);
        let action = sym.action.bin_center(a)?;
        let out = env.step(&action)?;
        let s_next = sym.state.encode(&out.observation)?;
        // timeouts are truncations, not terminal states
        agent.update(s, a, out.reward, s_next, out.success);
        log.push(TransitionRecord {
            t,
            s: obs,
            a: action,
            s_next: out.observation.clone(),
            r: Some(out.reward),
            done: out.done,
            s_true: None,
            s_next_true: None,
        });
        obs = if out.done { env.reset(&mut env_rng) } else { out.observation };
    }
    let policy = agent.freeze(sym);
    Ok(TrainingRun { log, agent, policy })
}

/// Greedy rollout of a frozen policy with optional channel noise.
///
/// Logged `a` is the commanded action; with action noise the environment
/// executes a corrupted copy. With observation noise the logged `s`/`s_next`
/// are the corrupted readings the policy acted on, and the ground truth is
/// carried in `s_true`/`s_next_true`.
pub fn run_deployment(
    seed: u64,
    policy: &Policy,
    steps: u64,
    noise: &NoiseSpec,
    env_params: &ReachParams,
) -> Result<Vec<TransitionRecord>> {
    policy.validate()?;
    let sym = &policy.symbolizer;
    if sym.dims() != env_params.dims {
        return Err(Error::Config("policy and environment dimensionality differ".into()));
    }
    let mut env_rng = rng(seed, STREAM_ENV);
    let mut noise_rng = rng(seed, STREAM_NOISE);
    let mut env = ReachEnv::new(env_params.clone());
    let carry_truth = noise.channel == NoiseChannel::Observation && noise.variance > 0.0;
    let sense = |v: &[f64], step: u64, rng: &mut ChaCha8Rng| {
        if noise.applies(NoiseChannel::Observation, step) {
            inject_noise(v, noise.variance, rng)
        } else {
            v.to_vec()
        }
    };

    let mut log = Vec::with_capacity(steps as usize);
    let mut truth = env.reset(&mut env_rng);
    let mut seen = sense(&truth, 0, &mut noise_rng);
    for t in 0..steps {
        let a = policy.action(sym.state.encode(&seen)?);
        let command = sym.action.bin_center(a)?;
        let executed = if noise.applies(NoiseChannel::Action, t) {
            inject_noise(&command, noise.variance, &mut noise_rng)
        } else {
            command.clone()
        };
        let out = env.step(&executed)?;
        let next_seen = sense(&out.observation, t, &mut noise_rng);
        log.push(TransitionRecord {
            t,
            s: seen.clone(),
            a: command,
            s_next: next_seen.clone(),
            r: Some(out.reward),
            done: out.done,
            s_true: carry_truth.then(|| truth.clone()),
            s_next_true: carry_truth.then(|| out.observation.clone()),
        });
        if out.done {
            truth = env.reset(&mut env_rng);
            seen = sense(&truth, t + 1, &mut noise_rng);
        } else {
            truth = out.observation;
            seen = next_seen;
        }
    }
    Ok(log)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub episodes: usize,
    pub successes: usize,
    pub mean_length: f64,
}

impl Evaluation {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.episodes.max(1) as f64
    }
}

/// Noise-free greedy episodes.
pub fn evaluate(seed: u64, policy: &Policy, episodes: usize, env_params: &ReachParams) -> Result<Evaluation> {
    policy.validate()?;
    let sym = &policy.symbolizer;
    let mut env_rng = rng(seed, STREAM_ENV);
    let mut env = ReachEnv::new(env_params.clone());
    let (mut successes, mut total_len) = (0, 0u64);
    for _ in 0..episodes {
        let mut obs = env.reset(&mut env_rng);
        loop {
            let action = sym.action.bin_center(policy.action(sym.state.encode(&obs)?))?;
            let out = env.step(&action)?;
            total_len += 1;
            if out.done {
                successes += usize::from(out.success);
                break;
            }
            obs = out.observation;
        }
    }
    Ok(Evaluation {
        episodes,
        successes,
        mean_length: total_len as f64 / episodes.max(1) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn short_policy() -> Policy {
        run_training(1, 5000, &TrainParams::default()).unwrap().policy
    }

    #[test]
    fn training_logs_one_record_per_step() {
        let run = run_training(3, 1, &TrainParams::default()).unwrap();
        assert_eq!(run.log.len(), 1);
        assert_eq!(run.log[0].t, 0);
        assert!(run_training(3, 0, &TrainParams::default()).is_err());
    }

    #[test]
    fn fixed_seed_reproduces_logs() {
        let a = run_training(9, 3000, &TrainParams::default()).unwrap();
        let b = run_training(9, 3000, &TrainParams::default()).unwrap();
        assert_eq!(a.log, b.log);
        assert_eq!(a.policy, b.policy);
        let c = run_training(10, 3000, &TrainParams::default()).unwrap();
        assert_ne!(a.log, c.log);
    }

    #[test]
    fn zero_variance_matches_noise_free_deployment() {
        let policy = short_policy();
        let env = ReachParams::default();
        let clean = run_deployment(4, &policy, 2000, &NoiseSpec::none(), &env).unwrap();
        for ch in [NoiseChannel::Observation, NoiseChannel::Action] {
            let zero = NoiseSpec::new(ch, 0.0, 0).unwrap();
            assert_eq!(run_deployment(4, &policy, 2000, &zero, &env).unwrap(), clean);
        }
    }

    #[test]
    fn observation_noise_carries_ground_truth_after_onset_only() {
        let policy = short_policy();
        let noise = NoiseSpec::new(NoiseChannel::Observation, 0.1, 500).unwrap();
        let log = run_deployment(5, &policy, 1000, &noise, &ReachParams::default()).unwrap();
        assert!(log.iter().all(|r| r.s_true.is_some() && r.s_next_true.is_some()));
        assert!(log[..499].iter().all(|r| r.s_next_true.as_ref() == Some(&r.s_next)));
        assert!(log[500..].iter().all(|r| r.s_next_true.as_ref() != Some(&r.s_next)));
    }

    #[test]
    fn logged_actions_are_commanded_bin_centers() {
        let policy = short_policy();
        let noise = NoiseSpec::new(NoiseChannel::Action, 1.0, 0).unwrap();
        let log = run_deployment(6, &policy, 500, &noise, &ReachParams::default()).unwrap();
        let grid = &policy.symbolizer.action;
        for r in &log {
            let code = grid.encode(&r.a).unwrap();
            assert_eq!(grid.bin_center(code).unwrap(), r.a);
            assert!(r.s_true.is_none());
        }
    }

    #[test]
    fn evaluation_counts_every_episode() {
        let eval = evaluate(2, &short_policy(), 20, &ReachParams::default()).unwrap();
        assert_eq!(eval.episodes, 20);
        assert!(eval.successes <= 20);
        assert!(eval.mean_length >= 1.0);
        assert!((0.0..=1.0).contains(&eval.success_rate()));
    }
}
