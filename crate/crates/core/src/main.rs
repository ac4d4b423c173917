use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use infosig::io::{self, Mode, RunConfig, StateStream};
use infosig::simlab::{run_deployment, run_training, NoiseChannel, NoiseSpec};
use infosig::{pipeline, Result};

#[derive(Parser)]
#[command(name = "infosig", version, about = "Information-theoretic monitoring of agent transition streams")]
struct Cli {
    /// Run configuration (TOML); built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// State stream to analyze; overrides the configuration.
    #[arg(long, global = true, value_enum)]
    stream: Option<StreamArg>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StreamArg {
    Observed,
    True,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Cumulative,
    Sliding,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    None,
    Obs,
    Act,
}

#[derive(Subcommand)]
enum Command {
    /// Train the tabular agent on the reach task and log every transition.
    SimulateTrain {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 200_000)]
        steps: u64,
        #[arg(long)]
        out: PathBuf,
        /// Where to write the frozen greedy policy.
        #[arg(long)]
        policy_out: Option<PathBuf>,
    },
    /// Roll out a frozen policy, optionally with channel noise.
    SimulateDeploy {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        policy: PathBuf,
        #[arg(long, default_value_t = 20_000)]
        steps: u64,
        #[arg(long, value_enum, default_value = "none")]
        fault: FaultArg,
        #[arg(long, default_value_t = 0.1)]
        sigma2: f64,
        #[arg(long, default_value_t = 10_000)]
        onset: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute the signature series of a log and write it as CSV.
    Analyze {
        #[arg(long)]
        log: PathBuf,
        #[arg(long, value_enum, default_value = "sliding")]
        mode: ModeArg,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        boundary: Option<u64>,
        #[arg(long)]
        stride: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Capture a baseline from a healthy segment of a log.
    Baseline {
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        from_step: Option<u64>,
        #[arg(long)]
        to_step: Option<u64>,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare a log against a baseline and classify any drift.
    Diagnose {
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        baseline: PathBuf,
        #[arg(long)]
        window: Option<usize>,
        /// Also write the report here (it is always printed).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.stream {
        cfg.stream = match s {
            StreamArg::Observed => StateStream::Observed,
            StreamArg::True => StateStream::True,
        };
    }
    Ok(cfg)
}

fn with_overrides(mut cfg: RunConfig, window: Option<usize>, boundary: Option<u64>, stride: Option<u64>) -> Result<RunConfig> {
    cfg.window = window.unwrap_or(cfg.window);
    cfg.boundary = boundary.unwrap_or(cfg.boundary);
    cfg.stride = stride.unwrap_or(cfg.stride);
    cfg.validate()?;
    Ok(cfg)
}

fn log_of(path: &Path, cfg: &RunConfig) -> Result<io::LogReader<std::io::BufReader<std::fs::File>>> {
    io::parse_log(path, cfg.symbolizer.dims())
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(&cli)?;
    match cli.command {
        Command::SimulateTrain { seed, steps, out, policy_out } => {
            let run = run_training(seed, steps, &cfg.train_params())?;
            io::write_log(&run.log, &out)?;
            if let Some(path) = policy_out {
                io::save_policy(&run.policy, path)?;
            }
        }
        Command::SimulateDeploy { seed, policy, steps, fault, sigma2, onset, out } => {
            let policy = io::load_policy(policy)?;
            if policy.symbolizer != cfg.symbolizer {
                eprintln!("note: the policy's symbolizer differs from the run configuration; the policy's grid is used for control");
            }
            let noise = match fault {
                FaultArg::None => NoiseSpec::none(),
                FaultArg::Obs => NoiseSpec::new(NoiseChannel::Observation, sigma2, onset)?,
                FaultArg::Act => NoiseSpec::new(NoiseChannel::Action, sigma2, onset)?,
            };
            let log = run_deployment(seed, &policy, steps, &noise, &cfg.env)?;
            io::write_log(&log, &out)?;
        }
        Command::Analyze { log, mode, window, boundary, stride, out } => {
            let cfg = with_overrides(cfg, window, boundary, stride)?;
            let mode = match mode {
                ModeArg::Cumulative => Mode::Cumulative,
                ModeArg::Sliding => Mode::Sliding,
            };
            let sigs = io::analyze(log_of(&log, &cfg)?, &cfg, mode)?;
            io::emit_csv(&sigs, out)?;
        }
        Command::Baseline { log, from_step, to_step, window, out } => {
            let cfg = with_overrides(cfg, window, None, None)?;
            let from = from_step.unwrap_or(cfg.baseline.from_step);
            let to = to_step.unwrap_or(cfg.baseline.to_step);
            let base = pipeline::baseline_from_log(log_of(&log, &cfg)?, &cfg, from, to)?;
            io::save_baseline(&base, out)?;
        }
        Command::Diagnose { log, baseline, window, out } => {
            let cfg = with_overrides(cfg, window, None, None)?;
            let base = io::load_baseline(baseline)?;
            let report = pipeline::diagnose_log(log_of(&log, &cfg)?, &cfg, &base)?;
            print!("{}", io::store::to_json(&report));
            if let Some(path) = out {
                io::save_report(&report, path)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
