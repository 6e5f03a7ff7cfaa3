use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use ctm_core::Process;
use ctm_lab::config::ConfigOverrides;
use ctm_lab::format::format_log10;
use ctm_lab::run::{parse_processes, run_experiment, RunOptions};
use ctm_lab::sweep::{parse_seeds, sweep_seeds};
use ctm_lab::validate::validate_martingale;

/// Simulations of conformal testing on binary data with one changepoint.
#[derive(Parser)]
#[command(name = "ctm-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one seeded experiment and write trajectories plus a manifest.
    Simulate {
        #[command(flatten)]
        config: ConfigArgs,
        /// Comma-separated processes, or `all`.
        #[arg(long, default_value = "all")]
        processes: String,
        #[arg(long, default_value = "run")]
        out_dir: PathBuf,
        /// Record wall-clock duration in the manifest (breaks byte-identity).
        #[arg(long)]
        record_timing: bool,
    },
    /// Final values over many seeds with median, mean and standard deviation.
    Sweep {
        #[command(flatten)]
        config: ConfigArgs,
        /// Seeds as `a..b`, `a..=b` or a comma-separated list.
        #[arg(long)]
        seeds: String,
        #[arg(long, default_value = "all")]
        processes: String,
        /// Directory for `sweep.csv` and `summary.json`.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Monte Carlo check that E[S_n] = 1 under IID Bernoulli data.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct ValidateArgs {
    /// simple_jumper, sleeper_chooser or optimal_ctm.
    #[arg(long)]
    engine: String,
    /// Probability of a 1 in the IID data.
    #[arg(long, default_value_t = 0.5)]
    pi: f64,
    /// Number of steps per replication.
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Flat JSON configuration supplying engine parameters.
    #[arg(long)]
    config: Option<PathBuf>,
    /// optimal_ctm: pre-change probability it is tuned to.
    #[arg(long)]
    pi0: Option<f64>,
    /// optimal_ctm: post-change probability it is tuned to.
    #[arg(long)]
    pi1: Option<f64>,
    /// optimal_ctm: steps without betting.
    #[arg(long)]
    n0: Option<usize>,
    #[arg(long)]
    jumper_rate: Option<f64>,
    #[arg(long)]
    share_rate: Option<f64>,
    #[arg(long)]
    grid_size: Option<usize>,
}

#[derive(Args)]
struct ConfigArgs {
    /// Flat JSON object with any of the configuration fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    pi0: Option<f64>,
    #[arg(long)]
    pi1: Option<f64>,
    /// Total number of observations.
    #[arg(long)]
    n: Option<usize>,
    /// Number of pre-change observations.
    #[arg(long)]
    n0: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    jumper_rate: Option<f64>,
    #[arg(long)]
    share_rate: Option<f64>,
    #[arg(long)]
    grid_size: Option<usize>,
}

impl ConfigArgs {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            pi0: self.pi0,
            pi1: self.pi1,
            n_total: self.n,
            n_pre: self.n0,
            jumper_rate: self.jumper_rate,
            share_rate: self.share_rate,
            grid_size: self.grid_size,
            seed: self.seed,
        }
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate {
            config,
            processes,
            out_dir,
            record_timing,
        } => {
            let cfg = config.overrides().resolve(config.config.as_deref())?;
            let processes = parse_processes(&processes)?;
            let manifest = run_experiment(&cfg, &processes, &out_dir, RunOptions { record_timing })
                .with_context(|| format!("writing run to {}", out_dir.display()))?;
            for (name, value) in &manifest.finals {
                println!("{name:>16}  log10 S_N = {}", format_log10(*value));
            }
        }
        Command::Sweep {
            config,
            seeds,
            processes,
            out_dir,
        } => {
            let cfg = config.overrides().resolve(config.config.as_deref())?;
            let processes = parse_processes(&processes)?;
            let table = sweep_seeds(&cfg, &parse_seeds(&seeds)?, &processes)?;
            print!("{}", table.to_csv());
            for (name, s) in table.summaries() {
                eprintln!(
                    "{name:>16}  median {}  mean {}  sd {}",
                    format_log10(s.median),
                    format_log10(s.mean),
                    format_log10(s.std_dev)
                );
            }
            if let Some(dir) = out_dir {
                table.write(&dir)?;
            }
        }
        Command::Validate(args) => {
            let file = match &args.config {
                Some(path) => ConfigOverrides::from_file(path)?,
                None => ConfigOverrides::default(),
            };
            let flags = ConfigOverrides {
                pi0: args.pi0,
                pi1: args.pi1,
                n_pre: args.n0,
                jumper_rate: args.jumper_rate,
                share_rate: args.share_rate,
                grid_size: args.grid_size,
                ..ConfigOverrides::default()
            };
            // only the betting parameters matter here; n_total comes from --n
            let cfg = file
                .overridden_by(&flags)
                .apply(ctm_core::ExperimentConfig::default());
            let engine: Process = args
                .engine
                .parse()
                .map_err(|_| anyhow::anyhow!("unknown engine `{}`", args.engine))?;
            let report = validate_martingale(engine, args.pi, args.n, args.reps, args.seed, &cfg)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if !report.pass {
                std::process::exit(1);
            }
        }
    }
    Ok(())
}
