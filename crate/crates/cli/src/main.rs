use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use curie_core::experiment::{self, ExperimentConfig, Metric, RunSettings, PAPER_SUITE};
use curie_core::Error;

#[derive(Parser)]
#[command(name = "curie", version, about = "Cellular-automaton drift detection experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct ConfigArgs {
    /// Experiment config (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in stream preset.
    #[arg(long, value_parser = [PAPER_SUITE])]
    preset: Option<String>,
    /// Comma-separated stream seeds, overriding the config.
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the configured streams as CSV files plus a manifest.
    Generate {
        #[command(flatten)]
        args: ConfigArgs,
    },
    /// Run every learner x detector x stream x seed and score it.
    Run {
        #[command(flatten)]
        args: ConfigArgs,
        /// Worker threads (default: all cores).
        #[arg(long)]
        parallel: Option<usize>,
        /// Dump CURIE state every K steps and at each detection.
        #[arg(long, value_name = "K")]
        snapshot_every: Option<u64>,
    },
    /// Render a CURIE snapshot file.
    Inspect { snapshot: PathBuf },
    /// Recompute Friedman/Nemenyi tables from a results CSV.
    Rank {
        results: PathBuf,
        /// Metrics to rank (default: pacc, mcc, mu_d, ram_hours).
        #[arg(long, value_delimiter = ',')]
        metrics: Option<Vec<String>>,
        /// Also write nemenyi.txt and nemenyi.csv here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Config(Error),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) | Error::Parse { .. } => Failure::Config(e),
            other => Failure::Run(other.to_string()),
        }
    }
}

fn load_config(args: &ConfigArgs) -> Result<ExperimentConfig, Failure> {
    let mut config = match (&args.config, &args.preset) {
        (Some(path), _) => ExperimentConfig::load(path).map_err(Failure::Config)?,
        (None, Some(_)) => ExperimentConfig::paper_suite(vec![]),
        (None, None) => return Err(Failure::Config(Error::InvalidConfig("pass --config or --preset".into()))),
    };
    if let Some(p) = &args.preset {
        config.preset = Some(p.clone());
    }
    if let Some(seeds) = &args.seeds {
        config.seeds = seeds.clone();
    }
    config.validate().map_err(Failure::Config)?;
    Ok(config)
}

fn parse_metrics(names: &[String]) -> Result<Vec<Metric>, Failure> {
    names
        .iter()
        .map(|n| {
            Metric::ALL
                .into_iter()
                .find(|m| m.key() == n.trim())
                .ok_or_else(|| Failure::Config(Error::InvalidConfig(format!("unknown metric {n:?}"))))
        })
        .collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate { args } => {
            let config = load_config(&args)?;
            let out = experiment::output_dir(&config, args.out.clone());
            let entries = experiment::cmd_generate(&config, &out)?;
            println!("wrote {} streams to {}", entries.len(), out.display());
        }
        Command::Run { args, parallel, snapshot_every } => {
            let config = load_config(&args)?;
            config.validate_for_run().map_err(Failure::Config)?;
            let out = experiment::output_dir(&config, args.out.clone());
            let report = experiment::cmd_run(&config, &out, RunSettings { parallel, snapshot_every })?;
            for t in &report.tables {
                print!("{}", t.to_text());
            }
            println!("{} runs written to {}", report.rows.len(), out.display());
            if !report.failures.is_empty() {
                return Err(Failure::Run(format!(
                    "{} runs failed, see {}",
                    report.failures.len(),
                    out.join(experiment::FAILURES_JSON).display()
                )));
            }
        }
        Command::Inspect { snapshot } => {
            let text = experiment::cmd_inspect(&snapshot).map_err(|e| match e {
                Error::Parse { .. } => Failure::Run(e.to_string()),
                other => Failure::from(other),
            })?;
            print!("{text}");
        }
        Command::Rank { results, metrics, out } => {
            let metrics = match metrics {
                Some(names) => parse_metrics(&names)?,
                None => vec![Metric::Pacc, Metric::Mcc, Metric::MuD, Metric::RamHours],
            };
            let tables = experiment::cmd_rank(&results, &metrics)?;
            if tables.is_empty() {
                println!("ranking needs at least two detectors and two streams");
            }
            for t in &tables {
                print!("{}", t.to_text());
            }
            if let Some(out) = out {
                std::fs::create_dir_all(&out).map_err(|e| Failure::Run(format!("{}: {e}", out.display())))?;
                experiment::write_rank_tables(&tables, &out)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
