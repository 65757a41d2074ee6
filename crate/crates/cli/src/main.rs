use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use log::error;

use jits_core::experiment::{run_sweep, threads_from_env, write_outputs, ExperimentConfig, Family};

/// Runs sensor-network scheduling experiments and writes CSV results.
#[derive(Parser)]
#[command(name = "jits-sim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a TOML config file.
    Run {
        config: PathBuf,
        /// Output directory; overrides the config's `out` key.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a preset experiment family.
    Replicate {
        family: String,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Number of seeds, 1..=N.
        #[arg(long)]
        seeds: Option<u64>,
    },
    /// List the preset families.
    ListFamilies,
}

fn execute(cfg: &ExperimentConfig, out: PathBuf) -> Result<bool> {
    let threads = threads_from_env();
    let res = run_sweep(cfg, threads);
    let files = write_outputs(&out, cfg.name(), &res).with_context(|| format!("writing results to {}", out.display()))?;
    println!(
        "{} rows -> {} ({} plot files)",
        res.rows.len(),
        files.raw.display(),
        files.plots.len()
    );
    for f in &res.failures {
        error!("aborted: {} {} {} deadline {} seed {}: {}", f.label.scenario, f.label.policy, f.label.routing, f.label.deadline_s, f.label.seed, f.message);
    }
    if !res.is_complete() {
        eprintln!("{} run(s) aborted", res.failures.len());
    }
    Ok(res.is_complete())
}

fn real_main(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let out = out.unwrap_or_else(|| PathBuf::from(&cfg.out));
            execute(&cfg, out)
        }
        Command::Replicate { family, out, seeds } => {
            let family: Family = family.parse()?;
            let mut cfg = family.preset();
            if let Some(n) = seeds {
                cfg.seeds = (1..=n).collect();
            }
            cfg.out = out.display().to_string();
            execute(&cfg, out)
        }
        Command::ListFamilies => {
            for f in Family::ALL {
                println!("{:<14} {}", f.as_str(), f.describe());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match real_main(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
