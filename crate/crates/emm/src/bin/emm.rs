//! Command-line front end: single runs, sweeps, guarantee checks and
//! configuration dumps. All logic lives in the library; this binary only
//! parses arguments and routes.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use emm::config::{default_config, dump_config, parse_config};
use emm::engine::{run_simulation, PolicyKind, RunConfig, TraceRecord};
use emm::experiment::{bound_report, run_experiment, ExperimentSpec, SweepVariable};

#[derive(Parser)]
#[command(name = "emm", version, about = "Energy-aware mobility management simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write its trace CSV.
    Run {
        /// Configuration file; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Override the configured policy.
        #[arg(long)]
        policy: Option<String>,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Sweep one variable over a list of values and emit trace, summary
    /// and plot-data CSVs.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Sweep variable: v, alpha, ks, policy or epoch-scenario.
        #[arg(long)]
        var: String,
        /// Comma-separated sweep values.
        #[arg(long)]
        values: String,
        /// Seeds as `a..b` (inclusive) or a comma-separated list.
        #[arg(long, default_value = "1..10")]
        seeds: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the configured policy and the lookahead oracle on the same
    /// realization and check the guaranteed delay/energy envelope.
    /// Exits nonzero if a guaranteed inequality fails.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        policy: Option<String>,
    },
    /// Print the effective configuration (defaults merged with the file).
    DumpConfig {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Run {
            config,
            seed,
            policy,
            out,
        } => {
            let config = load(config, seed, policy)?;
            let run = run_simulation(&config).map_err(|e| e.to_string())?;
            std::fs::create_dir_all(&out)
                .map_err(|e| format!("cannot create {}: {e}", out.display()))?;
            let path = out.join(format!("trace_{}.csv", config.seed));
            let mut text = String::from(TraceRecord::CSV_HEADER);
            text.push('\n');
            for record in &run.trace {
                text.push_str(&record.to_csv_row());
                text.push('\n');
            }
            std::fs::write(&path, text)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            let s = &run.summary;
            println!(
                "policy {} seed {}: avg delay {:.6} s, total energy {:.6} J, {} handovers, {} deadline violations",
                s.policy.name(),
                s.seed,
                s.avg_delay,
                s.total_energy,
                s.handover_total,
                s.deadline_violations
            );
            println!("trace written to {}", path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            config,
            var,
            values,
            seeds,
            out,
        } => {
            let variable = SweepVariable::parse(&var)
                .ok_or_else(|| format!("unknown sweep variable `{var}`"))?;
            let spec = ExperimentSpec {
                base: load(config, None, None)?,
                variable,
                values: values.split(',').map(|v| v.trim().to_string()).collect(),
                seeds: parse_seeds(&seeds)?,
                out_dir: out,
            };
            let written = run_experiment(&spec).map_err(|e| e.to_string())?;
            println!("{} files written:", written.len());
            for path in written {
                println!("  {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            config,
            seed,
            policy,
        } => {
            let config = load(config, seed, policy)?;
            let (report, text) = bound_report(&config).map_err(|e| e.to_string())?;
            print!("{text}");
            Ok(if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::DumpConfig { config } => {
            print!("{}", dump_config(&load(config, None, None)?));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load(
    path: Option<PathBuf>,
    seed: Option<u64>,
    policy: Option<String>,
) -> Result<RunConfig, String> {
    let mut config = match path {
        Some(path) => parse_config(&path).map_err(|e| e.to_string())?,
        None => default_config(),
    };
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(name) = policy {
        config.policy =
            PolicyKind::parse(&name).ok_or_else(|| format!("unknown policy `{name}`"))?;
    }
    Ok(config)
}

fn parse_seeds(text: &str) -> Result<Vec<u64>, String> {
    if let Some((a, b)) = text.split_once("..") {
        let from: u64 = a
            .trim()
            .parse()
            .map_err(|_| format!("bad seed range `{text}`"))?;
        let to: u64 = b
            .trim()
            .parse()
            .map_err(|_| format!("bad seed range `{text}`"))?;
        if from > to {
            return Err(format!("empty seed range `{text}`"));
        }
        Ok((from..=to).collect())
    } else {
        text.split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| format!("bad seed list `{text}`"))
            })
            .collect()
    }
}
