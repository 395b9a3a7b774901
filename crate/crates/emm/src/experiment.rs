//! Experiment sweeps and file emission.
//!
//! A sweep varies one knob of a base configuration over a list of values,
//! replicates each point over a seed list, and writes three kinds of CSV:
//! per-run traces (`trace_<point>_<seed>.csv`), a `summary.csv` with one
//! row per (point, seed) plus aggregate rows, and a plot-ready
//! `plotdata_<figure>.csv` keyed to the figure the sweep reproduces.
//! Files are plain comma-separated text with a header row; rendering is
//! left to external tooling.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::bandit::StopRule;
use crate::config::{scripted_scenario, ConfigError};
use crate::engine::{
    self, replicate, run_simulation, verify_bounds, Aggregate, BoundReport, EngineError,
    Environment, EpochMode, PolicyKind, RunConfig, TraceRecord,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("sweep has no values")]
    EmptyValues,
    #[error("bad sweep value `{value}` for variable {variable}: {why}")]
    BadValue {
        variable: &'static str,
        value: String,
        why: String,
    },
}

/// Which knob a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// Control weight V; values are numbers.
    V,
    /// Energy capping fraction; values are numbers in (0, 1].
    Alpha,
    /// Learning horizon of the fixed-count stop rule; values are integers.
    Ks,
    /// Policy names on the shared physical realization.
    Policy,
    /// Policy names on the scripted-epoch utility scenario.
    EpochScenario,
}

impl SweepVariable {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "v" | "V" => Some(Self::V),
            "alpha" => Some(Self::Alpha),
            "ks" | "k_s" => Some(Self::Ks),
            "policy" => Some(Self::Policy),
            "epoch-scenario" => Some(Self::EpochScenario),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::V => "v",
            Self::Alpha => "alpha",
            Self::Ks => "ks",
            Self::Policy => "policy",
            Self::EpochScenario => "epoch-scenario",
        }
    }

    /// The figure this sweep's plot data reproduces.
    pub fn figure(&self) -> &'static str {
        match self {
            Self::Policy => "fig2",
            Self::V => "fig3",
            Self::Alpha => "fig4",
            Self::Ks => "fig5",
            Self::EpochScenario => "fig6",
        }
    }
}

/// One sweep: a base configuration, the variable, its values and seeds.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub base: RunConfig,
    pub variable: SweepVariable,
    /// Raw sweep values, parsed per the variable's type.
    pub values: Vec<String>,
    pub seeds: Vec<u64>,
    pub out_dir: PathBuf,
}

/// Derive the configuration of one sweep point from the base.
pub fn apply_sweep_value(
    base: &RunConfig,
    variable: SweepVariable,
    value: &str,
) -> Result<RunConfig, ExperimentError> {
    let mut config = base.clone();
    let bad = |why: &str| ExperimentError::BadValue {
        variable: variable.name(),
        value: value.to_string(),
        why: why.to_string(),
    };
    match variable {
        SweepVariable::V => {
            let v: f64 = value.parse().map_err(|_| bad("expected a number"))?;
            config.control.v_values = vec![v];
        }
        SweepVariable::Alpha => {
            config.workload.alpha = value.parse().map_err(|_| bad("expected a number"))?;
        }
        SweepVariable::Ks => {
            let k_s: usize = value.parse().map_err(|_| bad("expected an integer"))?;
            config.stop_rule = StopRule::FixedCount { k_s };
        }
        SweepVariable::Policy => {
            config.policy = PolicyKind::parse(value).ok_or_else(|| bad("unknown policy"))?;
        }
        SweepVariable::EpochScenario => {
            config.policy = PolicyKind::parse(value).ok_or_else(|| bad("unknown policy"))?;
            // The scripted scenario needs the utility arms and epochs in
            // place; install the defaults unless the base already has them.
            if !matches!(config.environment, Environment::Utilities(_)) {
                let (utilities, epochs) = scripted_scenario();
                config.environment = Environment::Utilities(utilities);
                config.epochs = EpochMode::Scripted(epochs);
                config.workload.subtask_min = 120;
                config.workload.subtask_max = 120;
            }
        }
    }
    Ok(config)
}

/// Run a sweep and emit its files. Returns the paths written.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<PathBuf>, ExperimentError> {
    if spec.values.is_empty() {
        return Err(ExperimentError::EmptyValues);
    }
    fs::create_dir_all(&spec.out_dir).map_err(|source| ExperimentError::Io {
        path: spec.out_dir.display().to_string(),
        source,
    })?;
    let mut written = Vec::new();
    let mut summary_csv = String::from(
        "sweep,seed,policy,avg_delay,total_energy,handover_total,deadline_violations,max_task_regret,suboptimal_rate\n",
    );
    let mut aggregates: Vec<(String, Aggregate)> = Vec::new();

    for value in &spec.values {
        let config = apply_sweep_value(&spec.base, spec.variable, value)?;
        let point = sanitize(value);
        // Per-seed traces.
        for seed in &spec.seeds {
            let run = run_simulation(&RunConfig {
                seed: *seed,
                ..config.clone()
            })?;
            let path = spec.out_dir.join(format!("trace_{point}_{seed}.csv"));
            write_trace(&path, &run.trace)?;
            written.push(path);
            let s = &run.summary;
            let _ = writeln!(
                summary_csv,
                "{},{},{},{},{},{},{},{},{}",
                value,
                seed,
                s.policy.name(),
                s.avg_delay,
                s.total_energy,
                s.handover_total,
                s.deadline_violations,
                s.max_task_regret.map_or(String::new(), |r| r.to_string()),
                s.suboptimal_rate.map_or(String::new(), |r| r.to_string()),
            );
        }
        let aggregate = replicate(&config, &spec.seeds)?;
        for (stat, d, e) in [
            ("mean", aggregate.avg_delay.mean, aggregate.total_energy.mean),
            ("std", aggregate.avg_delay.std, aggregate.total_energy.std),
            ("min", aggregate.avg_delay.min, aggregate.total_energy.min),
            ("max", aggregate.avg_delay.max, aggregate.total_energy.max),
        ] {
            let _ = writeln!(
                summary_csv,
                "{value},{stat},{},{d},{e},,,,",
                config.policy.name()
            );
        }
        aggregates.push((value.clone(), aggregate));
    }

    let summary_path = spec.out_dir.join("summary.csv");
    write_text(&summary_path, &summary_csv)?;
    written.push(summary_path);

    let plot_path = spec
        .out_dir
        .join(format!("plotdata_{}.csv", spec.variable.figure()));
    let plot = match spec.variable {
        SweepVariable::EpochScenario => plotdata_epoch_scenario(spec)?,
        SweepVariable::Ks => plotdata_ks(&aggregates),
        _ => plotdata_delay_energy(spec.variable, &aggregates),
    };
    write_text(&plot_path, &plot)?;
    written.push(plot_path);
    Ok(written)
}

fn sanitize(value: &str) -> String {
    value
        .chars()
        .map(|c| if c.is_alphanumeric() || c == '-' || c == '.' { c } else { '-' })
        .collect()
}

fn write_trace(path: &Path, trace: &[TraceRecord]) -> Result<(), ExperimentError> {
    let mut text = String::with_capacity(trace.len() * 96 + 128);
    text.push_str(TraceRecord::CSV_HEADER);
    text.push('\n');
    for record in trace {
        text.push_str(&record.to_csv_row());
        text.push('\n');
    }
    write_text(path, &text)
}

fn write_text(path: &Path, text: &str) -> Result<(), ExperimentError> {
    fs::write(path, text).map_err(|source| ExperimentError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// `x, delay mean/std, energy mean/std` per sweep point.
fn plotdata_delay_energy(variable: SweepVariable, aggregates: &[(String, Aggregate)]) -> String {
    let mut s = format!(
        "{},avg_delay_mean,avg_delay_std,total_energy_mean,total_energy_std\n",
        variable.name()
    );
    for (value, agg) in aggregates {
        let _ = writeln!(
            s,
            "{value},{},{},{},{}",
            agg.avg_delay.mean, agg.avg_delay.std, agg.total_energy.mean, agg.total_energy.std
        );
    }
    s
}

/// Learning-horizon sweep: suboptimal-commit probability and delay.
fn plotdata_ks(aggregates: &[(String, Aggregate)]) -> String {
    let mut s = String::from(
        "ks,suboptimal_rate_mean,suboptimal_rate_std,avg_delay_mean,avg_delay_std\n",
    );
    for (value, agg) in aggregates {
        let rates: Vec<f64> = agg
            .summaries
            .iter()
            .filter_map(|summary| summary.suboptimal_rate)
            .collect();
        let rate = engine::stats(&rates);
        let _ = writeln!(
            s,
            "{value},{},{},{},{}",
            rate.mean, rate.std, agg.avg_delay.mean, agg.avg_delay.std
        );
    }
    s
}

/// Scripted-epoch comparison: per subtask index, the running average of
/// the true utility and the cumulative handover count, averaged over all
/// tasks and seeds, one column pair per policy.
fn plotdata_epoch_scenario(spec: &ExperimentSpec) -> Result<String, ExperimentError> {
    let mut columns: Vec<(String, Vec<f64>, Vec<f64>)> = Vec::new();
    let mut subtasks = 0usize;
    for value in &spec.values {
        let config = apply_sweep_value(&spec.base, spec.variable, value)?;
        let mut utility_sum: Vec<f64> = Vec::new();
        let mut handover_sum: Vec<f64> = Vec::new();
        let mut runs = 0u64;
        for seed in &spec.seeds {
            let run = run_simulation(&RunConfig {
                seed: *seed,
                ..config.clone()
            })?;
            // Group the trace per task and accumulate running curves.
            let mut current_task = 0;
            let mut running = 0.0;
            let mut handovers = 0.0;
            for record in &run.trace {
                if record.task_id != current_task {
                    current_task = record.task_id;
                    running = 0.0;
                    handovers = 0.0;
                    runs += 1;
                }
                let k = record.subtask_index;
                running += record.true_comp_delay + record.true_tx_delay;
                handovers += record.handover as u64 as f64;
                if utility_sum.len() < k {
                    utility_sum.resize(k, 0.0);
                    handover_sum.resize(k, 0.0);
                }
                utility_sum[k - 1] += running / k as f64;
                handover_sum[k - 1] += handovers;
            }
        }
        let denom = runs.max(1) as f64;
        subtasks = subtasks.max(utility_sum.len());
        columns.push((
            value.clone(),
            utility_sum.iter().map(|u| u / denom).collect(),
            handover_sum.iter().map(|h| h / denom).collect(),
        ));
    }
    let mut s = String::from("subtask");
    for (name, _, _) in &columns {
        let _ = write!(s, ",{name}_utility_mean,{name}_handovers_mean");
    }
    s.push('\n');
    for k in 0..subtasks {
        let _ = write!(s, "{}", k + 1);
        for (_, utility, handovers) in &columns {
            let u = utility.get(k).copied().unwrap_or(f64::NAN);
            let h = handovers.get(k).copied().unwrap_or(f64::NAN);
            let _ = write!(s, ",{u},{h}");
        }
        s.push('\n');
    }
    Ok(s)
}

/// Run the configured policy and the lookahead oracle on the same
/// realization and render the guarantee check as a human-readable table.
pub fn bound_report(config: &RunConfig) -> Result<(BoundReport, String), ExperimentError> {
    let run = run_simulation(config)?;
    let oracle = run_simulation(&RunConfig {
        policy: PolicyKind::JstepOracle,
        ..config.clone()
    })?;
    let report = verify_bounds(config, &run.summary, &oracle.summary)?;
    Ok((report.clone(), render_report(config, &report)))
}

pub fn render_report(config: &RunConfig, report: &BoundReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "guarantee check: policy {} on seed {}",
        config.policy.name(),
        config.seed
    );
    if let Some(dev) = report.learning_dev {
        let _ = writeln!(
            s,
            "learning deviation W = {dev:.6} (empirical surrogate: max measured per-task regret)"
        );
    }
    if !report.excluded_frames.is_empty() {
        let _ = writeln!(
            s,
            "warning: {} infeasible oracle frame(s) excluded: {:?}",
            report.excluded_frames.len(),
            report.excluded_frames
        );
    }
    let _ = writeln!(
        s,
        "{:<22} {:>14} {:>14} {:>12} {:>8}",
        "inequality", "measured", "bound", "slack", "verdict"
    );
    for (name, measured, bound, pass) in [
        (
            "avg delay <= bound",
            report.delay_measured,
            report.delay_bound,
            report.delay_pass,
        ),
        (
            "total energy <= bound",
            report.energy_measured,
            report.energy_bound,
            report.energy_pass,
        ),
    ] {
        let _ = writeln!(
            s,
            "{:<22} {:>14.6} {:>14.6} {:>12.6} {:>8}",
            name,
            measured,
            bound,
            bound - measured,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    s
}
