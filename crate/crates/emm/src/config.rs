//! Run configuration: a flat `key = value` text format with `#` comments.
//!
//! Missing keys fall back to the default urban scenario (1 km&sup2; area, 49
//! BSs on a grid, 150 m association radius, 20 MHz channel, 500 video-style
//! tasks of 60-120 one-second subtasks). Unknown keys are rejected rather
//! than ignored so typos surface immediately. `dump` emits the effective
//! configuration in the same format; parsing a dump reproduces the exact
//! configuration.
//!
//! Epoch scripts use the syntax `start:bs,bs;start:bs,bs;...` where `start`
//! is the 1-based first subtask of the epoch and each `bs` is the 1-based
//! position of an arm in the `utilities` list.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::bandit::StopRule;
use crate::engine::{
    ControlConfig, Environment, EngineError, EpochMode, PolicyKind, RunConfig, WorkloadConfig,
};
use crate::scenario::{Epoch, InterferenceModel, NetworkConfig, ObservationModel};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Parse { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` expects {expected}, got `{value}`")]
    TypeMismatch {
        line: usize,
        key: String,
        expected: &'static str,
        value: String,
    },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// The default scenario: dense urban grid, video-analytics workload.
pub fn default_config() -> RunConfig {
    RunConfig {
        seed: 0,
        network: NetworkConfig::default(),
        observation: ObservationModel::new(0.3).expect("default noise in range"),
        mobility_step: 20.0,
        workload: WorkloadConfig {
            tasks: 500,
            subtask_min: 60,
            subtask_max: 120,
            subtask_bits: 0.62e6,
            gamma_min: 500.0,
            gamma_max: 1000.0,
            subtask_deadline: 0.150,
            handover_cost: 0.005,
            battery: 1000.0,
            alpha: 0.41,
        },
        control: ControlConfig {
            frame_length: 5,
            v_values: vec![0.01],
        },
        policy: PolicyKind::EmmGsi,
        stop_rule: StopRule::FixedCount { k_s: 20 },
        environment: Environment::Physical,
        epochs: EpochMode::Single,
        oracle_deadline: true,
    }
}

/// The scripted three-epoch scenario: five arms with fixed normalized
/// utilities, newcomers in epoch 2, and epoch 3 losing the best arm.
pub fn scripted_scenario() -> (Vec<f64>, Vec<Epoch>) {
    (
        vec![0.5, 0.8, 0.4, 0.9, 0.7],
        vec![
            Epoch {
                start: 1,
                available: vec![0, 1],
            },
            Epoch {
                start: 41,
                available: vec![0, 1, 2, 3],
            },
            Epoch {
                start: 81,
                available: vec![0, 1, 3, 4],
            },
        ],
    )
}

pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    let mut draft = Draft::default();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::Parse {
                line,
                text: content.to_string(),
            })?;
        draft.set(line, key.trim(), value.trim())?;
    }
    draft.build()
}

/// Emit the effective configuration; `parse_config_str` on the output
/// reproduces it exactly.
pub fn dump_config(config: &RunConfig) -> String {
    let n = &config.network;
    let w = &config.workload;
    let mut s = String::new();
    let mut kv = |key: &str, value: String| {
        let _ = writeln!(s, "{key} = {value}");
    };
    kv("seed", config.seed.to_string());
    kv("area_side", n.area_side.to_string());
    kv("bs_count", n.bs_count.to_string());
    kv("coverage_radius", n.coverage_radius.to_string());
    kv("bandwidth", n.bandwidth.to_string());
    kv("noise_power", n.noise_power.to_string());
    kv("tx_power", n.tx_power.to_string());
    kv("pathloss_intercept", n.pathloss_intercept.to_string());
    kv("pathloss_slope", n.pathloss_slope.to_string());
    kv("max_cpu", n.max_cpu.to_string());
    kv(
        "interference",
        match n.interference {
            InterferenceModel::Off => "off".into(),
            InterferenceModel::Uniform => "uniform".into(),
        },
    );
    kv("interference_max", n.interference_max.to_string());
    kv("min_distance", n.min_distance.to_string());
    kv(
        "observation_noise",
        config.observation.relative_half_width.to_string(),
    );
    kv("mobility_step", config.mobility_step.to_string());
    kv("tasks", w.tasks.to_string());
    kv("subtask_min", w.subtask_min.to_string());
    kv("subtask_max", w.subtask_max.to_string());
    kv("subtask_bits", w.subtask_bits.to_string());
    kv("gamma_min", w.gamma_min.to_string());
    kv("gamma_max", w.gamma_max.to_string());
    kv("deadline", w.subtask_deadline.to_string());
    kv("handover_cost", w.handover_cost.to_string());
    kv("battery", w.battery.to_string());
    kv("alpha", w.alpha.to_string());
    kv("frame_length", config.control.frame_length.to_string());
    kv("v", join_f64(&config.control.v_values));
    kv("policy", config.policy.name().to_string());
    match config.stop_rule {
        StopRule::Never => kv("stop.kind", "never".into()),
        StopRule::FixedCount { k_s } => {
            kv("stop.kind", "fixed_count".into());
            kv("stop.ks", k_s.to_string());
        }
        StopRule::Gap { epsilon, k_0 } => {
            kv("stop.kind", "gap".into());
            kv("stop.epsilon", epsilon.to_string());
            kv("stop.k0", k_0.to_string());
        }
    }
    match &config.environment {
        Environment::Physical => kv("environment", "physical".into()),
        Environment::Utilities(utilities) => {
            kv("environment", "utilities".into());
            kv("utilities", join_f64(utilities));
        }
    }
    match &config.epochs {
        EpochMode::Single => kv("epoch.mode", "single".into()),
        EpochMode::Scripted(epochs) => {
            kv("epoch.mode", "scripted".into());
            kv("epoch.script", script_to_string(epochs));
        }
        EpochMode::Random {
            epochs_per_task,
            drop_prob,
        } => {
            kv("epoch.mode", "random".into());
            kv("epoch.count", epochs_per_task.to_string());
            kv("epoch.drop", drop_prob.to_string());
        }
    }
    kv("oracle_deadline", config.oracle_deadline.to_string());
    s
}

fn join_f64(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn script_to_string(epochs: &[Epoch]) -> String {
    epochs
        .iter()
        .map(|e| {
            let ids = e
                .available
                .iter()
                .map(|bs| (bs + 1).to_string())
                .collect::<Vec<_>>()
                .join(",");
            format!("{}:{ids}", e.start)
        })
        .collect::<Vec<_>>()
        .join(";")
}

/// Mutable parse state: the defaults plus aux fields for the keys that
/// only make sense in combination.
struct Draft {
    config: RunConfig,
    stop_kind: String,
    stop_ks: usize,
    stop_epsilon: f64,
    stop_k0: u64,
    environment: String,
    utilities: Vec<f64>,
    epoch_mode: String,
    epoch_script: Vec<Epoch>,
    epoch_count: usize,
    epoch_drop: f64,
}

impl Default for Draft {
    fn default() -> Self {
        let (utilities, script) = scripted_scenario();
        Self {
            config: default_config(),
            stop_kind: "fixed_count".into(),
            stop_ks: 20,
            stop_epsilon: 0.01,
            stop_k0: 10,
            environment: "physical".into(),
            utilities,
            epoch_mode: "single".into(),
            epoch_script: script,
            epoch_count: 3,
            epoch_drop: 0.3,
        }
    }
}

impl Draft {
    fn set(&mut self, line: usize, key: &str, value: &str) -> Result<(), ConfigError> {
        let n = &mut self.config.network;
        let w = &mut self.config.workload;
        match key {
            "seed" => self.config.seed = parse_num(line, key, value, "an unsigned integer")?,
            "area_side" => n.area_side = parse_num(line, key, value, "a number")?,
            "bs_count" => n.bs_count = parse_num(line, key, value, "an unsigned integer")?,
            "coverage_radius" => n.coverage_radius = parse_num(line, key, value, "a number")?,
            "bandwidth" => n.bandwidth = parse_num(line, key, value, "a number")?,
            "noise_power" => n.noise_power = parse_num(line, key, value, "a number")?,
            "tx_power" => n.tx_power = parse_num(line, key, value, "a number")?,
            "pathloss_intercept" => {
                n.pathloss_intercept = parse_num(line, key, value, "a number")?
            }
            "pathloss_slope" => n.pathloss_slope = parse_num(line, key, value, "a number")?,
            "max_cpu" => n.max_cpu = parse_num(line, key, value, "a number")?,
            "interference" => {
                n.interference = match value {
                    "off" => InterferenceModel::Off,
                    "uniform" => InterferenceModel::Uniform,
                    _ => {
                        return Err(ConfigError::TypeMismatch {
                            line,
                            key: key.into(),
                            expected: "`off` or `uniform`",
                            value: value.into(),
                        })
                    }
                }
            }
            "interference_max" => n.interference_max = parse_num(line, key, value, "a number")?,
            "min_distance" => n.min_distance = parse_num(line, key, value, "a number")?,
            "observation_noise" => {
                let v: f64 = parse_num(line, key, value, "a number in [0, 1)")?;
                self.config.observation =
                    ObservationModel::new(v).map_err(|e| ConfigError::Invalid(e.to_string()))?;
            }
            "mobility_step" => {
                self.config.mobility_step = parse_num(line, key, value, "a number")?
            }
            "tasks" => w.tasks = parse_num(line, key, value, "an unsigned integer")?,
            "subtask_min" => w.subtask_min = parse_num(line, key, value, "an unsigned integer")?,
            "subtask_max" => w.subtask_max = parse_num(line, key, value, "an unsigned integer")?,
            "subtask_bits" => w.subtask_bits = parse_num(line, key, value, "a number")?,
            "gamma_min" => w.gamma_min = parse_num(line, key, value, "a number")?,
            "gamma_max" => w.gamma_max = parse_num(line, key, value, "a number")?,
            "deadline" => w.subtask_deadline = parse_num(line, key, value, "a number")?,
            "handover_cost" => w.handover_cost = parse_num(line, key, value, "a number")?,
            "battery" => w.battery = parse_num(line, key, value, "a number")?,
            "alpha" => w.alpha = parse_num(line, key, value, "a number")?,
            "frame_length" => {
                self.config.control.frame_length =
                    parse_num(line, key, value, "an unsigned integer")?
            }
            "v" => self.config.control.v_values = parse_f64_list(line, key, value)?,
            "policy" => {
                self.config.policy =
                    PolicyKind::parse(value).ok_or_else(|| ConfigError::TypeMismatch {
                        line,
                        key: key.into(),
                        expected: "a policy name (jstep-oracle, emm-gsi, emm-lsi, emm-lsi-v, delay-optimal, energy-optimal, radio-lsi)",
                        value: value.into(),
                    })?
            }
            "stop.kind" => {
                if !["never", "fixed_count", "gap"].contains(&value) {
                    return Err(ConfigError::TypeMismatch {
                        line,
                        key: key.into(),
                        expected: "`never`, `fixed_count` or `gap`",
                        value: value.into(),
                    });
                }
                self.stop_kind = value.into();
            }
            "stop.ks" => self.stop_ks = parse_num(line, key, value, "an unsigned integer")?,
            "stop.epsilon" => self.stop_epsilon = parse_num(line, key, value, "a number")?,
            "stop.k0" => self.stop_k0 = parse_num(line, key, value, "an unsigned integer")?,
            "environment" => {
                if !["physical", "utilities"].contains(&value) {
                    return Err(ConfigError::TypeMismatch {
                        line,
                        key: key.into(),
                        expected: "`physical` or `utilities`",
                        value: value.into(),
                    });
                }
                self.environment = value.into();
            }
            "utilities" => self.utilities = parse_f64_list(line, key, value)?,
            "epoch.mode" => {
                if !["single", "scripted", "random"].contains(&value) {
                    return Err(ConfigError::TypeMismatch {
                        line,
                        key: key.into(),
                        expected: "`single`, `scripted` or `random`",
                        value: value.into(),
                    });
                }
                self.epoch_mode = value.into();
            }
            "epoch.script" => self.epoch_script = parse_script(line, key, value)?,
            "epoch.count" => self.epoch_count = parse_num(line, key, value, "an unsigned integer")?,
            "epoch.drop" => self.epoch_drop = parse_num(line, key, value, "a number")?,
            "oracle_deadline" => {
                self.config.oracle_deadline = parse_num(line, key, value, "`true` or `false`")?
            }
            _ => {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.into(),
                })
            }
        }
        Ok(())
    }

    fn build(self) -> Result<RunConfig, ConfigError> {
        let mut config = self.config;
        config.stop_rule = match self.stop_kind.as_str() {
            "never" => StopRule::Never,
            "fixed_count" => StopRule::FixedCount { k_s: self.stop_ks },
            _ => StopRule::Gap {
                epsilon: self.stop_epsilon,
                k_0: self.stop_k0,
            },
        };
        config.environment = match self.environment.as_str() {
            "physical" => Environment::Physical,
            _ => Environment::Utilities(self.utilities),
        };
        config.epochs = match self.epoch_mode.as_str() {
            "single" => EpochMode::Single,
            "scripted" => EpochMode::Scripted(self.epoch_script),
            _ => EpochMode::Random {
                epochs_per_task: self.epoch_count,
                drop_prob: self.epoch_drop,
            },
        };
        config
            .validate()
            .map_err(|e: EngineError| ConfigError::Invalid(e.to_string()))?;
        Ok(config)
    }
}

fn parse_num<T: std::str::FromStr>(
    line: usize,
    key: &str,
    value: &str,
    expected: &'static str,
) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::TypeMismatch {
        line,
        key: key.into(),
        expected,
        value: value.into(),
    })
}

fn parse_f64_list(line: usize, key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    value
        .split(',')
        .map(|part| parse_num(line, key, part.trim(), "a comma-separated list of numbers"))
        .collect()
}

fn parse_script(line: usize, key: &str, value: &str) -> Result<Vec<Epoch>, ConfigError> {
    let mismatch = |why: &'static str| ConfigError::TypeMismatch {
        line,
        key: key.into(),
        expected: why,
        value: value.into(),
    };
    let mut epochs = Vec::new();
    for segment in value.split(';') {
        let (start, ids) = segment
            .split_once(':')
            .ok_or_else(|| mismatch("segments of the form `start:bs,bs`"))?;
        let start: usize = start
            .trim()
            .parse()
            .map_err(|_| mismatch("a 1-based subtask index before each `:`"))?;
        let available = ids
            .split(',')
            .map(|id| {
                id.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|id| *id >= 1)
                    .map(|id| id - 1)
                    .ok_or_else(|| mismatch("1-based BS numbers after each `:`"))
            })
            .collect::<Result<Vec<usize>, _>>()?;
        epochs.push(Epoch { start, available });
    }
    Ok(epochs)
}
