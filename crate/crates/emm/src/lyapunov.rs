//! Virtual energy-deficit queue and performance-bound calculators.
//!
//! The queue tracks how far cumulative energy use runs ahead of the
//! per-task budget `alpha * B / M`:
//!
//! ```text
//! q(m+1) = max(q(m) + E(m) - alpha*B/M, 0)
//! ```
//!
//! Per task, policies minimize the drift-plus-penalty weighted cost
//! `z = V*delay + q*energy`. The queue resets at the start of every frame
//! of `J` tasks, each frame carrying its own control weight `V_r`.
//!
//! [`guarantee_envelope`] evaluates the guaranteed worst-case envelope of this
//! scheme against the per-frame lookahead optimum `g*_r`: with
//! `learning_dev = 0` it is the full-information guarantee, and a positive
//! `learning_dev` accounts for the per-task deviation a learner incurs.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LyapunovError {
    #[error("task energy must be nonnegative, got {0}")]
    NegativeEnergy(f64),
    #[error("task index {index} outside schedule of {total} tasks")]
    TaskOutOfRange { index: usize, total: usize },
    #[error("invalid control schedule: {0}")]
    InvalidSchedule(String),
}

/// Virtual queue of energy overuse relative to the per-task budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyDeficitQueue {
    /// Current queue length, joules. Never negative.
    pub length: f64,
    /// Per-task energy budget `alpha * B / M`, joules.
    pub per_task_budget: f64,
}

impl EnergyDeficitQueue {
    pub fn new(per_task_budget: f64) -> Self {
        Self {
            length: 0.0,
            per_task_budget,
        }
    }

    pub fn reset(&mut self) {
        self.length = 0.0;
    }
}

/// Advance the queue by one task's true consumed energy.
pub fn queue_update(
    queue: EnergyDeficitQueue,
    task_energy: f64,
) -> Result<EnergyDeficitQueue, LyapunovError> {
    if task_energy < 0.0 {
        return Err(LyapunovError::NegativeEnergy(task_energy));
    }
    Ok(EnergyDeficitQueue {
        length: (queue.length + task_energy - queue.per_task_budget).max(0.0),
        per_task_budget: queue.per_task_budget,
    })
}

/// Drift-plus-penalty weighted cost `z = v*delay + q*energy`.
pub fn weighted_cost(v: f64, q: f64, delay: f64, energy: f64) -> f64 {
    v * delay + q * energy
}

/// Frame structure and per-frame control weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSchedule {
    /// Tasks per frame (J).
    pub frame_length: usize,
    /// Number of frames (R).
    pub frame_count: usize,
    /// One positive control weight per frame.
    pub v_values: Vec<f64>,
}

impl ControlSchedule {
    /// A constant-V schedule spanning `frame_count` frames.
    pub fn constant(v: f64, frame_length: usize, frame_count: usize) -> Result<Self, LyapunovError> {
        Self::new(frame_length, vec![v; frame_count.max(1)])
    }

    pub fn new(frame_length: usize, v_values: Vec<f64>) -> Result<Self, LyapunovError> {
        if frame_length == 0 {
            return Err(LyapunovError::InvalidSchedule(
                "frame_length must be positive".into(),
            ));
        }
        if v_values.is_empty() {
            return Err(LyapunovError::InvalidSchedule(
                "at least one V value required".into(),
            ));
        }
        if let Some(v) = v_values.iter().find(|v| **v <= 0.0 || v.is_nan()) {
            return Err(LyapunovError::InvalidSchedule(format!(
                "control weights must be strictly positive, got {v}"
            )));
        }
        Ok(Self {
            frame_length,
            frame_count: v_values.len(),
            v_values,
        })
    }

    /// Total number of tasks covered, `M = J * R`.
    pub fn task_count(&self) -> usize {
        self.frame_length * self.frame_count
    }
}

/// Frame control for 1-based task index `m`: whether the queue resets at
/// this task, and the control weight in effect.
pub fn control_for_task(
    m: usize,
    schedule: &ControlSchedule,
) -> Result<(bool, f64), LyapunovError> {
    if m == 0 || m > schedule.task_count() {
        return Err(LyapunovError::TaskOutOfRange {
            index: m,
            total: schedule.task_count(),
        });
    }
    let frame = (m - 1) / schedule.frame_length;
    let reset = (m - 1).is_multiple_of(schedule.frame_length);
    Ok((reset, schedule.v_values[frame]))
}

/// Worst half-squared deviation of task energy from the per-task budget,
/// over the attainable energy range `[0, energy_max]`.
pub fn constant_u(energy_max: f64, per_task_budget: f64) -> f64 {
    let b = per_task_budget;
    0.5 * ((energy_max - b).powi(2)).max(b.powi(2))
}

/// Inputs to the guarantee calculators.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundInputs {
    /// Deviation constant U, joules squared.
    pub u_const: f64,
    /// Tasks per frame (J).
    pub j: usize,
    /// Frames (R).
    pub r: usize,
    /// Per-frame control weights, length `r`.
    pub v_values: Vec<f64>,
    /// Per-frame lookahead-optimal average delays `g*_r`, length `r`.
    pub g_star: Vec<f64>,
    /// Per-task learning deviation; zero under full state information.
    pub learning_dev: f64,
    /// Total energy budget `alpha * B`, joules.
    pub energy_budget: f64,
}

impl BoundInputs {
    fn validate(&self) {
        assert_eq!(self.v_values.len(), self.r, "one V per frame");
        assert_eq!(self.g_star.len(), self.r, "one g* per frame");
        assert!(self.u_const >= 0.0 && self.learning_dev >= 0.0);
    }
}

/// Guaranteed (delay, energy) envelope of the drift-plus-penalty scheme.
///
/// ```text
/// delay  <= (1/R) sum_r g*_r + ((U*J + W)/R) sum_r 1/V_r
/// energy <= alpha*B + sum_r sqrt(2*(U*J^2 + V_r*J*g*_r + W*J))
/// ```
pub fn guarantee_envelope(inputs: &BoundInputs) -> (f64, f64) {
    inputs.validate();
    let r = inputs.r as f64;
    let j = inputs.j as f64;
    let mean_g: f64 = inputs.g_star.iter().sum::<f64>() / r;
    let inv_v: f64 = inputs.v_values.iter().map(|v| 1.0 / v).sum();
    let delay_bound = mean_g + (inputs.u_const * j + inputs.learning_dev) / r * inv_v;
    let energy_slack: f64 = inputs
        .v_values
        .iter()
        .zip(&inputs.g_star)
        .map(|(v, g)| {
            (2.0 * (inputs.u_const * j * j + v * j * g + inputs.learning_dev * j)).sqrt()
        })
        .sum();
    (delay_bound, inputs.energy_budget + energy_slack)
}
