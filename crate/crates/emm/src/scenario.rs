//! Physical scenario: network layout, user mobility, task workloads, the
//! wireless link model and per-subtask offloading costs.
//!
//! A task generated at one location is split into equal-size subtasks that
//! are offloaded sequentially. The true state a BS offers for a task (its
//! allocated CPU share, channel gain and interference) is drawn once per
//! task and held fixed while that task's subtasks run; policies with local
//! state information only see it through multiplicative observation noise.
//!
//! Link model, per subtask of `lambda_0` bits and intensity `gamma`:
//!
//! ```text
//! compute delay   d_c = lambda_0 * gamma / f
//! uplink rate     r   = W * log2(1 + P_tx * H / (sigma^2 + I))
//! transmit delay  d_t = lambda_0 / r
//! energy          e   = P_tx * d_t
//! ```
//!
//! The path-loss curve is `PL_dB = intercept + slope * log10(d_km)` with the
//! distance in kilometres, and the linear gain is `10^(-PL_dB / 10)`.

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("bs_count {0} is not a perfect square")]
    NonSquareGrid(usize),
    #[error("grid pitch {pitch:.1} m leaves coverage holes at radius {radius:.1} m")]
    CoverageHole { pitch: f64, radius: f64 },
    #[error("no base station covers ({x:.1}, {y:.1})")]
    NoCoverage { x: f64, y: f64 },
    #[error("invalid scenario parameter: {0}")]
    InvalidParameter(String),
}

/// How per-(task, BS) interference is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterferenceModel {
    /// No interference; SNR-limited links.
    Off,
    /// Uniform on `[0, interference_max)` per (task, BS).
    Uniform,
}

/// Static network and link parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    /// Side of the square deployment area, metres.
    pub area_side: f64,
    /// Number of BSs; must be a perfect square for the grid layout.
    pub bs_count: usize,
    /// Association radius, metres. Closed ball: distance == radius is in.
    pub coverage_radius: f64,
    /// Uplink channel bandwidth, Hz.
    pub bandwidth: f64,
    /// Receiver noise power, W.
    pub noise_power: f64,
    /// User transmit power, W.
    pub tx_power: f64,
    /// Path loss at 1 km, dB.
    pub pathloss_intercept: f64,
    /// Path loss slope, dB per decade of distance.
    pub pathloss_slope: f64,
    /// Maximum CPU frequency a server can allocate to one task, Hz.
    pub max_cpu: f64,
    pub interference: InterferenceModel,
    /// Upper end of the uniform interference draw, W.
    pub interference_max: f64,
    /// Distances below this are clamped before the path-loss log, metres.
    pub min_distance: f64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            area_side: 1000.0,
            bs_count: 49,
            coverage_radius: 150.0,
            bandwidth: 20.0e6,
            noise_power: 2.0e-13,
            tx_power: 0.5,
            pathloss_intercept: 127.0,
            pathloss_slope: 30.0,
            max_cpu: 25.0e9,
            interference: InterferenceModel::Uniform,
            interference_max: 2.8e-10,
            min_distance: 1.0,
        }
    }
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let positive = [
            ("area_side", self.area_side),
            ("coverage_radius", self.coverage_radius),
            ("bandwidth", self.bandwidth),
            ("noise_power", self.noise_power),
            ("tx_power", self.tx_power),
            ("max_cpu", self.max_cpu),
            ("min_distance", self.min_distance),
        ];
        for (name, value) in positive {
            if value <= 0.0 || value.is_nan() {
                return Err(ScenarioError::InvalidParameter(format!(
                    "{name} must be strictly positive, got {value}"
                )));
            }
        }
        if self.interference_max < 0.0 {
            return Err(ScenarioError::InvalidParameter(format!(
                "interference_max must be nonnegative, got {}",
                self.interference_max
            )));
        }
        if self.bs_count == 0 {
            return Err(ScenarioError::InvalidParameter(
                "bs_count must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One computation task: where it was generated and how big it is.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskSpec {
    pub task_id: usize,
    /// Location where the task is generated, metres.
    pub location: (f64, f64),
    /// Number of sequential subtasks.
    pub subtask_count: usize,
    /// Input bits per subtask.
    pub subtask_bits: f64,
    /// CPU cycles per input bit.
    pub intensity: f64,
    /// Per-subtask completion deadline, seconds.
    pub subtask_deadline: f64,
    /// One-time delay charged when consecutive subtasks switch BS, seconds.
    pub handover_cost: f64,
}

impl TaskSpec {
    /// Total input size of the task, bits.
    pub fn input_bits(&self) -> f64 {
        self.subtask_count as f64 * self.subtask_bits
    }
}

/// Hidden per-(task, BS) state. Fixed for the whole task.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsState {
    pub bs_id: usize,
    /// CPU frequency allocated to this task, Hz. Strictly positive.
    pub cpu_alloc: f64,
    /// Linear channel power gain.
    pub channel_gain: f64,
    /// Inter-cell interference power, W.
    pub interference: f64,
}

/// True cost of offloading one subtask to one BS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubtaskCost {
    pub comp_delay: f64,
    pub tx_delay: f64,
    pub energy: f64,
}

impl SubtaskCost {
    /// Service delay of the subtask (compute plus uplink), seconds.
    pub fn delay(&self) -> f64 {
        self.comp_delay + self.tx_delay
    }
}

/// Multiplicative observation noise: each observed field is the true value
/// times `1 + u` with `u ~ Uniform(-v, v)`, independently per field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservationModel {
    pub relative_half_width: f64,
}

impl ObservationModel {
    pub fn new(relative_half_width: f64) -> Result<Self, ScenarioError> {
        if !(0.0..1.0).contains(&relative_half_width) {
            return Err(ScenarioError::InvalidParameter(format!(
                "relative_half_width must lie in [0, 1), got {relative_half_width}"
            )));
        }
        Ok(Self {
            relative_half_width,
        })
    }

    pub fn noiseless() -> Self {
        Self {
            relative_half_width: 0.0,
        }
    }
}

/// Lay the BSs out on a centered square grid.
///
/// Positions are deterministic given the configuration. Fails if `bs_count`
/// is not a perfect square or if the resulting pitch leaves points of the
/// area outside every BS's coverage radius.
pub fn generate_network(config: &NetworkConfig) -> Result<Vec<(f64, f64)>, ScenarioError> {
    config.validate()?;
    let side = integer_sqrt(config.bs_count).ok_or(ScenarioError::NonSquareGrid(config.bs_count))?;
    let pitch = config.area_side / side as f64;
    // Worst-covered point is an area corner, pitch/sqrt(2) from its nearest BS.
    if pitch / std::f64::consts::SQRT_2 > config.coverage_radius {
        return Err(ScenarioError::CoverageHole {
            pitch,
            radius: config.coverage_radius,
        });
    }
    let mut positions = Vec::with_capacity(config.bs_count);
    for row in 0..side {
        for col in 0..side {
            positions.push((
                (col as f64 + 0.5) * pitch,
                (row as f64 + 0.5) * pitch,
            ));
        }
    }
    Ok(positions)
}

fn integer_sqrt(n: usize) -> Option<usize> {
    let s = (n as f64).sqrt().round() as usize;
    (s * s == n).then_some(s)
}

/// BSs whose distance to `location` is at most the coverage radius, in
/// ascending id order. Empty candidate sets are a scenario error.
pub fn candidate_set(
    location: (f64, f64),
    positions: &[(f64, f64)],
    coverage_radius: f64,
) -> Result<Vec<usize>, ScenarioError> {
    let ids: Vec<usize> = positions
        .iter()
        .enumerate()
        .filter(|(_, p)| distance(location, **p) <= coverage_radius)
        .map(|(id, _)| id)
        .collect();
    if ids.is_empty() {
        return Err(ScenarioError::NoCoverage {
            x: location.0,
            y: location.1,
        });
    }
    Ok(ids)
}

pub fn distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

/// One random-walk step: fixed length, uniform direction, reflected at the
/// area boundary. The user is static within a task; one step per task.
pub fn step_mobility(
    location: (f64, f64),
    step_length: f64,
    area_side: f64,
    rng: &mut impl Rng,
) -> (f64, f64) {
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    let x = reflect(location.0 + step_length * theta.cos(), area_side);
    let y = reflect(location.1 + step_length * theta.sin(), area_side);
    (x, y)
}

fn reflect(mut v: f64, side: f64) -> f64 {
    loop {
        if v < 0.0 {
            v = -v;
        } else if v > side {
            v = 2.0 * side - v;
        } else {
            return v;
        }
    }
}

/// Linear power gain of the path-loss curve at `distance` metres.
pub fn path_loss_gain(distance: f64, config: &NetworkConfig) -> f64 {
    let d_km = distance.max(config.min_distance) / 1000.0;
    let pl_db = config.pathloss_intercept + config.pathloss_slope * d_km.log10();
    10f64.powf(-pl_db / 10.0)
}

/// Shannon uplink rate in bits per second.
pub fn uplink_rate(state: &BsState, config: &NetworkConfig) -> f64 {
    let snr = config.tx_power * state.channel_gain / (config.noise_power + state.interference);
    config.bandwidth * (1.0 + snr).log2()
}

/// True per-subtask cost of serving `task` from the BS in `state`.
///
/// Panics if `cpu_alloc` is zero, which violates the [`BsState`] invariant.
pub fn subtask_cost(task: &TaskSpec, state: &BsState, config: &NetworkConfig) -> SubtaskCost {
    assert!(
        state.cpu_alloc > 0.0,
        "BsState invariant violated: cpu_alloc must be positive"
    );
    let rate = uplink_rate(state, config);
    let tx_delay = task.subtask_bits / rate;
    SubtaskCost {
        comp_delay: task.subtask_bits * task.intensity / state.cpu_alloc,
        tx_delay,
        energy: config.tx_power * tx_delay,
    }
}

/// Draw the hidden state a BS offers for one task.
///
/// The CPU share is uniform on `(0, max_cpu]`; interference follows the
/// configured model. Callers memoize the result per (task, BS) so that all
/// subtasks of a task see identical true state.
pub fn draw_bs_state(
    bs_id: usize,
    distance_m: f64,
    config: &NetworkConfig,
    rng: &mut impl Rng,
) -> BsState {
    // max_cpu - Uniform[0, max_cpu) lands on (0, max_cpu], avoiding the
    // zero draw that would make the compute delay diverge.
    let cpu_alloc = config.max_cpu - rng.gen_range(0.0..config.max_cpu);
    let interference = match config.interference {
        InterferenceModel::Off => 0.0,
        InterferenceModel::Uniform => rng.gen_range(0.0..config.interference_max.max(f64::MIN_POSITIVE)),
    };
    BsState {
        bs_id,
        cpu_alloc,
        channel_gain: path_loss_gain(distance_m, config),
        interference,
    }
}

/// Apply observation noise to a true cost, independently per field.
pub fn observe(cost: &SubtaskCost, model: &ObservationModel, rng: &mut impl Rng) -> SubtaskCost {
    let v = model.relative_half_width;
    let mut field = |x: f64| {
        let u: f64 = rng.gen_range(-v..=v);
        (x * (1.0 + u)).max(0.0)
    };
    SubtaskCost {
        comp_delay: field(cost.comp_delay),
        tx_delay: field(cost.tx_delay),
        energy: field(cost.energy),
    }
}

/// Interval in one task during which the available BS set is invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Epoch {
    /// First subtask of the epoch, 1-based.
    pub start: usize,
    /// Available BS ids during the epoch, ascending.
    pub available: Vec<usize>,
}
