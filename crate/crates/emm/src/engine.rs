//! Simulation driver: realizes the scenario, runs the configured policy
//! task by task, updates the virtual queue, records traces and aggregates
//! replications.
//!
//! Realization is split into named RNG streams keyed per task (and per BS
//! for capability draws), so the physical sample path depends only on the
//! seed and scenario parameters, never on the policy. Running two policies
//! on the same seed therefore compares them on the same realization, which
//! is what the guarantee checks in [`verify_bounds`] require.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bandit::StopRule;
use crate::lyapunov::{
    self, constant_u, control_for_task, queue_update, BoundInputs, ControlSchedule,
    EnergyDeficitQueue, LyapunovError,
};
use crate::policies::{
    self, delay_optimal_decide, emm_gsi_decide, energy_optimal_decide, jstep_lookahead,
    run_gsi_task, FramePlan, FrameTask, PolicyError, TaskEnv,
};
use crate::rng::{RngFactory, Stream};
use crate::scenario::{
    self, candidate_set, draw_bs_state, generate_network, step_mobility, Epoch, NetworkConfig,
    ObservationModel, ScenarioError, SubtaskCost, TaskSpec,
};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Lyapunov(#[from] LyapunovError),
    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),
    #[error("summaries come from different realizations (seed or scenario differ)")]
    RealizationMismatch,
    #[error("no oracle frame data in summary; co-run the jstep-oracle policy first")]
    MissingOracleData,
}

/// The decision strategies the engine can drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyKind {
    JstepOracle,
    EmmGsi,
    EmmLsi,
    EmmLsiV,
    DelayOptimal,
    EnergyOptimal,
    RadioLsi,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 7] = [
        PolicyKind::JstepOracle,
        PolicyKind::EmmGsi,
        PolicyKind::EmmLsi,
        PolicyKind::EmmLsiV,
        PolicyKind::DelayOptimal,
        PolicyKind::EnergyOptimal,
        PolicyKind::RadioLsi,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PolicyKind::JstepOracle => "jstep-oracle",
            PolicyKind::EmmGsi => "emm-gsi",
            PolicyKind::EmmLsi => "emm-lsi",
            PolicyKind::EmmLsiV => "emm-lsi-v",
            PolicyKind::DelayOptimal => "delay-optimal",
            PolicyKind::EnergyOptimal => "energy-optimal",
            PolicyKind::RadioLsi => "radio-lsi",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    /// Policies that learn from noisy observations.
    pub fn is_lsi(&self) -> bool {
        matches!(
            self,
            PolicyKind::EmmLsi | PolicyKind::EmmLsiV | PolicyKind::RadioLsi
        )
    }
}

/// Task workload and energy-budget parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkloadConfig {
    /// Total number of tasks (M).
    pub tasks: usize,
    /// Subtask count range, inclusive.
    pub subtask_min: usize,
    pub subtask_max: usize,
    /// Bits per subtask.
    pub subtask_bits: f64,
    /// Computation intensity range, cycles per bit, inclusive.
    pub gamma_min: f64,
    pub gamma_max: f64,
    /// Per-subtask completion deadline, seconds.
    pub subtask_deadline: f64,
    /// One-time handover cost, seconds.
    pub handover_cost: f64,
    /// Battery capacity B, joules.
    pub battery: f64,
    /// Fraction of the battery available for offloading, in (0, 1].
    pub alpha: f64,
}

/// Frame length and control weights. A single value is replicated over all
/// frames; otherwise one value per frame is required.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlConfig {
    pub frame_length: usize,
    pub v_values: Vec<f64>,
}

/// What produces subtask costs: the physical link/compute model, or
/// synthetic arms with configured normalized utilities (used for scripted
/// epoch experiments; forces `v = 1` and carries no energy).
#[derive(Debug, Clone, PartialEq)]
pub enum Environment {
    Physical,
    Utilities(Vec<f64>),
}

/// How BS availability changes within a task.
#[derive(Debug, Clone, PartialEq)]
pub enum EpochMode {
    /// The BS set never changes during a task.
    Single,
    /// Fixed schedule applied to every task; BS ids index the utility list.
    Scripted(Vec<Epoch>),
    /// Tasks split into equal epochs; each later epoch drops each candidate
    /// independently with the given probability (never below one BS).
    Random { epochs_per_task: usize, drop_prob: f64 },
}

/// Full description of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub network: NetworkConfig,
    pub observation: ObservationModel,
    /// Random-walk step per task, metres.
    pub mobility_step: f64,
    pub workload: WorkloadConfig,
    pub control: ControlConfig,
    pub policy: PolicyKind,
    pub stop_rule: StopRule,
    pub environment: Environment,
    pub epochs: EpochMode,
    /// Whether the lookahead oracle prunes deadline-violating assignments.
    pub oracle_deadline: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        self.network.validate()?;
        let w = &self.workload;
        if !(w.alpha > 0.0 && w.alpha <= 1.0) {
            return Err(EngineError::InvalidConfig(format!(
                "alpha must lie in (0, 1], got {}",
                w.alpha
            )));
        }
        if w.subtask_min == 0 || w.subtask_min > w.subtask_max {
            return Err(EngineError::InvalidConfig(format!(
                "subtask range [{}, {}] is invalid",
                w.subtask_min, w.subtask_max
            )));
        }
        if w.gamma_min > w.gamma_max || w.gamma_min < 0.0 {
            return Err(EngineError::InvalidConfig(format!(
                "gamma range [{}, {}] is invalid",
                w.gamma_min, w.gamma_max
            )));
        }
        if w.battery <= 0.0 || w.subtask_bits <= 0.0 {
            return Err(EngineError::InvalidConfig(
                "battery and subtask_bits must be positive".into(),
            ));
        }
        let c = &self.control;
        if c.frame_length == 0 || !w.tasks.is_multiple_of(c.frame_length) {
            return Err(EngineError::InvalidConfig(format!(
                "tasks ({}) must be a multiple of the frame length ({})",
                w.tasks, c.frame_length
            )));
        }
        let frames = w.tasks / c.frame_length;
        if c.v_values.len() != 1 && c.v_values.len() != frames && w.tasks > 0 {
            return Err(EngineError::InvalidConfig(format!(
                "expected 1 or {frames} V values, got {}",
                c.v_values.len()
            )));
        }
        if c.v_values.iter().any(|v| *v <= 0.0 || v.is_nan()) {
            return Err(EngineError::InvalidConfig(
                "control weights must be strictly positive".into(),
            ));
        }
        if let Environment::Utilities(utilities) = &self.environment {
            if utilities.is_empty() {
                return Err(EngineError::InvalidConfig(
                    "utilities environment needs at least one arm".into(),
                ));
            }
        }
        match &self.epochs {
            EpochMode::Scripted(_) if !matches!(self.environment, Environment::Utilities(_)) => {
                return Err(EngineError::InvalidConfig(
                    "scripted epochs require the utilities environment".into(),
                ));
            }
            EpochMode::Scripted(epochs) if epochs.is_empty() => {
                return Err(EngineError::InvalidConfig("empty epoch script".into()));
            }
            EpochMode::Random {
                epochs_per_task,
                drop_prob,
            } if *epochs_per_task == 0 || !(0.0..1.0).contains(drop_prob) => {
                return Err(EngineError::InvalidConfig(
                    "random epochs need epochs_per_task >= 1 and drop_prob in [0, 1)".into(),
                ));
            }
            _ => {}
        }
        let varying = !matches!(self.epochs, EpochMode::Single);
        let supports_epochs = matches!(self.policy, PolicyKind::EmmLsi | PolicyKind::EmmLsiV);
        if varying && !supports_epochs {
            return Err(EngineError::InvalidConfig(format!(
                "policy {} does not support varying BS sets",
                self.policy.name()
            )));
        }
        Ok(())
    }

    /// `alpha * B`, the total energy budget of the run.
    pub fn energy_budget(&self) -> f64 {
        self.workload.alpha * self.workload.battery
    }

    /// `alpha * B / M`, the virtual queue's per-task budget.
    pub fn per_task_budget(&self) -> f64 {
        self.energy_budget() / self.workload.tasks.max(1) as f64
    }

    pub fn frames(&self) -> usize {
        self.workload.tasks / self.control.frame_length
    }

    pub fn schedule(&self) -> Result<ControlSchedule, EngineError> {
        let frames = self.frames().max(1);
        let v_values = if self.control.v_values.len() == 1 {
            vec![self.control.v_values[0]; frames]
        } else {
            self.control.v_values.clone()
        };
        Ok(ControlSchedule::new(self.control.frame_length, v_values)?)
    }

    /// Fingerprint of everything that shapes the physical realization:
    /// seed, scenario, workload, mobility and epoch structure. Policies
    /// and control weights are deliberately excluded so runs that differ
    /// only in those compare as the same sample path.
    pub fn realization_id(&self) -> u64 {
        let mut s = String::new();
        let _ = write!(
            s,
            "{};{:?};{:?};{};{:?};{:?}",
            self.seed, self.network, self.workload, self.mobility_step, self.environment,
            self.epochs
        );
        s.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ b as u64).wrapping_mul(0x1000_0000_01b3)
        })
    }
}

/// One realized task: spec, candidates, frozen true costs and epochs.
#[derive(Debug, Clone)]
pub struct TaskContext {
    pub spec: TaskSpec,
    pub candidates: Vec<usize>,
    /// True per-subtask cost per candidate BS, fixed for the whole task.
    pub costs: BTreeMap<usize, SubtaskCost>,
    pub epochs: Vec<Epoch>,
}

impl TaskContext {
    fn cost_list(&self) -> Vec<(usize, SubtaskCost)> {
        self.candidates
            .iter()
            .map(|bs| (*bs, self.costs[bs]))
            .collect()
    }
}

/// Environment view handed to the learning policies: true costs from the
/// realized task, observations through the noise model.
struct ContextEnv<'a> {
    costs: &'a BTreeMap<usize, SubtaskCost>,
    observation: ObservationModel,
    rng: ChaCha8Rng,
}

impl TaskEnv for ContextEnv<'_> {
    fn true_cost(&self, bs_id: usize) -> SubtaskCost {
        self.costs[&bs_id]
    }

    fn observe(&mut self, bs_id: usize) -> SubtaskCost {
        scenario::observe(&self.costs[&bs_id], &self.observation, &mut self.rng)
    }
}

/// Realize the full sample path for a run: every task's location, size,
/// candidate set, per-BS true costs and epoch structure. Depends only on
/// the seed and scenario configuration, never on the policy.
pub fn realize(config: &RunConfig) -> Result<Vec<TaskContext>, EngineError> {
    let factory = RngFactory::new(config.seed);
    match &config.environment {
        Environment::Physical => realize_physical(config, &factory),
        Environment::Utilities(utilities) => realize_utilities(config, utilities, &factory),
    }
}

fn realize_physical(
    config: &RunConfig,
    factory: &RngFactory,
) -> Result<Vec<TaskContext>, EngineError> {
    let positions = generate_network(&config.network)?;
    let w = &config.workload;
    let mut location = (config.network.area_side / 2.0, config.network.area_side / 2.0);
    let mut contexts = Vec::with_capacity(w.tasks);
    for m in 1..=w.tasks {
        let mut mobility_rng = factory.stream(Stream::Mobility, m as u64);
        location = step_mobility(
            location,
            config.mobility_step,
            config.network.area_side,
            &mut mobility_rng,
        );
        let mut task_rng = factory.stream(Stream::Tasks, m as u64);
        use rand::Rng;
        let subtask_count = task_rng.gen_range(w.subtask_min..=w.subtask_max);
        let intensity = task_rng.gen_range(w.gamma_min..=w.gamma_max);
        let spec = TaskSpec {
            task_id: m,
            location,
            subtask_count,
            subtask_bits: w.subtask_bits,
            intensity,
            subtask_deadline: w.subtask_deadline,
            handover_cost: w.handover_cost,
        };
        let candidates = candidate_set(location, &positions, config.network.coverage_radius)?;
        let mut costs = BTreeMap::new();
        for bs in &candidates {
            let mut rng = factory.keyed(Stream::Capability, m as u64, *bs as u64);
            let state = draw_bs_state(
                *bs,
                scenario::distance(location, positions[*bs]),
                &config.network,
                &mut rng,
            );
            costs.insert(*bs, scenario::subtask_cost(&spec, &state, &config.network));
        }
        let epochs = build_epochs(config, &spec, &candidates, factory)?;
        contexts.push(TaskContext {
            spec,
            candidates,
            costs,
            epochs,
        });
    }
    Ok(contexts)
}

fn realize_utilities(
    config: &RunConfig,
    utilities: &[f64],
    factory: &RngFactory,
) -> Result<Vec<TaskContext>, EngineError> {
    let w = &config.workload;
    let candidates: Vec<usize> = (0..utilities.len()).collect();
    let costs: BTreeMap<usize, SubtaskCost> = utilities
        .iter()
        .enumerate()
        .map(|(bs, u)| {
            (
                bs,
                SubtaskCost {
                    comp_delay: *u,
                    tx_delay: 0.0,
                    energy: 0.0,
                },
            )
        })
        .collect();
    let mut contexts = Vec::with_capacity(w.tasks);
    for m in 1..=w.tasks {
        use rand::Rng;
        let mut task_rng = factory.stream(Stream::Tasks, m as u64);
        let subtask_count = task_rng.gen_range(w.subtask_min..=w.subtask_max);
        let spec = TaskSpec {
            task_id: m,
            location: (0.0, 0.0),
            subtask_count,
            subtask_bits: w.subtask_bits,
            intensity: 0.0,
            // Utilities are unitless costs; physical deadlines do not apply.
            subtask_deadline: f64::INFINITY,
            handover_cost: w.handover_cost,
        };
        let epochs = build_epochs(config, &spec, &candidates, factory)?;
        contexts.push(TaskContext {
            spec,
            candidates: candidates.clone(),
            costs: costs.clone(),
            epochs,
        });
    }
    Ok(contexts)
}

fn build_epochs(
    config: &RunConfig,
    spec: &TaskSpec,
    candidates: &[usize],
    factory: &RngFactory,
) -> Result<Vec<Epoch>, EngineError> {
    let k_m = spec.subtask_count;
    Ok(match &config.epochs {
        EpochMode::Single => vec![Epoch {
            start: 1,
            available: candidates.to_vec(),
        }],
        EpochMode::Scripted(epochs) => {
            let mut kept: Vec<Epoch> = epochs
                .iter()
                .filter(|e| e.start <= k_m)
                .cloned()
                .collect();
            if kept.is_empty() || kept[0].start != 1 {
                return Err(EngineError::InvalidConfig(
                    "epoch script must start at subtask 1".into(),
                ));
            }
            for e in &mut kept {
                e.available.retain(|bs| candidates.contains(bs));
                if e.available.is_empty() {
                    return Err(EngineError::InvalidConfig(format!(
                        "epoch at subtask {} has no available BS",
                        e.start
                    )));
                }
            }
            kept
        }
        EpochMode::Random {
            epochs_per_task,
            drop_prob,
        } => {
            use rand::Rng;
            let mut rng = factory.stream(Stream::Epochs, spec.task_id as u64);
            let n = (*epochs_per_task).min(k_m).max(1);
            let mut epochs = Vec::with_capacity(n);
            for i in 0..n {
                let start = 1 + i * k_m / n;
                let available = if i == 0 {
                    candidates.to_vec()
                } else {
                    let kept: Vec<usize> = candidates
                        .iter()
                        .copied()
                        .filter(|_| rng.gen_range(0.0..1.0) >= *drop_prob)
                        .collect();
                    if kept.is_empty() {
                        candidates.to_vec()
                    } else {
                        kept
                    }
                };
                if epochs.last().is_none_or(|e: &Epoch| e.start < start) {
                    epochs.push(Epoch { start, available });
                }
            }
            epochs
        }
    })
}

/// One row per subtask of the simulation log.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub task_id: usize,
    pub subtask_index: usize,
    pub epoch_index: usize,
    pub bs_id: usize,
    pub true_comp_delay: f64,
    pub true_tx_delay: f64,
    pub true_energy: f64,
    pub obs_delay: f64,
    pub obs_energy: f64,
    pub handover: bool,
    /// Queue length at the start of the task; constant within a task.
    pub q_before: f64,
    pub v_in_effect: f64,
}

impl TraceRecord {
    pub const CSV_HEADER: &'static str = "task_id,subtask_index,epoch_index,bs_id,true_comp_delay,true_tx_delay,true_energy,obs_delay,obs_energy,handover,q_before,v_in_effect";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.task_id,
            self.subtask_index,
            self.epoch_index,
            self.bs_id,
            self.true_comp_delay,
            self.true_tx_delay,
            self.true_energy,
            self.obs_delay,
            self.obs_energy,
            self.handover as u8,
            self.q_before,
            self.v_in_effect,
        )
    }
}

/// Aggregated outcome of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub policy: PolicyKind,
    pub seed: u64,
    pub realization_id: u64,
    pub tasks: usize,
    /// Mean task delay including handover costs, seconds.
    pub avg_delay: f64,
    pub total_energy: f64,
    pub handover_total: u64,
    /// Tasks with at least one subtask over the deadline.
    pub deadline_violations: u64,
    /// Per-frame sums of task delays, seconds.
    pub per_frame_delay: Vec<f64>,
    /// Per-frame sums of task energies, joules.
    pub per_frame_energy: Vec<f64>,
    /// Lookahead plans, present when the policy is the oracle.
    pub oracle_frames: Option<Vec<FramePlan>>,
    /// Largest per-task learning regret, present for learning policies.
    pub max_task_regret: Option<f64>,
    /// Fraction of stop commitments that picked a suboptimal BS.
    pub suboptimal_rate: Option<f64>,
}

/// Trace and summary of a single simulation.
#[derive(Debug, Clone)]
pub struct SimRun {
    pub trace: Vec<TraceRecord>,
    pub summary: RunSummary,
}

/// Worst-case per-task energy attainable in the physical scenario: the
/// largest subtask count at the lowest in-coverage uplink rate (maximum
/// distance, maximum interference). Any realized task energy is below
/// this, which keeps the deviation constant U valid a priori.
pub fn worst_case_task_energy(config: &RunConfig) -> f64 {
    match &config.environment {
        Environment::Utilities(_) => 0.0,
        Environment::Physical => {
            let n = &config.network;
            let worst = scenario::BsState {
                bs_id: 0,
                cpu_alloc: n.max_cpu,
                channel_gain: scenario::path_loss_gain(n.coverage_radius, n),
                interference: match n.interference {
                    scenario::InterferenceModel::Off => 0.0,
                    scenario::InterferenceModel::Uniform => n.interference_max,
                },
            };
            let r_min = scenario::uplink_rate(&worst, n);
            config.workload.subtask_max as f64 * n.tx_power * config.workload.subtask_bits / r_min
        }
    }
}

pub fn run_simulation(config: &RunConfig) -> Result<SimRun, EngineError> {
    config.validate()?;
    let contexts = realize(config)?;
    let schedule = config.schedule()?;
    let factory = RngFactory::new(config.seed);
    let per_task_budget = config.per_task_budget();
    let u_const = constant_u(worst_case_task_energy(config), per_task_budget);
    let frames = config.frames();
    let frame_len = config.control.frame_length;

    // The oracle plans whole frames at once; everything else is per task.
    let oracle_plans: Option<Vec<FramePlan>> = if config.policy == PolicyKind::JstepOracle {
        let mut plans = Vec::with_capacity(frames);
        let frame_budget = config.energy_budget() / frames.max(1) as f64;
        for chunk in contexts.chunks(frame_len) {
            let frame: Vec<FrameTask> = chunk
                .iter()
                .map(|ctx| FrameTask {
                    subtasks: ctx.spec.subtask_count,
                    deadline: ctx.spec.subtask_deadline,
                    options: ctx.cost_list(),
                })
                .collect();
            plans.push(jstep_lookahead(&frame, frame_budget, config.oracle_deadline)?);
        }
        Some(plans)
    } else {
        None
    };

    struct TaskResult {
        decisions_bs: Vec<usize>,
        epoch_of: Vec<usize>,
        observed: Option<Vec<SubtaskCost>>,
        outcome: policies::TaskOutcome,
    }

    let mut queue = EnergyDeficitQueue::new(per_task_budget);
    let mut trace: Vec<TraceRecord> = Vec::new();
    let mut total_delay = 0.0;
    let mut total_energy = 0.0;
    let mut handover_total = 0u64;
    let mut deadline_violations = 0u64;
    let mut per_frame_delay = vec![0.0; frames];
    let mut per_frame_energy = vec![0.0; frames];
    let mut max_task_regret: Option<f64> = None;
    let mut commits = 0u64;
    let mut suboptimal_commits = 0u64;

    for ctx in &contexts {
        let m = ctx.spec.task_id;
        let (reset, v_raw) = control_for_task(m, &schedule)?;
        if reset {
            queue.reset();
        }
        // Normalized-utility arms carry no energy; the weighted cost is
        // the utility itself.
        let v = match config.environment {
            Environment::Utilities(_) => 1.0,
            Environment::Physical => v_raw,
        };
        let q_before = queue.length;

        let result = match config.policy {
            PolicyKind::EmmGsi | PolicyKind::DelayOptimal | PolicyKind::EnergyOptimal => {
                let costs = ctx.cost_list();
                let bs = match config.policy {
                    PolicyKind::EmmGsi => {
                        emm_gsi_decide(&costs, ctx.spec.subtask_deadline, v, q_before)?.0
                    }
                    PolicyKind::DelayOptimal => delay_optimal_decide(&costs)?,
                    _ => energy_optimal_decide(&costs)?,
                };
                let (decisions, outcome) = run_gsi_task(&ctx.spec, bs, ctx.costs[&bs]);
                TaskResult {
                    decisions_bs: decisions.iter().map(|d| d.bs_id).collect(),
                    epoch_of: vec![0; decisions.len()],
                    observed: None,
                    outcome,
                }
            }
            PolicyKind::JstepOracle => {
                let plans = oracle_plans.as_ref().unwrap();
                let plan = &plans[(m - 1) / frame_len];
                let bs = plan.assignments[(m - 1) % frame_len];
                let (decisions, outcome) = run_gsi_task(&ctx.spec, bs, ctx.costs[&bs]);
                TaskResult {
                    decisions_bs: decisions.iter().map(|d| d.bs_id).collect(),
                    epoch_of: vec![0; decisions.len()],
                    observed: None,
                    outcome,
                }
            }
            PolicyKind::EmmLsi | PolicyKind::EmmLsiV | PolicyKind::RadioLsi => {
                let mut env = ContextEnv {
                    costs: &ctx.costs,
                    observation: config.observation,
                    rng: factory.stream(Stream::Noise, m as u64),
                };
                let lsi = match config.policy {
                    PolicyKind::EmmLsi => {
                        if ctx.epochs.len() > 1 {
                            // A plain learner restarts whenever the set changes.
                            policies::emm_lsi_restart_run_task(
                                &ctx.spec,
                                &ctx.epochs,
                                &mut env,
                                v,
                                q_before,
                                &config.stop_rule,
                            )?
                        } else {
                            policies::emm_lsi_run_task(
                                &ctx.spec,
                                &ctx.candidates,
                                &mut env,
                                v,
                                q_before,
                                &config.stop_rule,
                            )?
                        }
                    }
                    PolicyKind::EmmLsiV => policies::emm_lsi_v_run_task(
                        &ctx.spec,
                        &ctx.epochs,
                        &mut env,
                        v,
                        q_before,
                        &config.stop_rule,
                    )?,
                    _ => policies::radio_lsi_run_task(
                        &ctx.spec,
                        &ctx.candidates,
                        &mut env,
                        &config.stop_rule,
                    )?,
                };
                let regret = lsi.regret.total();
                max_task_regret = Some(max_task_regret.map_or(regret, |r: f64| r.max(regret)));
                if let Some(arm) = lsi.committed {
                    commits += 1;
                    let last_available = &ctx.epochs.last().unwrap().available;
                    let z_of = |bs: usize| {
                        let c = ctx.costs[&bs];
                        lyapunov::weighted_cost(v, q_before, c.delay(), c.energy)
                    };
                    let best = last_available
                        .iter()
                        .map(|bs| z_of(*bs))
                        .fold(f64::INFINITY, f64::min);
                    if z_of(arm.bs_id) > best + 1e-15 {
                        suboptimal_commits += 1;
                    }
                }
                TaskResult {
                    decisions_bs: lsi.decisions.iter().map(|d| d.bs_id).collect(),
                    epoch_of: lsi.subtasks.iter().map(|s| s.epoch).collect(),
                    observed: Some(lsi.subtasks.iter().map(|s| s.observed).collect()),
                    outcome: lsi.outcome,
                }
            }
        };

        let mut prev: Option<usize> = None;
        for (i, bs) in result.decisions_bs.iter().enumerate() {
            let true_cost = ctx.costs[bs];
            let observed = result
                .observed
                .as_ref()
                .map_or(true_cost, |obs| obs[i]);
            let handover = prev.is_some_and(|p| p != *bs);
            prev = Some(*bs);
            trace.push(TraceRecord {
                task_id: m,
                subtask_index: i + 1,
                epoch_index: result.epoch_of[i],
                bs_id: *bs,
                true_comp_delay: true_cost.comp_delay,
                true_tx_delay: true_cost.tx_delay,
                true_energy: true_cost.energy,
                obs_delay: observed.delay(),
                obs_energy: observed.energy,
                handover,
                q_before,
                v_in_effect: v,
            });
        }

        let outcome = result.outcome;
        total_delay += outcome.total_delay;
        total_energy += outcome.total_energy;
        handover_total += outcome.handover_count;
        deadline_violations += outcome.deadline_violated as u64;
        let frame = (m - 1) / frame_len;
        per_frame_delay[frame] += outcome.total_delay;
        per_frame_energy[frame] += outcome.total_energy;

        // Validity of the deviation constant on this sample path.
        let y = outcome.total_energy - per_task_budget;
        assert!(
            0.5 * y * y <= u_const * (1.0 + 1e-9) + 1e-12,
            "task {m} energy {:.6} J violates the deviation constant U = {u_const:.6}",
            outcome.total_energy
        );

        queue = queue_update(queue, outcome.total_energy)?;
    }

    let summary = RunSummary {
        policy: config.policy,
        seed: config.seed,
        realization_id: config.realization_id(),
        tasks: contexts.len(),
        avg_delay: if contexts.is_empty() {
            0.0
        } else {
            total_delay / contexts.len() as f64
        },
        total_energy,
        handover_total,
        deadline_violations,
        per_frame_delay,
        per_frame_energy,
        oracle_frames: oracle_plans,
        max_task_regret,
        suboptimal_rate: (commits > 0).then(|| suboptimal_commits as f64 / commits as f64),
    };
    Ok(SimRun { trace, summary })
}

/// Mean, sample standard deviation, minimum and maximum of a metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

pub fn stats(values: &[f64]) -> Stats {
    if values.is_empty() {
        return Stats {
            mean: 0.0,
            std: 0.0,
            min: 0.0,
            max: 0.0,
        };
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Stats {
        mean,
        std: var.sqrt(),
        min: values.iter().cloned().fold(f64::INFINITY, f64::min),
        max: values.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    }
}

/// Per-seed summaries plus aggregate statistics over the replication set.
#[derive(Debug, Clone)]
pub struct Aggregate {
    pub summaries: Vec<RunSummary>,
    pub avg_delay: Stats,
    pub total_energy: Stats,
    pub handover_total: Stats,
}

/// Run the same configuration under each seed. Seeds must be distinct;
/// each run owns its RNG streams, so order is irrelevant.
pub fn replicate(config: &RunConfig, seeds: &[u64]) -> Result<Aggregate, EngineError> {
    let mut sorted = seeds.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != seeds.len() {
        return Err(EngineError::InvalidConfig("replication seeds must be distinct".into()));
    }
    let mut summaries = Vec::with_capacity(seeds.len());
    for seed in seeds {
        let run_config = RunConfig {
            seed: *seed,
            ..config.clone()
        };
        summaries.push(run_simulation(&run_config)?.summary);
    }
    let collect = |f: fn(&RunSummary) -> f64| -> Vec<f64> { summaries.iter().map(f).collect() };
    Ok(Aggregate {
        avg_delay: stats(&collect(|s| s.avg_delay)),
        total_energy: stats(&collect(|s| s.total_energy)),
        handover_total: stats(&collect(|s| s.handover_total as f64)),
        summaries,
    })
}

/// Outcome of checking one run against its guaranteed envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub delay_measured: f64,
    pub delay_bound: f64,
    pub energy_measured: f64,
    pub energy_bound: f64,
    /// Empirical per-task deviation used for learning policies (the
    /// maximum measured task regret), absent under full information.
    pub learning_dev: Option<f64>,
    /// Frames the oracle flagged infeasible, excluded from the check.
    pub excluded_frames: Vec<usize>,
    pub delay_pass: bool,
    pub energy_pass: bool,
}

impl BoundReport {
    pub fn all_pass(&self) -> bool {
        self.delay_pass && self.energy_pass
    }
}

const REL_TOL: f64 = 1e-9;

/// Check the measured run against its guaranteed delay/energy envelope,
/// with the oracle co-run on the identical realization supplying `g*_r`.
///
/// Frames the oracle could not solve feasibly are excluded from both the
/// measured averages and the bound sums, and listed in the report.
pub fn verify_bounds(
    config: &RunConfig,
    summary: &RunSummary,
    oracle: &RunSummary,
) -> Result<BoundReport, EngineError> {
    if summary.realization_id != oracle.realization_id {
        return Err(EngineError::RealizationMismatch);
    }
    let plans = oracle
        .oracle_frames
        .as_ref()
        .ok_or(EngineError::MissingOracleData)?;
    let schedule = config.schedule()?;
    let frames = config.frames();
    if plans.len() != frames || summary.per_frame_delay.len() != frames {
        return Err(EngineError::RealizationMismatch);
    }
    let excluded_frames: Vec<usize> = plans
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.feasible)
        .map(|(i, _)| i)
        .collect();
    let included: Vec<usize> = (0..frames).filter(|i| plans[*i].feasible).collect();
    if included.is_empty() {
        return Err(EngineError::InvalidConfig(
            "no feasible oracle frame to compare against".into(),
        ));
    }
    let learning_dev = summary.max_task_regret.filter(|_| config.policy.is_lsi());
    let j = config.control.frame_length;
    let inputs = BoundInputs {
        u_const: constant_u(worst_case_task_energy(config), config.per_task_budget()),
        j,
        r: included.len(),
        v_values: included.iter().map(|i| schedule.v_values[*i]).collect(),
        g_star: included.iter().map(|i| plans[*i].g_value).collect(),
        learning_dev: learning_dev.unwrap_or(0.0),
        energy_budget: config.energy_budget() * included.len() as f64 / frames as f64,
    };
    let (delay_bound, energy_bound) = lyapunov::guarantee_envelope(&inputs);
    let tasks_included = (included.len() * j) as f64;
    let delay_measured = included
        .iter()
        .map(|i| summary.per_frame_delay[*i])
        .sum::<f64>()
        / tasks_included;
    let energy_measured = included
        .iter()
        .map(|i| summary.per_frame_energy[*i])
        .sum::<f64>();
    Ok(BoundReport {
        delay_measured,
        delay_bound,
        energy_measured,
        energy_bound,
        learning_dev,
        excluded_frames,
        delay_pass: delay_measured <= delay_bound * (1.0 + REL_TOL),
        energy_pass: energy_measured <= energy_bound * (1.0 + REL_TOL),
    })
}
