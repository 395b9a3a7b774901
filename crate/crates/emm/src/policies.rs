//! Decision-making strategies: the drift-plus-penalty decider under global
//! state information, its learning variants under local state information,
//! three greedy benchmarks and the exact frame-lookahead oracle.
//!
//! With global state information (GSI) the per-task optimum is a single BS
//! and no intra-task handover ever pays off, so the GSI deciders return one
//! BS for all subtasks. With local state information (LSI) the runners
//! learn the best BS per subtask through the bandit machinery, paying the
//! handover cost whenever consecutive subtasks land on different BSs.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::bandit::{self, ArmKey, LearnerState, RegretLedger, StopRule};
use crate::lyapunov::weighted_cost;
use crate::scenario::{Epoch, SubtaskCost, TaskSpec};

#[derive(Debug, Error)]
pub enum PolicyError {
    #[error("candidate set is empty")]
    EmptyCandidates,
    #[error("invalid epoch schedule: {0}")]
    InvalidEpochs(String),
    #[error(transparent)]
    Bandit(#[from] bandit::BanditError),
}

/// One per-subtask association decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub task_id: usize,
    /// 1-based subtask index within the task.
    pub subtask_index: usize,
    pub bs_id: usize,
    /// True iff the BS differs from the previous subtask's BS.
    pub is_handover: bool,
}

/// Realized totals of one task.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaskOutcome {
    /// Sum of true subtask delays plus handover cost, seconds.
    pub total_delay: f64,
    /// Sum of true subtask energies, joules.
    pub total_energy: f64,
    pub handover_count: u64,
    /// True iff any subtask's true service delay exceeded the deadline.
    pub deadline_violated: bool,
}

/// Per-subtask environment record from a learning run: the serving BS, the
/// epoch in force and the observed cost. Subtasks served after the learner
/// committed carry the true cost, since no measurement is taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubtaskTrace {
    pub bs_id: usize,
    /// 0-based epoch index.
    pub epoch: usize,
    pub observed: SubtaskCost,
}

/// Result of running a learning policy over one task.
#[derive(Debug, Clone)]
pub struct LsiTaskResult {
    pub decisions: Vec<Decision>,
    pub subtasks: Vec<SubtaskTrace>,
    pub outcome: TaskOutcome,
    pub regret: RegretLedger,
    /// Arm the learner last committed to, if a stop rule fired.
    pub committed: Option<ArmKey>,
}

/// Source of true and observed subtask costs during one task.
///
/// True costs are constant per (task, BS); observations are fresh draws of
/// the noisy measurement on each call.
pub trait TaskEnv {
    fn true_cost(&self, bs_id: usize) -> SubtaskCost;
    fn observe(&mut self, bs_id: usize) -> SubtaskCost;
}

/// Synthetic arms that emit a configured per-BS utility as their cost,
/// bypassing the physical link model. Used for scripted-epoch experiments
/// and regret studies; pair with `v = 1, q = 0` so the weighted cost is
/// the utility itself.
pub struct UtilityArms<R: rand::Rng> {
    utilities: BTreeMap<usize, f64>,
    relative_half_width: f64,
    rng: R,
}

impl<R: rand::Rng> UtilityArms<R> {
    pub fn new(utilities: &[(usize, f64)], relative_half_width: f64, rng: R) -> Self {
        Self {
            utilities: utilities.iter().copied().collect(),
            relative_half_width,
            rng,
        }
    }
}

impl<R: rand::Rng> TaskEnv for UtilityArms<R> {
    fn true_cost(&self, bs_id: usize) -> SubtaskCost {
        SubtaskCost {
            comp_delay: self.utilities[&bs_id],
            tx_delay: 0.0,
            energy: 0.0,
        }
    }

    fn observe(&mut self, bs_id: usize) -> SubtaskCost {
        let v = self.relative_half_width;
        let u: f64 = self.rng.gen_range(-v..=v);
        SubtaskCost {
            comp_delay: (self.utilities[&bs_id] * (1.0 + u)).max(0.0),
            tx_delay: 0.0,
            energy: 0.0,
        }
    }
}

// ---------------------------------------------------------------------------
// GSI deciders
// ---------------------------------------------------------------------------

/// Drift-plus-penalty choice under GSI: the candidate minimizing
/// `v*d + q*e` among those meeting the per-subtask deadline.
///
/// `costs` pairs each candidate BS with its true per-subtask cost, in
/// ascending BS order (ties break to the smaller id). If no candidate
/// meets the deadline, the minimum-delay candidate is returned with the
/// violation flag set. All subtasks of the task then use this BS.
pub fn emm_gsi_decide(
    costs: &[(usize, SubtaskCost)],
    deadline: f64,
    v: f64,
    q: f64,
) -> Result<(usize, bool), PolicyError> {
    if costs.is_empty() {
        return Err(PolicyError::EmptyCandidates);
    }
    let feasible = costs.iter().filter(|(_, c)| c.delay() <= deadline);
    let best = argmin_by(feasible, |c| weighted_cost(v, q, c.delay(), c.energy));
    match best {
        Some(bs) => Ok((bs, false)),
        None => Ok((delay_optimal_decide(costs)?, true)),
    }
}

/// Benchmark: lowest true delay, energy ignored.
pub fn delay_optimal_decide(costs: &[(usize, SubtaskCost)]) -> Result<usize, PolicyError> {
    argmin_by(costs.iter(), |c| c.delay()).ok_or(PolicyError::EmptyCandidates)
}

/// Benchmark: lowest true energy, i.e. the best channel, delay ignored.
pub fn energy_optimal_decide(costs: &[(usize, SubtaskCost)]) -> Result<usize, PolicyError> {
    argmin_by(costs.iter(), |c| c.energy).ok_or(PolicyError::EmptyCandidates)
}

fn argmin_by<'a>(
    costs: impl Iterator<Item = &'a (usize, SubtaskCost)>,
    score: impl Fn(&SubtaskCost) -> f64,
) -> Option<usize> {
    let mut best: Option<(f64, usize)> = None;
    for (bs, cost) in costs {
        let s = score(cost);
        if best.is_none_or(|(b, _)| s < b) {
            best = Some((s, *bs));
        }
    }
    best.map(|(_, bs)| bs)
}

/// Expand a single-BS GSI choice into per-subtask decisions and totals.
pub fn run_gsi_task(
    task: &TaskSpec,
    bs_id: usize,
    cost: SubtaskCost,
) -> (Vec<Decision>, TaskOutcome) {
    let decisions = (1..=task.subtask_count)
        .map(|k| Decision {
            task_id: task.task_id,
            subtask_index: k,
            bs_id,
            is_handover: false,
        })
        .collect();
    let k = task.subtask_count as f64;
    let outcome = TaskOutcome {
        total_delay: k * cost.delay(),
        total_energy: k * cost.energy,
        handover_count: 0,
        deadline_violated: cost.delay() > task.subtask_deadline,
    };
    (decisions, outcome)
}

// ---------------------------------------------------------------------------
// LSI runners
// ---------------------------------------------------------------------------

/// UCB1 learning over one task with a fixed candidate set.
///
/// The first `|candidates|` subtasks connect to each BS once; the rest
/// follow the selection index until the stop rule fires, after which all
/// remaining subtasks go to the committed arm (charging one last handover
/// if it differs from the current BS). If the task has fewer subtasks than
/// candidates, initialization covers only the first arms in key order.
pub fn emm_lsi_run_task(
    task: &TaskSpec,
    candidates: &[usize],
    env: &mut impl TaskEnv,
    v: f64,
    q: f64,
    stop_rule: &StopRule,
) -> Result<LsiTaskResult, PolicyError> {
    let whole_task = [Epoch {
        start: 1,
        available: candidates.to_vec(),
    }];
    run_learning_task(task, &whole_task, env, v, q, stop_rule, Variant::Retain)
}

/// Volatile UCB1 learning over a task whose BS set changes between epochs.
///
/// Statistics of surviving arms persist across epochs; departed arms are
/// dead and excluded; a BS that reappears counts as a new arm. The stop
/// rule is scoped per epoch: any change of the BS set resumes learning.
pub fn emm_lsi_v_run_task(
    task: &TaskSpec,
    epochs: &[Epoch],
    env: &mut impl TaskEnv,
    v: f64,
    q: f64,
    stop_rule: &StopRule,
) -> Result<LsiTaskResult, PolicyError> {
    run_learning_task(task, epochs, env, v, q, stop_rule, Variant::Retain)
}

/// Plain UCB1 restarted from scratch at every epoch boundary. This is how
/// the non-volatile learner behaves when the BS set changes under it, and
/// the baseline the volatile variant is compared against.
pub fn emm_lsi_restart_run_task(
    task: &TaskSpec,
    epochs: &[Epoch],
    env: &mut impl TaskEnv,
    v: f64,
    q: f64,
    stop_rule: &StopRule,
) -> Result<LsiTaskResult, PolicyError> {
    run_learning_task(task, epochs, env, v, q, stop_rule, Variant::Restart)
}

/// Benchmark learner that only tracks the channel: the weighted cost is
/// the observed energy alone, so it converges to the best-channel BS
/// regardless of compute state.
pub fn radio_lsi_run_task(
    task: &TaskSpec,
    candidates: &[usize],
    env: &mut impl TaskEnv,
    stop_rule: &StopRule,
) -> Result<LsiTaskResult, PolicyError> {
    let whole_task = [Epoch {
        start: 1,
        available: candidates.to_vec(),
    }];
    run_learning_task(task, &whole_task, env, 0.0, 1.0, stop_rule, Variant::Retain)
}

#[derive(Clone, Copy, PartialEq)]
enum Variant {
    /// Volatile learner: keep surviving arms across epochs.
    Retain,
    /// Restart learning from scratch at every epoch boundary.
    Restart,
}

fn validate_epochs(epochs: &[Epoch], subtasks: usize) -> Result<(), PolicyError> {
    if epochs.is_empty() {
        return Err(PolicyError::InvalidEpochs("no epochs".into()));
    }
    if epochs[0].start != 1 {
        return Err(PolicyError::InvalidEpochs(format!(
            "first epoch must start at subtask 1, got {}",
            epochs[0].start
        )));
    }
    for pair in epochs.windows(2) {
        if pair[1].start <= pair[0].start {
            return Err(PolicyError::InvalidEpochs(
                "epoch starts must be strictly increasing".into(),
            ));
        }
    }
    if let Some(e) = epochs.iter().find(|e| e.available.is_empty()) {
        return Err(PolicyError::InvalidEpochs(format!(
            "epoch starting at {} has an empty BS set",
            e.start
        )));
    }
    if epochs.last().unwrap().start > subtasks {
        return Err(PolicyError::InvalidEpochs(
            "epoch starts beyond the last subtask".into(),
        ));
    }
    Ok(())
}

fn run_learning_task(
    task: &TaskSpec,
    epochs: &[Epoch],
    env: &mut impl TaskEnv,
    v: f64,
    q: f64,
    stop_rule: &StopRule,
    variant: Variant,
) -> Result<LsiTaskResult, PolicyError> {
    let k_m = task.subtask_count;
    validate_epochs(epochs, k_m)?;

    let mut choices: Vec<(ArmKey, SubtaskCost)> = Vec::with_capacity(k_m); // (arm, observed)
    let mut epoch_of: Vec<usize> = Vec::with_capacity(k_m);
    let mut optimal_z: Vec<f64> = Vec::with_capacity(k_m);
    let mut committed = None;

    let mut state = LearnerState {
        arms: BTreeMap::new(),
        completed: 0,
        beta: f64::NEG_INFINITY,
        stopped_on: None,
    };
    // Next appearance index per BS, for volatile arm identities.
    let mut next_appearance: BTreeMap<usize, u32> = BTreeMap::new();
    let mut live_key: BTreeMap<usize, ArmKey> = BTreeMap::new();

    for (ei, epoch) in epochs.iter().enumerate() {
        let epoch_end = epochs.get(ei + 1).map_or(k_m, |next| next.start - 1);
        let mut position = epoch.start - 1; // subtasks completed overall
        if position >= k_m {
            break;
        }
        let epoch_opt_z = epoch
            .available
            .iter()
            .map(|bs| {
                let c = env.true_cost(*bs);
                weighted_cost(v, q, c.delay(), c.energy)
            })
            .fold(f64::INFINITY, f64::min);

        if variant == Variant::Restart {
            state = LearnerState {
                arms: BTreeMap::new(),
                completed: epoch.start - 1,
                beta: f64::NEG_INFINITY,
                stopped_on: None,
            };
            live_key.clear();
        }

        // Resolve this epoch's BS ids to arm keys: surviving arms keep
        // their key, everything else appears as a fresh arm.
        let mut available: Vec<ArmKey> = Vec::with_capacity(epoch.available.len());
        for bs in &epoch.available {
            match live_key.get(bs) {
                Some(key) => available.push(*key),
                None => available.push(ArmKey {
                    bs_id: *bs,
                    appearance: *next_appearance.get(bs).unwrap_or(&0),
                }),
            }
        }
        // Initialization must fit into the remaining subtasks: drop excess
        // newcomers (largest keys) if the task is about to end.
        let fresh_planned = available
            .iter()
            .filter(|key| !state.arms.contains_key(key))
            .count();
        let room = epoch_end - position;
        if fresh_planned > room {
            let mut kept = 0;
            available.retain(|key| {
                if state.arms.contains_key(key) {
                    true
                } else {
                    kept += 1;
                    kept <= room
                }
            });
        }

        let mut init_observed: Vec<(ArmKey, SubtaskCost)> = Vec::new();
        let fresh = state.vucb1_epoch_start(
            &available,
            |key| {
                let obs = env.observe(key.bs_id);
                init_observed.push((key, obs));
                (obs.delay(), obs.energy)
            },
            v,
            q,
        )?;
        for key in &fresh {
            next_appearance.insert(key.bs_id, key.appearance + 1);
        }
        live_key = available.iter().map(|key| (key.bs_id, *key)).collect();

        for (key, obs) in init_observed {
            position += 1;
            choices.push((key, obs));
            epoch_of.push(ei);
            optimal_z.push(epoch_opt_z);
        }

        let mut check_stop = |state: &mut LearnerState, completed_in_epoch: usize| {
            let (stop, chosen) = state.stop_check(stop_rule, completed_in_epoch);
            if stop {
                if let Some(c) = chosen {
                    state.mark_stopped(c);
                    committed = Some(c);
                }
            }
        };
        check_stop(&mut state, position - (epoch.start - 1));

        while position < epoch_end {
            position += 1;
            match state.stopped_on {
                Some(chosen) => {
                    // Committed: no measurement is taken; the trace carries
                    // the true cost the user experiences.
                    choices.push((chosen, env.true_cost(chosen.bs_id)));
                }
                None => {
                    let arm = state.vucb1_select(position)?;
                    let obs = env.observe(arm.bs_id);
                    let z = weighted_cost(v, q, obs.delay(), obs.energy);
                    state.update(arm, z)?;
                    choices.push((arm, obs));
                    check_stop(&mut state, position - (epoch.start - 1));
                }
            }
            epoch_of.push(ei);
            optimal_z.push(epoch_opt_z);
        }
    }

    // Assemble decisions, totals and the regret ledger from true costs.
    let mut decisions = Vec::with_capacity(choices.len());
    let mut subtasks = Vec::with_capacity(choices.len());
    let mut true_z_trace = Vec::with_capacity(choices.len());
    let mut outcome = TaskOutcome {
        total_delay: 0.0,
        total_energy: 0.0,
        handover_count: 0,
        deadline_violated: false,
    };
    let mut prev_bs: Option<usize> = None;
    for (i, (arm, observed)) in choices.iter().enumerate() {
        let is_handover = prev_bs.is_some_and(|p| p != arm.bs_id);
        prev_bs = Some(arm.bs_id);
        let true_cost = env.true_cost(arm.bs_id);
        outcome.total_delay += true_cost.delay();
        outcome.total_energy += true_cost.energy;
        outcome.handover_count += is_handover as u64;
        outcome.deadline_violated |= true_cost.delay() > task.subtask_deadline;
        decisions.push(Decision {
            task_id: task.task_id,
            subtask_index: i + 1,
            bs_id: arm.bs_id,
            is_handover,
        });
        subtasks.push(SubtaskTrace {
            bs_id: arm.bs_id,
            epoch: epoch_of[i],
            observed: *observed,
        });
        true_z_trace.push((*arm, weighted_cost(v, q, true_cost.delay(), true_cost.energy)));
    }
    outcome.total_delay += task.handover_cost * outcome.handover_count as f64;
    let regret = bandit::regret_decompose(&true_z_trace, &optimal_z, v, task.handover_cost)?;

    Ok(LsiTaskResult {
        decisions,
        subtasks,
        outcome,
        regret,
        committed,
    })
}

// ---------------------------------------------------------------------------
// Frame-lookahead oracle
// ---------------------------------------------------------------------------

/// One task as seen by the oracle: per-candidate true per-subtask costs.
#[derive(Debug, Clone)]
pub struct FrameTask {
    pub subtasks: usize,
    /// Per-subtask deadline, seconds.
    pub deadline: f64,
    /// Candidate BS ids with their true per-subtask cost, ascending id.
    pub options: Vec<(usize, SubtaskCost)>,
}

impl FrameTask {
    fn task_delay(&self, option: usize) -> f64 {
        self.subtasks as f64 * self.options[option].1.delay()
    }

    fn task_energy(&self, option: usize) -> f64 {
        self.subtasks as f64 * self.options[option].1.energy
    }
}

/// Exact solution of one frame: per-task BS assignment, its average delay
/// and total energy, and whether the frame constraints could be met.
#[derive(Debug, Clone, PartialEq)]
pub struct FramePlan {
    /// Chosen BS id per task.
    pub assignments: Vec<usize>,
    /// Average task delay over the frame, seconds.
    pub g_value: f64,
    pub frame_energy: f64,
    /// False iff no assignment satisfied the energy budget and deadlines;
    /// the plan then holds the minimum-energy assignment instead.
    pub feasible: bool,
}

/// Minimize the frame's average delay subject to the frame energy budget
/// and per-subtask deadlines, by depth-first branch and bound over the
/// assignment tree with energy-infeasibility and delay lower-bound pruning.
///
/// Infeasibility is not an error: the minimum-energy assignment is
/// returned flagged, so budget sweeps keep running through regimes where
/// no feasible plan exists.
pub fn jstep_lookahead(
    frame: &[FrameTask],
    frame_budget: f64,
    enforce_deadline: bool,
) -> Result<FramePlan, PolicyError> {
    if frame.is_empty() || frame.iter().any(|t| t.options.is_empty()) {
        return Err(PolicyError::EmptyCandidates);
    }
    let admissible = admissible_options(frame, enforce_deadline);

    if admissible.iter().all(|opts| !opts.is_empty()) {
        // Suffix minima for pruning: the least delay/energy any completion
        // of the remaining tasks can add.
        let n = frame.len();
        let mut min_delay_suffix = vec![0.0; n + 1];
        let mut min_energy_suffix = vec![0.0; n + 1];
        for i in (0..n).rev() {
            let d = admissible[i]
                .iter()
                .map(|o| frame[i].task_delay(*o))
                .fold(f64::INFINITY, f64::min);
            let e = admissible[i]
                .iter()
                .map(|o| frame[i].task_energy(*o))
                .fold(f64::INFINITY, f64::min);
            min_delay_suffix[i] = d + min_delay_suffix[i + 1];
            min_energy_suffix[i] = e + min_energy_suffix[i + 1];
        }

        let mut search = Search {
            frame,
            admissible: &admissible,
            budget: frame_budget,
            min_delay_suffix: &min_delay_suffix,
            min_energy_suffix: &min_energy_suffix,
            best_delay: f64::INFINITY,
            best: None,
            path: Vec::with_capacity(n),
        };
        search.dfs(0, 0.0, 0.0);

        if let Some(options) = search.best {
            let total_delay: f64 = options
                .iter()
                .enumerate()
                .map(|(i, o)| frame[i].task_delay(*o))
                .sum();
            let frame_energy: f64 = options
                .iter()
                .enumerate()
                .map(|(i, o)| frame[i].task_energy(*o))
                .sum();
            return Ok(FramePlan {
                assignments: options
                    .iter()
                    .enumerate()
                    .map(|(i, o)| frame[i].options[*o].0)
                    .collect(),
                g_value: total_delay / frame.len() as f64,
                frame_energy,
                feasible: true,
            });
        }
    }

    Ok(min_energy_fallback(frame, &admissible))
}

fn admissible_options(frame: &[FrameTask], enforce_deadline: bool) -> Vec<Vec<usize>> {
    frame
        .iter()
        .map(|t| {
            (0..t.options.len())
                .filter(|i| !enforce_deadline || t.options[*i].1.delay() <= t.deadline)
                .collect()
        })
        .collect()
}

struct Search<'a> {
    frame: &'a [FrameTask],
    admissible: &'a [Vec<usize>],
    budget: f64,
    min_delay_suffix: &'a [f64],
    min_energy_suffix: &'a [f64],
    best_delay: f64,
    best: Option<Vec<usize>>,
    path: Vec<usize>,
}

impl Search<'_> {
    fn dfs(&mut self, i: usize, delay: f64, energy: f64) {
        // Pruning slack only widens the search; leaf acceptance below
        // stays exact so results match plain enumeration.
        if energy + self.min_energy_suffix[i] > self.budget * (1.0 + 1e-12) + 1e-300 {
            return;
        }
        if delay + self.min_delay_suffix[i] >= self.best_delay {
            return;
        }
        if i == self.frame.len() {
            if energy <= self.budget && delay < self.best_delay {
                self.best_delay = delay;
                self.best = Some(self.path.clone());
            }
            return;
        }
        for option in self.admissible[i].iter().copied() {
            self.path.push(option);
            self.dfs(
                i + 1,
                delay + self.frame[i].task_delay(option),
                energy + self.frame[i].task_energy(option),
            );
            self.path.pop();
        }
    }
}

/// Per-task minimum-energy assignment, preferring deadline-admissible
/// options where any exist. Always flagged infeasible.
fn min_energy_fallback(frame: &[FrameTask], admissible: &[Vec<usize>]) -> FramePlan {
    let mut assignments = Vec::with_capacity(frame.len());
    let mut total_delay = 0.0;
    let mut frame_energy = 0.0;
    for (i, task) in frame.iter().enumerate() {
        let pool: Vec<usize> = if admissible[i].is_empty() {
            (0..task.options.len()).collect()
        } else {
            admissible[i].clone()
        };
        let option = pool
            .into_iter()
            .min_by(|a, b| {
                task.task_energy(*a)
                    .partial_cmp(&task.task_energy(*b))
                    .unwrap()
            })
            .unwrap();
        assignments.push(task.options[option].0);
        total_delay += task.task_delay(option);
        frame_energy += task.task_energy(option);
    }
    FramePlan {
        assignments,
        g_value: total_delay / frame.len() as f64,
        frame_energy,
        feasible: false,
    }
}

/// Reference solver: plain enumeration of every assignment. Exponential;
/// only for verifying the branch-and-bound path on small frames.
pub fn jstep_enumerate(
    frame: &[FrameTask],
    frame_budget: f64,
    enforce_deadline: bool,
) -> Result<FramePlan, PolicyError> {
    if frame.is_empty() || frame.iter().any(|t| t.options.is_empty()) {
        return Err(PolicyError::EmptyCandidates);
    }
    let admissible = admissible_options(frame, enforce_deadline);
    let mut best: Option<(f64, f64, Vec<usize>)> = None;
    if admissible.iter().all(|opts| !opts.is_empty()) {
        let mut stack = vec![0usize; frame.len()];
        enumerate_rec(frame, &admissible, frame_budget, 0, &mut stack, &mut best);
    }
    match best {
        Some((delay, energy, options)) => Ok(FramePlan {
            assignments: options
                .iter()
                .enumerate()
                .map(|(i, o)| frame[i].options[*o].0)
                .collect(),
            g_value: delay / frame.len() as f64,
            frame_energy: energy,
            feasible: true,
        }),
        None => Ok(min_energy_fallback(frame, &admissible)),
    }
}

fn enumerate_rec(
    frame: &[FrameTask],
    admissible: &[Vec<usize>],
    budget: f64,
    i: usize,
    stack: &mut Vec<usize>,
    best: &mut Option<(f64, f64, Vec<usize>)>,
) {
    if i == frame.len() {
        let mut delay = 0.0;
        let mut energy = 0.0;
        for (t, o) in stack.iter().enumerate() {
            delay += frame[t].task_delay(*o);
            energy += frame[t].task_energy(*o);
        }
        if energy <= budget && best.as_ref().is_none_or(|(d, _, _)| delay < *d) {
            *best = Some((delay, energy, stack.clone()));
        }
        return;
    }
    for option in &admissible[i] {
        stack[i] = *option;
        enumerate_rec(frame, admissible, budget, i + 1, stack, best);
    }
}
