//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the measurements (release mode recommended for speed).
//!
//! Every tolerance is pinned here, in code. The guarantee checks are exact
//! inequalities up to a 1e-9 relative numerical tolerance; trend checks are
//! evaluated on fixed seed sets, so outcomes are deterministic.

use emm::bandit::{learning_regret_bound, ArmKey, LearnerState, StopRule};
use emm::config::{default_config, scripted_scenario};
use emm::engine::{
    replicate, run_simulation, stats, verify_bounds, Environment, PolicyKind, RunConfig,
};
use emm::experiment::{run_experiment, ExperimentSpec, SweepVariable};
use emm::policies::{
    emm_lsi_restart_run_task, emm_lsi_run_task, emm_lsi_v_run_task, jstep_enumerate,
    jstep_lookahead, FrameTask, UtilityArms,
};
use emm::scenario::{SubtaskCost, TaskSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const REL_TOL: f64 = 1e-9;

/// Spearman rank correlation with average ranks for ties.
fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let rx = average_ranks(xs);
    let ry = average_ranks(ys);
    pearson(&rx, &ry)
}

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|a, b| values[*a].partial_cmp(&values[*b]).unwrap());
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for k in i..=j {
            ranks[order[k]] = rank;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx).powi(2);
        vy += (y - my).powi(2);
    }
    cov / (vx.sqrt() * vy.sqrt())
}

/// Default scenario with the trip shortened to `tasks` and the battery
/// scaled in proportion, keeping the per-task budget at its full-length
/// value.
fn scaled_config(tasks: usize) -> RunConfig {
    let mut config = default_config();
    let scale = tasks as f64 / config.workload.tasks as f64;
    config.workload.battery *= scale;
    config.workload.tasks = tasks;
    config
}

#[test]
fn acceptance_01_guaranteed_envelope_small_instance() {
    // M = 20, J = 5, R = 4, 3x3 grid on a 300 m area, full information,
    // V = 0.01, energy budget alpha*B = 16.4 J.
    let mut config = scaled_config(20);
    config.network.area_side = 300.0;
    config.network.bs_count = 9;
    config.policy = PolicyKind::EmmGsi;
    config.seed = 1;
    assert!((config.energy_budget() - 16.4).abs() < 1e-12);

    let run = run_simulation(&config).unwrap();
    let oracle = run_simulation(&RunConfig {
        policy: PolicyKind::JstepOracle,
        ..config.clone()
    })
    .unwrap();
    let plans = oracle.summary.oracle_frames.as_ref().unwrap();
    assert!(
        plans.iter().all(|p| p.feasible),
        "criterion 1 requires a realization with all frames feasible"
    );
    let report = verify_bounds(&config, &run.summary, &oracle.summary).unwrap();
    assert!(
        report.delay_measured <= report.delay_bound * (1.0 + REL_TOL),
        "criterion 1 FAIL: delay {} > bound {}",
        report.delay_measured,
        report.delay_bound
    );
    assert!(
        report.energy_measured <= report.energy_bound * (1.0 + REL_TOL),
        "criterion 1 FAIL: energy {} > bound {}",
        report.energy_measured,
        report.energy_bound
    );
    println!(
        "criterion 1 PASS: delay {:.4} <= {:.4}, energy {:.4} <= {:.4} (4/4 frames feasible)",
        report.delay_measured, report.delay_bound, report.energy_measured, report.energy_bound
    );
}

#[test]
fn acceptance_02_oracle_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..200 {
        let tasks = rng.gen_range(1..=5);
        let frame: Vec<FrameTask> = (0..tasks)
            .map(|_| {
                let options = (0..rng.gen_range(1..=4))
                    .map(|bs| {
                        (
                            bs,
                            SubtaskCost {
                                comp_delay: rng.gen_range(0.01..1.0),
                                tx_delay: rng.gen_range(0.0..0.3),
                                energy: rng.gen_range(0.01..1.0),
                            },
                        )
                    })
                    .collect();
                FrameTask {
                    subtasks: rng.gen_range(1..=5),
                    deadline: rng.gen_range(0.2..1.5),
                    options,
                }
            })
            .collect();
        let budget = rng.gen_range(0.1..10.0);
        let fast = jstep_lookahead(&frame, budget, true).unwrap();
        let slow = jstep_enumerate(&frame, budget, true).unwrap();
        assert_eq!(
            fast.feasible, slow.feasible,
            "criterion 2 FAIL: feasibility mismatch in case {case}"
        );
        assert!(
            (fast.g_value - slow.g_value).abs() <= 1e-12 * slow.g_value.max(1.0),
            "criterion 2 FAIL: g {} vs {} in case {case}",
            fast.g_value,
            slow.g_value
        );
    }
    println!("criterion 2 PASS: branch-and-bound equals enumeration on 200/200 random frames");
}

#[test]
fn acceptance_03_control_weight_tradeoff() {
    let seeds: Vec<u64> = (1..=10).collect();
    let budget = 82.0; // 410 J scaled by M = 100/500
    let v_grid: Vec<f64> = (0..9).map(|i| 10f64.powf(-4.0 + 5.0 * i as f64 / 8.0)).collect();
    let mut delay_means = Vec::new();
    let mut energy_means = Vec::new();
    for v in &v_grid {
        let mut config = scaled_config(100);
        config.policy = PolicyKind::EmmGsi;
        config.control.v_values = vec![*v];
        let agg = replicate(&config, &seeds).unwrap();
        delay_means.push(agg.avg_delay.mean);
        energy_means.push(agg.total_energy.mean);
    }
    let rho_delay = spearman(&v_grid, &delay_means);
    let rho_energy = spearman(&v_grid, &energy_means);
    assert!(
        rho_delay <= -0.9,
        "criterion 3 FAIL: Spearman(delay, V) = {rho_delay:.3} > -0.9 ({delay_means:?})"
    );
    assert!(
        rho_energy >= 0.9,
        "criterion 3 FAIL: Spearman(energy, V) = {rho_energy:.3} < 0.9 ({energy_means:?})"
    );
    assert!(
        energy_means[0] < budget && budget < energy_means[8],
        "criterion 3 FAIL: energy [{:.2}, {:.2}] does not cross the {budget} J budget",
        energy_means[0],
        energy_means[8]
    );
    println!(
        "criterion 3 PASS: Spearman(delay) = {rho_delay:.3}, Spearman(energy) = {rho_energy:.3}, energy {:.2} -> {:.2} J crosses {budget} J",
        energy_means[0], energy_means[8]
    );
}

/// The fixed five-arm regret instance: normalized gaps 0.1..0.4, mild
/// observation noise so the running-max normalizer stays near the true
/// scale, and the standard handover cost.
const REGRET_ARMS: [f64; 5] = [0.02, 0.12, 0.22, 0.32, 0.42];
const REGRET_DELTAS: [f64; 4] = [0.1, 0.2, 0.3, 0.4];
const REGRET_NOISE: f64 = 0.1;
const REGRET_HANDOVER: f64 = 0.005;

/// Mean cumulative total regret (sampling + handover) at each checkpoint,
/// over 100 seeded continuous-learning runs of a 10^4-subtask task.
fn regret_at_checkpoints(checkpoints: &[usize]) -> Vec<f64> {
    let horizon = *checkpoints.iter().max().unwrap();
    let arms: Vec<(usize, f64)> = REGRET_ARMS.iter().copied().enumerate().collect();
    let keys: Vec<ArmKey> = (0..arms.len()).map(ArmKey::first).collect();
    let optimal = REGRET_ARMS[0];
    let seeds = 100u64;
    let mut totals = vec![0.0f64; checkpoints.len()];
    for seed in 0..seeds {
        let mut env = UtilityArms::new(&arms, REGRET_NOISE, ChaCha8Rng::seed_from_u64(seed));
        use emm::policies::TaskEnv;
        let mut state = LearnerState::ucb1_init(
            &keys,
            |key| {
                let o = env.observe(key.bs_id);
                (o.delay(), o.energy)
            },
            1.0,
            0.0,
        )
        .unwrap();
        let mut regret = 0.0;
        let mut prev = keys[keys.len() - 1];
        for (i, key) in keys.iter().enumerate() {
            regret += REGRET_ARMS[key.bs_id] - optimal;
            if i > 0 && key.bs_id != prev.bs_id {
                regret += REGRET_HANDOVER;
            }
            prev = *key;
        }
        for k in keys.len() + 1..=horizon {
            let arm = state.ucb1_select(k).unwrap();
            let obs = env.observe(arm.bs_id);
            state.update(arm, obs.delay()).unwrap();
            regret += REGRET_ARMS[arm.bs_id] - optimal;
            if arm.bs_id != prev.bs_id {
                regret += REGRET_HANDOVER;
            }
            prev = arm;
            if let Some(ci) = checkpoints.iter().position(|c| *c == k) {
                totals[ci] += regret;
            }
        }
    }
    totals.iter().map(|t| t / seeds as f64).collect()
}

#[test]
fn acceptance_04_regret_bound_at_checkpoints() {
    let checkpoints = [100usize, 1000, 10_000];
    let measured = regret_at_checkpoints(&checkpoints);
    for (k, regret) in checkpoints.iter().zip(&measured) {
        let bound = learning_regret_bound(*k, &REGRET_DELTAS, 1.0, 1.0, REGRET_HANDOVER).unwrap();
        assert!(
            *regret <= bound,
            "criterion 4 FAIL: mean regret {regret:.2} exceeds bound {bound:.2} at K = {k}"
        );
        println!("criterion 4 PASS: mean regret {regret:.2} <= bound {bound:.2} at K = {k}");
    }
}

#[test]
fn acceptance_04_regret_doubling_increments_non_increasing() {
    // Doubling increments of the mean cumulative regret, anchored at the
    // bound checkpoints that fit the 10^4 horizon.
    let checkpoints = [100usize, 200, 1000, 2000];
    let r = regret_at_checkpoints(&checkpoints);
    let d100 = r[1] - r[0];
    let d1000 = r[3] - r[2];
    println!(
        "criterion 4 increments: regret(200)-regret(100) = {d100:.2}, regret(2000)-regret(1000) = {d1000:.2}"
    );
    // Known-red check: the index policy's exploration transient for the
    // smallest gap (0.1) spans the whole 10^4 horizon, so early doubling
    // windows are cheaper than later ones and the increment sequence rises
    // toward its logarithmic plateau instead of falling. The growth-rate
    // claim this check targets is established by the bound inequality
    // above; the increment form of it cannot hold at this horizon.
    assert!(
        d100 >= d1000,
        "criterion 4 FAIL (expected): increment over [100,200] ({d100:.2}) is below the \
         increment over [1000,2000] ({d1000:.2}); doubling increments rise through the \
         exploration transient of the 0.1-gap arm and only plateau near the end of the \
         10^4-subtask horizon, so they cannot be non-increasing here"
    );
}

#[test]
fn acceptance_05_noiseless_identification() {
    let mut hits = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let utilities: Vec<(usize, f64)> =
            (0..5).map(|bs| (bs, rng.gen_range(0.2..0.9))).collect();
        let best = utilities
            .iter()
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap()
            .0;
        let task = TaskSpec {
            task_id: 1,
            location: (0.0, 0.0),
            subtask_count: 40,
            subtask_bits: 1.0,
            intensity: 0.0,
            subtask_deadline: f64::INFINITY,
            handover_cost: 0.005,
        };
        let mut env = UtilityArms::new(&utilities, 0.0, ChaCha8Rng::seed_from_u64(seed));
        let result = emm_lsi_run_task(
            &task,
            &[0, 1, 2, 3, 4],
            &mut env,
            1.0,
            0.0,
            &StopRule::FixedCount { k_s: 5 },
        )
        .unwrap();
        if result.committed == Some(ArmKey::first(best)) {
            hits += 1;
        }
    }
    assert_eq!(
        hits, 100,
        "criterion 5 FAIL: only {hits}/100 noiseless runs picked the optimum"
    );
    println!("criterion 5 PASS: noiseless commitment found the optimum in 100/100 seeds");
}

#[test]
fn acceptance_06_learning_horizon_sweep() {
    // Eight near-tied arms under 30% noise: the regime where the stop
    // horizon trades commit errors against continued-learning costs.
    let seeds: Vec<u64> = (1..=10).collect();
    let arms: Vec<f64> = (0..8).map(|i| (50 + 3 * i) as f64 / 100.0).collect();
    let ks_grid = [8usize, 12, 16, 20, 30, 40, 60, 80];
    let mut delay_means = Vec::new();
    let mut subopt_means = Vec::new();
    let mut subopt_ses = Vec::new();
    for ks in ks_grid {
        let mut config = scaled_config(100);
        config.environment = Environment::Utilities(arms.clone());
        config.policy = PolicyKind::EmmLsi;
        config.stop_rule = StopRule::FixedCount { k_s: ks };
        let agg = replicate(&config, &seeds).unwrap();
        let rates: Vec<f64> = agg
            .summaries
            .iter()
            .filter_map(|s| s.suboptimal_rate)
            .collect();
        let rate = stats(&rates);
        delay_means.push(agg.avg_delay.mean);
        subopt_means.push(rate.mean);
        subopt_ses.push(rate.std / (rates.len() as f64).sqrt());
    }
    // Non-increasing suboptimal-commit probability, allowing at most one
    // adjacent inversion and only within its 95% confidence interval.
    let mut inversions = 0;
    for i in 0..ks_grid.len() - 1 {
        if subopt_means[i + 1] > subopt_means[i] {
            inversions += 1;
            let ci = 1.96 * (subopt_ses[i].powi(2) + subopt_ses[i + 1].powi(2)).sqrt();
            assert!(
                subopt_means[i + 1] - subopt_means[i] <= ci,
                "criterion 6 FAIL: inversion at K_s = {} exceeds the 95% CI ({:.4} > {:.4})",
                ks_grid[i + 1],
                subopt_means[i + 1] - subopt_means[i],
                ci
            );
        }
    }
    assert!(
        inversions <= 1,
        "criterion 6 FAIL: {inversions} inversions in the suboptimal-probability trend {subopt_means:?}"
    );
    // Interior minimum: the K_s = 20 delay beats both endpoints.
    let at = |ks: usize| delay_means[ks_grid.iter().position(|k| *k == ks).unwrap()];
    assert!(
        at(20) <= at(8) && at(20) <= at(80),
        "criterion 6 FAIL: delay at K_s = 20 ({:.4}) not below endpoints ({:.4}, {:.4})",
        at(20),
        at(8),
        at(80)
    );
    println!(
        "criterion 6 PASS: suboptimal trend {subopt_means:?} ({inversions} CI inversions), delay {:.4} (K_s=20) <= {:.4} (K_s=8) and {:.4} (K_s=80)",
        at(20),
        at(8),
        at(80)
    );
}

#[test]
fn acceptance_07_volatile_vs_restart_on_scripted_epochs() {
    let (utilities, epochs) = scripted_scenario();
    let arms: Vec<(usize, f64)> = utilities.iter().copied().enumerate().collect();
    let rule = StopRule::FixedCount { k_s: 20 };
    let task = TaskSpec {
        task_id: 1,
        location: (0.0, 0.0),
        subtask_count: 120,
        subtask_bits: 1.0,
        intensity: 0.0,
        subtask_deadline: f64::INFINITY,
        handover_cost: 0.005,
    };
    let seeds = 100u64;
    let mut volatile_avg = vec![0.0f64; 120];
    let mut restart_avg = vec![0.0f64; 120];
    let mut volatile_handovers = 0.0;
    let mut restart_handovers = 0.0;
    for seed in 0..seeds {
        let mut env = UtilityArms::new(&arms, 0.3, ChaCha8Rng::seed_from_u64(seed));
        let volatile = emm_lsi_v_run_task(&task, &epochs, &mut env, 1.0, 0.0, &rule).unwrap();
        let mut env = UtilityArms::new(&arms, 0.3, ChaCha8Rng::seed_from_u64(seed));
        let restart = emm_lsi_restart_run_task(&task, &epochs, &mut env, 1.0, 0.0, &rule).unwrap();
        let mut sum_v = 0.0;
        let mut sum_r = 0.0;
        for k in 0..120 {
            sum_v += utilities[volatile.decisions[k].bs_id];
            sum_r += utilities[restart.decisions[k].bs_id];
            volatile_avg[k] += sum_v / (k + 1) as f64;
            restart_avg[k] += sum_r / (k + 1) as f64;
        }
        volatile_handovers += volatile.outcome.handover_count as f64;
        restart_handovers += restart.outcome.handover_count as f64;
    }
    let n = seeds as f64;
    for k in [60usize, 110] {
        assert!(
            volatile_avg[k - 1] / n < restart_avg[k - 1] / n,
            "criterion 7 FAIL: volatile running utility {:.4} not below restart {:.4} at subtask {k}",
            volatile_avg[k - 1] / n,
            restart_avg[k - 1] / n
        );
    }
    assert!(
        volatile_handovers < restart_handovers,
        "criterion 7 FAIL: volatile handovers {volatile_handovers} not below restart {restart_handovers}"
    );
    println!(
        "criterion 7 PASS: running utility at 60: {:.4} < {:.4}; at 110: {:.4} < {:.4}; handovers {:.1} < {:.1}",
        volatile_avg[59] / n,
        restart_avg[59] / n,
        volatile_avg[109] / n,
        restart_avg[109] / n,
        volatile_handovers / n,
        restart_handovers / n
    );
}

#[test]
fn acceptance_08_policy_suite_ordering() {
    // Six policies on one shared realization per seed. Delay means are
    // compared on the frames the oracle solves feasibly (its delay is a
    // meaningful optimum only there); energy totals over the whole run.
    let seeds: Vec<u64> = (11..=20).collect();
    let budget = 82.0;
    let mut delay = [0.0f64; 4]; // delay-opt, oracle, gsi, lsi over feasible frames
    let mut feasible_tasks = 0.0;
    let mut energy_sums = vec![0.0f64; PolicyKind::ALL.len()];
    let mut bounds_checked = 0;
    for seed in &seeds {
        let mut base = scaled_config(100);
        base.seed = *seed;
        let run_under = |policy: PolicyKind| {
            run_simulation(&RunConfig {
                policy,
                ..base.clone()
            })
            .unwrap()
            .summary
        };
        let summaries: Vec<_> = PolicyKind::ALL.iter().map(|p| run_under(*p)).collect();
        for (i, summary) in summaries.iter().enumerate() {
            energy_sums[i] += summary.total_energy;
        }
        let oracle = &summaries[0];
        let plans = oracle.oracle_frames.as_ref().unwrap();
        let pick = |kind: PolicyKind| {
            summaries
                .iter()
                .find(|s| s.policy == kind)
                .expect("policy present")
        };
        let gsi = pick(PolicyKind::EmmGsi);
        let lsi = pick(PolicyKind::EmmLsi);
        let dopt = pick(PolicyKind::DelayOptimal);
        for (i, plan) in plans.iter().enumerate() {
            if plan.feasible {
                feasible_tasks += base.control.frame_length as f64;
                delay[0] += dopt.per_frame_delay[i];
                delay[1] += oracle.per_frame_delay[i];
                delay[2] += gsi.per_frame_delay[i];
                delay[3] += lsi.per_frame_delay[i];
            }
        }
        // Budget clause: EMM policies stay within the scaled budget plus
        // the guaranteed deviation term, verified on this realization.
        for policy in [PolicyKind::EmmGsi, PolicyKind::EmmLsi] {
            let config = RunConfig {
                policy,
                ..base.clone()
            };
            let report = verify_bounds(&config, pick(policy), oracle).unwrap();
            assert!(
                report.energy_pass && report.delay_pass,
                "criterion 8 FAIL: {} bound violated on seed {seed}: {report:?}",
                policy.name()
            );
            bounds_checked += 1;
        }
    }
    let means: Vec<f64> = delay.iter().map(|d| d / feasible_tasks).collect();
    assert!(
        means[0] <= means[1] && means[1] <= means[2] && means[2] <= means[3],
        "criterion 8 FAIL: delay ordering broken: delay-opt {:.4}, oracle {:.4}, emm-gsi {:.4}, emm-lsi {:.4}",
        means[0],
        means[1],
        means[2],
        means[3]
    );
    let energy_opt_index = PolicyKind::ALL
        .iter()
        .position(|p| *p == PolicyKind::EnergyOptimal)
        .unwrap();
    for (i, policy) in PolicyKind::ALL.iter().enumerate() {
        assert!(
            energy_sums[energy_opt_index] <= energy_sums[i] + 1e-9,
            "criterion 8 FAIL: energy-optimal ({:.2}) not minimal vs {} ({:.2})",
            energy_sums[energy_opt_index] / 10.0,
            policy.name(),
            energy_sums[i] / 10.0
        );
    }
    println!(
        "criterion 8 PASS: delay chain {:.4} <= {:.4} <= {:.4} <= {:.4} on feasible frames; energy-optimal minimal at {:.2} J; {bounds_checked} budget envelopes hold (budget {budget} J)",
        means[0],
        means[1],
        means[2],
        means[3],
        energy_sums[energy_opt_index] / 10.0
    );
}

#[test]
fn acceptance_09_trace_determinism() {
    let mut base = scaled_config(20);
    base.policy = PolicyKind::EmmLsi;
    base.seed = 5;
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut contents = Vec::new();
    for dir in &dirs {
        let spec = ExperimentSpec {
            base: base.clone(),
            variable: SweepVariable::Policy,
            values: vec!["emm-lsi".into()],
            seeds: vec![5],
            out_dir: dir.path().to_path_buf(),
        };
        run_experiment(&spec).unwrap();
        contents.push(std::fs::read(dir.path().join("trace_emm-lsi_5.csv")).unwrap());
    }
    assert_eq!(
        contents[0], contents[1],
        "criterion 9 FAIL: trace files differ between identical runs"
    );
    println!(
        "criterion 9 PASS: identical runs produced byte-identical trace files ({} bytes)",
        contents[0].len()
    );
}

#[test]
fn acceptance_10_accounting_identities() {
    use emm::lyapunov::{control_for_task, queue_update, EnergyDeficitQueue};
    use std::collections::BTreeMap;

    let policies = [
        PolicyKind::EmmGsi,
        PolicyKind::EmmLsi,
        PolicyKind::EmmLsiV,
        PolicyKind::DelayOptimal,
        PolicyKind::EnergyOptimal,
        PolicyKind::RadioLsi,
    ];
    let mut checked = 0;
    for case in 0..1000u64 {
        let mut config = scaled_config(4);
        config.network.area_side = 300.0;
        config.network.bs_count = 9;
        config.control.frame_length = 2;
        config.workload.subtask_min = 5;
        config.workload.subtask_max = 10;
        config.policy = policies[case as usize % policies.len()];
        if config.policy == PolicyKind::EmmLsiV && case % 2 == 0 {
            config.epochs = emm::engine::EpochMode::Random {
                epochs_per_task: 2,
                drop_prob: 0.3,
            };
        }
        config.seed = case;
        let run = run_simulation(&config).unwrap();

        let mut task_delay: BTreeMap<usize, f64> = BTreeMap::new();
        let mut task_energy: BTreeMap<usize, f64> = BTreeMap::new();
        let mut task_q: BTreeMap<usize, f64> = BTreeMap::new();
        let mut handovers = 0u64;
        for r in &run.trace {
            *task_delay.entry(r.task_id).or_insert(0.0) += r.true_comp_delay + r.true_tx_delay;
            *task_energy.entry(r.task_id).or_insert(0.0) += r.true_energy;
            if r.handover {
                handovers += 1;
                *task_delay.get_mut(&r.task_id).unwrap() += config.workload.handover_cost;
            }
            task_q.insert(r.task_id, r.q_before);
        }
        let total_delay: f64 = task_delay.values().sum();
        let avg = total_delay / run.summary.tasks as f64;
        let energy: f64 = task_energy.values().sum();
        let rel = |a: f64, b: f64| (a - b).abs() <= REL_TOL * b.abs().max(1e-12);
        assert!(
            rel(avg, run.summary.avg_delay),
            "criterion 10 FAIL: delay recomputation {avg} vs {} (case {case})",
            run.summary.avg_delay
        );
        assert!(
            rel(energy, run.summary.total_energy),
            "criterion 10 FAIL: energy recomputation {energy} vs {} (case {case})",
            run.summary.total_energy
        );
        assert_eq!(handovers, run.summary.handover_total, "case {case}");

        // Queue replay from per-task energies reproduces every q_before.
        let schedule = config.schedule().unwrap();
        let mut queue = EnergyDeficitQueue::new(config.per_task_budget());
        for m in 1..=run.summary.tasks {
            let (reset, _) = control_for_task(m, &schedule).unwrap();
            if reset {
                queue.reset();
            }
            assert!(
                (queue.length - task_q[&m]).abs() <= REL_TOL * task_q[&m].max(1e-12),
                "criterion 10 FAIL: queue replay diverged at task {m} (case {case})"
            );
            queue = queue_update(queue, task_energy[&m]).unwrap();
        }
        checked += 1;
    }
    println!("criterion 10 PASS: accounting identities and queue replay hold on {checked}/1000 random traces");
}
