//! Volatile arms: a scripted three-epoch task in which BSs appear and
//! disappear mid-task. The volatile learner keeps surviving arms'
//! statistics across epoch boundaries; the baseline restarts from scratch.
//! Arms 3 and 4 appear in epoch 2 (one of them the new optimum), and epoch
//! 3 removes that optimum while adding a mediocre newcomer.

use emm::bandit::StopRule;
use emm::config::scripted_scenario;
use emm::policies::{emm_lsi_restart_run_task, emm_lsi_v_run_task, UtilityArms};
use emm::scenario::TaskSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let (utilities, epochs) = scripted_scenario();
    let arms: Vec<(usize, f64)> = utilities.iter().copied().enumerate().collect();
    println!("utilities: {utilities:?}");
    for (i, epoch) in epochs.iter().enumerate() {
        println!(
            "epoch {} from subtask {:>3}: BSs {:?}",
            i + 1,
            epoch.start,
            epoch.available.iter().map(|b| b + 1).collect::<Vec<_>>()
        );
    }

    let task = TaskSpec {
        task_id: 1,
        location: (0.0, 0.0),
        subtask_count: 120,
        subtask_bits: 1.0,
        intensity: 0.0,
        subtask_deadline: f64::INFINITY,
        handover_cost: 0.005,
    };
    let rule = StopRule::FixedCount { k_s: 20 };
    let seeds = 100u64;
    let mut volatile_curve = vec![0.0f64; 120];
    let mut restart_curve = vec![0.0f64; 120];
    let mut handovers = (0.0, 0.0);
    for seed in 0..seeds {
        let mut env = UtilityArms::new(&arms, 0.3, ChaCha8Rng::seed_from_u64(seed));
        let volatile = emm_lsi_v_run_task(&task, &epochs, &mut env, 1.0, 0.0, &rule).unwrap();
        let mut env = UtilityArms::new(&arms, 0.3, ChaCha8Rng::seed_from_u64(seed));
        let restart = emm_lsi_restart_run_task(&task, &epochs, &mut env, 1.0, 0.0, &rule).unwrap();
        let mut sums = (0.0, 0.0);
        for k in 0..120 {
            sums.0 += utilities[volatile.decisions[k].bs_id];
            sums.1 += utilities[restart.decisions[k].bs_id];
            volatile_curve[k] += sums.0 / (k + 1) as f64;
            restart_curve[k] += sums.1 / (k + 1) as f64;
        }
        handovers.0 += volatile.outcome.handover_count as f64;
        handovers.1 += restart.outcome.handover_count as f64;
    }

    println!("\nrunning average utility over {seeds} seeds (lower is better):");
    println!("{:>8} {:>10} {:>10}", "subtask", "volatile", "restart");
    for k in [10usize, 20, 40, 50, 60, 80, 90, 110, 120] {
        println!(
            "{k:>8} {:>10.4} {:>10.4}",
            volatile_curve[k - 1] / seeds as f64,
            restart_curve[k - 1] / seeds as f64
        );
    }
    println!(
        "\nhandovers per task: volatile {:.1}, restart {:.1}",
        handovers.0 / seeds as f64,
        handovers.1 / seeds as f64
    );
}
