//! Impact of the energy capping fraction alpha: with a loose budget the
//! drift policy matches the delay-optimal benchmark, with a tight one it
//! throttles toward the cheap arms and delay grows.

use emm::config::default_config;
use emm::engine::{replicate, PolicyKind};

fn main() {
    let seeds: Vec<u64> = (1..=10).collect();
    let mut base = default_config();
    base.workload.battery *= 100.0 / base.workload.tasks as f64;
    base.workload.tasks = 100;

    let mut delay_optimal = base.clone();
    delay_optimal.policy = PolicyKind::DelayOptimal;
    let reference = replicate(&delay_optimal, &seeds).unwrap();
    println!(
        "delay-optimal reference: delay {:.4} s, energy {:.2} J\n",
        reference.avg_delay.mean, reference.total_energy.mean
    );

    println!(
        "{:>6} {:>10} {:>12} {:>12} {:>16}",
        "alpha", "budget J", "delay s", "energy J", "gap to optimal"
    );
    for alpha in [0.1, 0.2, 0.3, 0.41, 0.5, 0.6, 0.8, 1.0] {
        let mut config = base.clone();
        config.policy = PolicyKind::EmmGsi;
        config.workload.alpha = alpha;
        let agg = replicate(&config, &seeds).unwrap();
        println!(
            "{:>6.2} {:>10.1} {:>12.4} {:>12.2} {:>15.1}%",
            alpha,
            config.energy_budget(),
            agg.avg_delay.mean,
            agg.total_energy.mean,
            100.0 * (agg.avg_delay.mean / reference.avg_delay.mean - 1.0)
        );
    }
}
