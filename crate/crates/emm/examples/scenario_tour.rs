//! Tour of the physical models: grid layout, coverage, link budget and
//! per-subtask offloading costs for one realized task.

use emm::config::default_config;
use emm::engine::realize;
use emm::scenario::{generate_network, path_loss_gain, uplink_rate, BsState};

fn main() {
    let config = default_config();
    let network = &config.network;

    let positions = generate_network(network).unwrap();
    println!(
        "{} BSs on a {:.0} m grid pitch over a {:.0} m square",
        positions.len(),
        network.area_side / (positions.len() as f64).sqrt(),
        network.area_side
    );

    println!("\npath loss / rate vs distance (no interference):");
    for d in [10.0, 50.0, 100.0, 150.0] {
        let gain = path_loss_gain(d, network);
        let state = BsState {
            bs_id: 0,
            cpu_alloc: network.max_cpu,
            channel_gain: gain,
            interference: 0.0,
        };
        println!(
            "  {d:5.0} m: gain {gain:.3e}, uplink {:.1} Mbit/s",
            uplink_rate(&state, network) / 1e6
        );
    }

    // One realized task: frozen hidden state per candidate BS.
    let contexts = realize(&config).unwrap();
    let ctx = &contexts[0];
    println!(
        "\ntask {}: {} subtasks of {:.2} Mbit at {:.0} cycles/bit, user at ({:.0}, {:.0})",
        ctx.spec.task_id,
        ctx.spec.subtask_count,
        ctx.spec.subtask_bits / 1e6,
        ctx.spec.intensity,
        ctx.spec.location.0,
        ctx.spec.location.1
    );
    println!("candidates and true per-subtask costs:");
    println!(
        "  {:>4} {:>12} {:>12} {:>12} {:>10}",
        "bs", "compute ms", "uplink ms", "energy mJ", "deadline"
    );
    for bs in &ctx.candidates {
        let cost = ctx.costs[bs];
        println!(
            "  {bs:>4} {:>12.2} {:>12.2} {:>12.3} {:>10}",
            cost.comp_delay * 1e3,
            cost.tx_delay * 1e3,
            cost.energy * 1e3,
            if cost.delay() <= ctx.spec.subtask_deadline {
                "ok"
            } else {
                "missed"
            }
        );
    }
}
