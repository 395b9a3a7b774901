//! The delay/energy tradeoff of the control weight V: sweeping V from
//! 1e-4 to 10 trades average delay against total energy around the budget.
//! Also emits the sweep's trace/summary/plot files under examples-out/.

use emm::config::default_config;
use emm::experiment::{run_experiment, ExperimentSpec, SweepVariable};

fn main() {
    let mut base = default_config();
    base.workload.battery *= 100.0 / base.workload.tasks as f64;
    base.workload.tasks = 100;

    let values: Vec<String> = (0..9)
        .map(|i| format!("{}", 10f64.powf(-4.0 + 5.0 * i as f64 / 8.0)))
        .collect();
    let spec = ExperimentSpec {
        base,
        variable: SweepVariable::V,
        values,
        seeds: (1..=10).collect(),
        out_dir: "examples-out/control_tradeoff".into(),
    };
    let written = run_experiment(&spec).unwrap();

    let plot = written
        .iter()
        .find(|p| p.file_name().unwrap().to_string_lossy().starts_with("plotdata"))
        .unwrap();
    println!("V sweep over {} points, 10 seeds (budget 82 J):\n", spec.values.len());
    println!("{}", std::fs::read_to_string(plot).unwrap());
    println!("files under {}", spec.out_dir.display());
}
