//! Guarantee check: run the drift policy and the frame-lookahead oracle on
//! the same realization and verify the measured average delay and total
//! energy against their guaranteed envelopes. The learning policy's check
//! substitutes the largest measured per-task regret for the deviation
//! constant.

use emm::config::default_config;
use emm::engine::PolicyKind;
use emm::experiment::bound_report;

fn main() {
    let mut config = default_config();
    config.network.area_side = 300.0;
    config.network.bs_count = 9;
    config.workload.tasks = 20;
    config.workload.battery = 40.0;
    config.seed = 1;

    for policy in [PolicyKind::EmmGsi, PolicyKind::EmmLsi] {
        config.policy = policy;
        let (report, text) = bound_report(&config).unwrap();
        println!("{text}");
        assert!(report.all_pass(), "guaranteed inequality failed");
    }
    println!("both envelopes hold, as guaranteed on every realization");
}
