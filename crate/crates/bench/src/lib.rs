//! Fixtures shared by the criterion benches.

use ncfair::synth::{generate_scenario, Scenario, ScenarioSpec};

/// A distribution-form scenario with `n` records, four groups and two features.
pub fn scenario(n: usize, seed: u64) -> Scenario {
    let spec = ScenarioSpec {
        n_outcomes: 3,
        target_sp_gap_f: 0.1,
        ..ScenarioSpec::new(seed, n, 4, 0.15)
    };
    generate_scenario(&spec).expect("bench scenario generates")
}
