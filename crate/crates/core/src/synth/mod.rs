//! Synthetic scenarios with known ground truth, and a brute-force oracle.

mod generator;
mod oracle;
mod rng;
mod trial;

pub use generator::{
    generate_scenario, GroundTruth, Scenario, ScenarioSpec, BENCHMARK_FILE, CANDIDATE_FILE,
    GROUND_TRUTH_FILE, PAIR_DISTANCE_FILE, UNITS,
};
pub use oracle::{oracle_recompute, profile_discrepancy};
pub use rng::ScenarioRng;
pub use trial::{
    draw_trial, parity_event, run_trial, scenario_profiles, TrialFailure, TrialOutcome, TrialSpec,
    RECOVERY_TOLERANCE,
};
