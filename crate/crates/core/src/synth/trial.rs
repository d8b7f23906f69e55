//! Randomized soundness trials over generated scenarios.
//!
//! Each trial draws a scenario spec and metric settings from its seed,
//! generates the scenario, and checks the estimators against the ground
//! truth and the oracle, and both certification bounds against the data.

use super::generator::{generate_scenario, Scenario, ScenarioSpec, UNITS};
use super::oracle::{oracle_recompute, profile_discrepancy};
use super::rng::ScenarioRng;
use crate::certification::{check_prop1_bound, check_prop4_bound, CertificationVerdict, MMode};
use crate::error::Result;
use crate::metrics::{audit_profiles, InputSpace, ParityEvent};
use crate::types::{split_pairs, AuditProfiles, MetricConfig, SimilarityDirection};

/// Agreement required between estimator, oracle and ground truth.
pub const RECOVERY_TOLERANCE: f64 = 1e-12;

/// A drawn trial: the scenario spec and the metric settings to audit it with.
#[derive(Debug, Clone)]
pub struct TrialSpec {
    pub spec: ScenarioSpec,
    pub kappa: f64,
    pub direction: SimilarityDirection,
}

fn grid(rng: &mut ScenarioRng, max_units: u64) -> f64 {
    rng.below(max_units + 1) as f64 / UNITS as f64
}

/// Draws a trial from `seed`, with at most `max_records` records.
pub fn draw_trial(seed: u64, max_records: usize) -> TrialSpec {
    let mut rng = ScenarioRng::new(seed ^ 0x5eed_7e57_0000_0000);
    let half = UNITS as u64 / 2;
    let score_form = rng.below(5) == 0;
    let n_groups = rng.between(2, 4) as usize;
    let saturate = !score_form && rng.below(3) == 0;
    let min_records = n_groups + usize::from(saturate);
    let n_records = rng.between(min_records.max(4) as i64, max_records.max(min_records.max(4)) as i64) as usize;
    let target_epsilon = match rng.below(10) {
        0 => 0.0,
        _ if score_form => grid(&mut rng, 2 * UNITS as u64),
        _ => grid(&mut rng, half),
    };
    let sp_cap = if saturate { half / 4 } else { half };
    let target_sp_gap_f = if rng.below(10) == 0 { 0.0 } else { grid(&mut rng, sp_cap) };
    // saturation needs room on both stretched outcomes
    let target_epsilon = if saturate {
        let cap = (UNITS as f64 * (1.0 - 3.0 * target_sp_gap_f) / 4.0) as u64;
        target_epsilon.min(grid(&mut rng, cap))
    } else {
        target_epsilon
    };
    let spec = ScenarioSpec {
        seed,
        n_records,
        n_groups,
        n_outcomes: rng.between(2, 4) as usize,
        score_form,
        score_threshold: 0.5,
        target_epsilon,
        target_sp_gap_f,
        feature_dim: rng.below(4) as usize,
        saturate_prop1: saturate,
    };
    let kappa = if rng.below(3) == 0 { 0.0 } else { grid(&mut rng, 3 * half) };
    let direction = if rng.below(4) == 0 {
        SimilarityDirection::AtMost
    } else {
        SimilarityDirection::AtLeast
    };
    TrialSpec {
        spec,
        kappa,
        direction,
    }
}

/// One failed check within a trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialFailure {
    pub check: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub seed: u64,
    pub prop1: CertificationVerdict,
    pub prop4: CertificationVerdict,
    /// `bound - observed` of the individual-fairness check when the saturated pair qualified.
    pub saturation_slack: Option<f64>,
    pub failures: Vec<TrialFailure>,
}

impl TrialOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn parity_event(scenario: &Scenario) -> ParityEvent {
    if scenario.spec.score_form {
        ParityEvent::ScoreAtLeast(scenario.spec.score_threshold)
    } else {
        ParityEvent::AllOutcomes
    }
}

/// Audit profiles of a generated scenario under `metric`.
pub fn scenario_profiles(scenario: &Scenario, metric: &MetricConfig) -> Result<(AuditProfiles, InputSpace)> {
    let pairs = scenario.pairs();
    let (records_f, _) = split_pairs(&pairs);
    let space = InputSpace::for_metric(metric, &records_f, scenario.pair_distances.clone())?;
    let profiles = audit_profiles(&pairs, &space, metric, parity_event(scenario))?;
    Ok((profiles, space))
}

/// Runs one trial. `inject_fault` halves the epsilon estimate before it is
/// checked, which the recovery check must catch.
pub fn run_trial(seed: u64, max_records: usize, inject_fault: bool) -> Result<TrialOutcome> {
    let trial = draw_trial(seed, max_records);
    let scenario = generate_scenario(&trial.spec)?;
    let metric = MetricConfig {
        kappa: trial.kappa,
        similarity_direction: trial.direction,
        ..scenario.default_metric()
    };
    let pairs = scenario.pairs();
    let (_, records_g) = split_pairs(&pairs);
    let (mut profiles, space) = scenario_profiles(&scenario, &metric)?;
    if inject_fault {
        profiles.system.epsilon_hat *= 0.5;
    }
    let oracle = oracle_recompute(&pairs, &metric, scenario.pair_distances.as_ref(), parity_event(&scenario))?;

    let mut failures = Vec::new();
    let mut fail = |check, detail: String| failures.push(TrialFailure { check, detail });
    let (f, g) = (&profiles.benchmark, &profiles.system);
    let truth = &scenario.ground_truth;

    let eps_err = (g.epsilon_hat - truth.epsilon).abs();
    if eps_err > RECOVERY_TOLERANCE {
        fail("epsilon-recovery", format!("estimated {} vs generated {}", g.epsilon_hat, truth.epsilon));
    }
    let sp_err = (f.sp_gap - truth.sp_gap_f).abs();
    if sp_err > RECOVERY_TOLERANCE {
        fail("sp-recovery", format!("estimated {} vs generated {}", f.sp_gap, truth.sp_gap_f));
    }
    for (name, a, b) in [("benchmark", f, &oracle.benchmark), ("system", g, &oracle.system)] {
        match profile_discrepancy(a, b) {
            Some(d) if d <= RECOVERY_TOLERANCE => {}
            Some(d) => fail("oracle", format!("{name} profile differs from oracle by {d:e}")),
            None => fail("oracle", format!("{name} profile vacuity or definedness differs from oracle")),
        }
    }

    let prop1 = check_prop1_bound(f, g.epsilon_hat, &records_g, &space, &metric)?;
    if !prop1.passed {
        fail("prop1", format!("observed {} above bound {}", prop1.observed_value, prop1.bound_value));
    }
    let m = if g.m_hat.undefined { 0.0 } else { g.m_hat.value };
    let prop4 = check_prop4_bound(f.sp_gap, g.sp_gap, g.epsilon_hat, m, MMode::Estimated, metric.tolerance)?;
    if !prop4.passed {
        fail("prop4", format!("observed {} above bound {}", prop4.observed_value, prop4.bound_value));
    }

    let mut saturation_slack = None;
    if let Some((a, b)) = &truth.saturated_pair {
        if metric.similarity_direction.admits(space.distance_by_id(a, b)?, metric.kappa) {
            let slack = prop1.bound_value - prop1.observed_value;
            if slack > 1e-3 + metric.tolerance {
                fail("saturation", format!("bound exceeds observed by {slack}"));
            }
            saturation_slack = Some(slack);
        }
    }

    Ok(TrialOutcome {
        seed,
        prop1,
        prop4,
        saturation_slack,
        failures,
    })
}
