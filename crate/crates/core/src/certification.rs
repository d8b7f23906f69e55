//! Bound checks and auditor screening.
//!
//! Each check yields a [`CertificationVerdict`] that echoes the parameters it
//! used, the bound, the observed value and the ids that drive the verdict.

use serde::{Deserialize, Serialize};

use crate::error::{FairnessError, Result};
use crate::metrics::{max_qualifying_gap, InputSpace};
use crate::types::{EvaluationRecord, FairnessProfile, IfSlack, MetricConfig, DEFAULT_TOLERANCE};

/// Slack allowed when comparing two kappa values that should be equal.
const KAPPA_MATCH_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Check {
    Prop1,
    Prop2,
    Prop3,
    Prop4,
    Cor1,
    Cor2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictStatus {
    Pass,
    /// No input pair satisfies the similarity predicate.
    Vacuous,
    /// The system coincides with the benchmark, so the screening threshold is unbounded.
    IdenticalToBenchmark,
    /// A bound that holds by construction failed: the inputs are inconsistent.
    InternalInconsistency,
    /// A supplied Lipschitz constant does not hold on this data.
    AssumptionViolated,
    /// The screening threshold has a non-positive numerator.
    ThresholdEmpty,
    /// `epsilon_hat` is not strictly below the screening threshold.
    ThresholdExceeded,
    /// A propagated lower bound exceeds `kappa + delta`.
    ViolationTransferred,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerdictParameters {
    pub epsilon_hat: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_prime: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationVerdict {
    pub check: Check,
    pub bound_value: f64,
    pub observed_value: f64,
    pub passed: bool,
    pub status: VerdictStatus,
    pub parameters: VerdictParameters,
    pub witnesses: Vec<String>,
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(FairnessError::data(format!(
            "{name} must be finite and non-negative, got {v}"
        )))
    }
}

/// Checks that the system's largest qualifying-pair gap is within
/// `2 * epsilon_hat + kappa + delta_f`, where `delta_f` is the benchmark's
/// individual-fairness slack at the same kappa.
pub fn check_prop1_bound(
    profile_f: &FairnessProfile,
    epsilon_hat: f64,
    records_g: &[EvaluationRecord],
    space: &InputSpace,
    metric: &MetricConfig,
) -> Result<CertificationVerdict> {
    non_negative("epsilon_hat", epsilon_hat)?;
    if (profile_f.kappa - metric.kappa).abs() > KAPPA_MATCH_TOLERANCE {
        return Err(FairnessError::Config(format!(
            "benchmark profile computed at kappa {} but check requested at kappa {}",
            profile_f.kappa, metric.kappa
        )));
    }
    let kappa = metric.kappa;
    let observed = max_qualifying_gap(records_g, space, metric)?;
    let parameters = |delta| VerdictParameters {
        epsilon_hat,
        kappa: Some(kappa),
        delta,
        ..Default::default()
    };
    let delta_f = match profile_f.if_slack_hat {
        IfSlack::Value(v) => v,
        IfSlack::Vacuous => {
            // same inputs, same predicate: the system's qualifying set is empty too
            let status = if observed.is_none() {
                VerdictStatus::Vacuous
            } else {
                VerdictStatus::InternalInconsistency
            };
            return Ok(CertificationVerdict {
                check: Check::Prop1,
                bound_value: 2.0 * epsilon_hat + kappa,
                observed_value: observed.as_ref().map_or(0.0, |o| o.value),
                passed: observed.is_none(),
                status,
                parameters: parameters(None),
                witnesses: observed.map(|o| vec![o.ids.0, o.ids.1]).unwrap_or_default(),
            });
        }
    };
    let bound = 2.0 * epsilon_hat + kappa + delta_f;
    let Some(observed) = observed else {
        return Err(FairnessError::Config(
            "benchmark has qualifying pairs but the system does not; profiles come from different inputs".into(),
        ));
    };
    let passed = observed.value <= bound + metric.tolerance;
    Ok(CertificationVerdict {
        check: Check::Prop1,
        bound_value: bound,
        observed_value: observed.value,
        passed,
        status: if passed {
            VerdictStatus::Pass
        } else {
            VerdictStatus::InternalInconsistency
        },
        parameters: parameters(Some(delta_f)),
        witnesses: vec![observed.ids.0, observed.ids.1],
    })
}

/// Lower bound on the system's gap for an input pair, given the benchmark's
/// gap on that pair and the noncomparative gap: `max(0, pair_gap_f - 2 * epsilon_hat)`.
pub fn propagate_if_violation(pair_gap_f: f64, epsilon_hat: f64) -> Result<f64> {
    non_negative("pair_gap_f", pair_gap_f)?;
    non_negative("epsilon_hat", epsilon_hat)?;
    Ok((pair_gap_f - 2.0 * epsilon_hat).max(0.0))
}

/// Lower bound on `d(g(x1), g(x2))` when the system deviates from a
/// `(kappa, delta_f)`-fair benchmark by `d_g_f_at_x1` at one input and by at
/// most `epsilon_at_x2` at the other:
/// `max(0, d_g_f_at_x1 - (epsilon_at_x2 + kappa + delta_f))`.
pub fn propagate_nc_violation(
    d_g_f_at_x1: f64,
    epsilon_at_x2: f64,
    kappa: f64,
    delta_f: f64,
) -> Result<f64> {
    non_negative("d_g_f_at_x1", d_g_f_at_x1)?;
    non_negative("epsilon_at_x2", epsilon_at_x2)?;
    non_negative("kappa", kappa)?;
    non_negative("delta_f", delta_f)?;
    Ok((d_g_f_at_x1 - (epsilon_at_x2 + kappa + delta_f)).max(0.0))
}

/// Wraps a propagated lower bound into a verdict: the system is flagged as
/// violating `(kappa, delta)`-individual fairness when the bound exceeds
/// `kappa + delta`.
pub fn violation_verdict(
    check: Check,
    lower_bound: f64,
    epsilon_hat: f64,
    kappa: f64,
    delta: f64,
    tolerance: f64,
    witnesses: Vec<String>,
) -> CertificationVerdict {
    let bound = kappa + delta;
    let violated = lower_bound > bound + tolerance;
    CertificationVerdict {
        check,
        bound_value: bound,
        observed_value: lower_bound,
        passed: !violated,
        status: if violated {
            VerdictStatus::ViolationTransferred
        } else {
            VerdictStatus::Pass
        },
        parameters: VerdictParameters {
            epsilon_hat,
            kappa: Some(kappa),
            delta: Some(delta),
            ..Default::default()
        },
        witnesses,
    }
}

/// Where the Lipschitz constant of a parity check came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MMode {
    #[default]
    Estimated,
    Supplied,
}

/// Checks `sp_gap_g <= 2 * m * epsilon_hat + sp_gap_f`.
pub fn check_prop4_bound(
    sp_gap_f: f64,
    sp_gap_g: f64,
    epsilon_hat: f64,
    m: f64,
    m_mode: MMode,
    tolerance: f64,
) -> Result<CertificationVerdict> {
    non_negative("sp_gap_f", sp_gap_f)?;
    non_negative("sp_gap_g", sp_gap_g)?;
    non_negative("epsilon_hat", epsilon_hat)?;
    non_negative("m", m)?;
    let bound = 2.0 * m * epsilon_hat + sp_gap_f;
    let passed = sp_gap_g <= bound + tolerance;
    let status = match (passed, m_mode) {
        (true, _) => VerdictStatus::Pass,
        (false, MMode::Supplied) => VerdictStatus::AssumptionViolated,
        (false, MMode::Estimated) => VerdictStatus::InternalInconsistency,
    };
    Ok(CertificationVerdict {
        check: Check::Prop4,
        bound_value: bound,
        observed_value: sp_gap_g,
        passed,
        status,
        parameters: VerdictParameters {
            epsilon_hat,
            delta: Some(sp_gap_f),
            m: Some(m),
            ..Default::default()
        },
        witnesses: Vec::new(),
    })
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

fn default_corollaries() -> Vec<Check> {
    vec![Check::Cor1, Check::Cor2]
}

/// Screening parameters. Benchmark slacks left unset are taken from the
/// benchmark's measured profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ScreeningConfig {
    /// Benchmark slack used for both notions unless overridden below.
    #[serde(default)]
    pub delta_benchmark: Option<f64>,
    #[serde(default)]
    pub delta_benchmark_if: Option<f64>,
    #[serde(default)]
    pub delta_benchmark_sp: Option<f64>,
    pub delta_prime: f64,
    #[serde(default)]
    pub kappa: f64,
    #[serde(default)]
    pub m_mode: MMode,
    #[serde(default)]
    pub m_supplied: Option<f64>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Which corollaries a screening run must pass.
    #[serde(default = "default_corollaries")]
    pub corollaries: Vec<Check>,
}

impl ScreeningConfig {
    pub fn new(delta_prime: f64, kappa: f64) -> Self {
        ScreeningConfig {
            delta_benchmark: None,
            delta_benchmark_if: None,
            delta_benchmark_sp: None,
            delta_prime,
            kappa,
            m_mode: MMode::Estimated,
            m_supplied: None,
            tolerance: DEFAULT_TOLERANCE,
            corollaries: default_corollaries(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: Option<f64>| match v {
            Some(x) if !x.is_finite() => Err(FairnessError::Config(format!("{name} must be finite"))),
            _ => Ok(()),
        };
        finite("delta-prime", Some(self.delta_prime))?;
        finite("delta-benchmark", self.delta_benchmark)?;
        finite("delta-benchmark-if", self.delta_benchmark_if)?;
        finite("delta-benchmark-sp", self.delta_benchmark_sp)?;
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return Err(FairnessError::Config("kappa must be finite and non-negative".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(FairnessError::Config("tolerance must be positive".into()));
        }
        match (self.m_mode, self.m_supplied) {
            (MMode::Supplied, None) => Err(FairnessError::Config(
                "m-mode 'supplied' requires m-supplied".into(),
            )),
            (MMode::Supplied, Some(m)) if !(m > 0.0 && m.is_finite()) => Err(FairnessError::Config(
                format!("m-supplied must be positive, got {m}"),
            )),
            (MMode::Estimated, Some(_)) => Err(FairnessError::Config(
                "m-supplied given but m-mode is 'estimated'".into(),
            )),
            _ => Ok(()),
        }?;
        if self
            .corollaries
            .iter()
            .any(|c| !matches!(c, Check::Cor1 | Check::Cor2))
        {
            return Err(FairnessError::Config(
                "corollaries may only list COR1 and COR2".into(),
            ));
        }
        Ok(())
    }

    fn delta_if(&self) -> Option<f64> {
        self.delta_benchmark_if.or(self.delta_benchmark)
    }

    fn delta_sp(&self) -> Option<f64> {
        self.delta_benchmark_sp.or(self.delta_benchmark)
    }
}

/// Screens a candidate auditor against a benchmark through both corollary
/// thresholds. Returns the individual-fairness verdict and the
/// statistical-parity verdict, in that order.
pub fn screen_auditor(
    candidate: &FairnessProfile,
    benchmark: &FairnessProfile,
    config: &ScreeningConfig,
) -> Result<(CertificationVerdict, CertificationVerdict)> {
    config.validate()?;
    Ok((
        screen_individual(candidate, benchmark, config)?,
        screen_parity(candidate, benchmark, config)?,
    ))
}

/// Screening threshold on `epsilon_hat` for `(kappa, delta_prime)`-individual fairness.
pub fn screen_individual(
    candidate: &FairnessProfile,
    benchmark: &FairnessProfile,
    config: &ScreeningConfig,
) -> Result<CertificationVerdict> {
    let eps = candidate.epsilon_hat;
    non_negative("epsilon_hat", eps)?;
    let delta = match config.delta_if() {
        Some(d) => d,
        None => {
            if (benchmark.kappa - config.kappa).abs() > KAPPA_MATCH_TOLERANCE {
                return Err(FairnessError::Config(format!(
                    "benchmark slack measured at kappa {} but screening uses kappa {}",
                    benchmark.kappa, config.kappa
                )));
            }
            // a vacuous benchmark check constrains nothing; zero slack is sound
            benchmark.if_slack_hat.value().unwrap_or(0.0)
        }
    };
    let numerator = config.delta_prime - delta - config.kappa;
    let threshold = numerator / 2.0;
    let (passed, status) = if numerator <= 0.0 {
        (false, VerdictStatus::ThresholdEmpty)
    } else if eps < threshold - config.tolerance {
        (true, VerdictStatus::Pass)
    } else {
        (false, VerdictStatus::ThresholdExceeded)
    };
    Ok(CertificationVerdict {
        check: Check::Cor1,
        bound_value: threshold,
        observed_value: eps,
        passed,
        status,
        parameters: VerdictParameters {
            epsilon_hat: eps,
            kappa: Some(config.kappa),
            delta: Some(delta),
            delta_prime: Some(config.delta_prime),
            m: None,
        },
        witnesses: candidate.witness_ids.get("epsilon").cloned().unwrap_or_default(),
    })
}

/// Screening threshold on `epsilon_hat` for `delta_prime`-statistical parity.
pub fn screen_parity(
    candidate: &FairnessProfile,
    benchmark: &FairnessProfile,
    config: &ScreeningConfig,
) -> Result<CertificationVerdict> {
    let eps = candidate.epsilon_hat;
    non_negative("epsilon_hat", eps)?;
    let delta = config.delta_sp().unwrap_or(benchmark.sp_gap);
    let numerator = config.delta_prime - delta;
    let witnesses = candidate.witness_ids.get("epsilon").cloned().unwrap_or_default();
    let verdict = |bound_value, m: Option<f64>, passed, status| CertificationVerdict {
        check: Check::Cor2,
        bound_value,
        observed_value: eps,
        passed,
        status,
        parameters: VerdictParameters {
            epsilon_hat: eps,
            kappa: None,
            delta: Some(delta),
            delta_prime: Some(config.delta_prime),
            m,
        },
        witnesses: witnesses.clone(),
    };
    if numerator <= 0.0 {
        return Ok(verdict(numerator / 2.0, None, false, VerdictStatus::ThresholdEmpty));
    }
    let m = match config.m_mode {
        MMode::Supplied => config
            .m_supplied
            .ok_or_else(|| FairnessError::Config("m-mode 'supplied' requires m-supplied".into()))?,
        MMode::Estimated => {
            if candidate.m_hat.undefined {
                if eps <= config.tolerance {
                    return Ok(verdict(
                        numerator,
                        None,
                        true,
                        VerdictStatus::IdenticalToBenchmark,
                    ));
                }
                return Err(FairnessError::Config(
                    "Lipschitz estimate is undefined for a candidate that differs from the benchmark; supply m".into(),
                ));
            }
            candidate.m_hat.value
        }
    };
    if m <= 0.0 {
        return Err(FairnessError::Config(
            "Lipschitz constant is zero; supply a positive m".into(),
        ));
    }
    let threshold = numerator / (2.0 * m);
    let (passed, status) = if eps < threshold - config.tolerance {
        (true, VerdictStatus::Pass)
    } else {
        (false, VerdictStatus::ThresholdExceeded)
    };
    Ok(verdict(threshold, Some(m), passed, status))
}
