//! Domain types shared by the metric, certification and I/O layers.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{FairnessError, Result};

/// Tolerance on the sum of a probability vector.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-6;

/// Default comparison tolerance for certification checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// An evaluator's output for one input: a distribution over a finite outcome
/// set, or a scalar score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutcomeValue {
    Distribution(Vec<f64>),
    Score(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutcomeForm {
    Distribution(usize),
    Score,
}

impl OutcomeValue {
    /// Builds a validated distribution. Entries must lie in [0, 1] and sum to
    /// one within [`PROBABILITY_SUM_TOLERANCE`]; no renormalization happens here.
    pub fn distribution(probs: Vec<f64>) -> Result<Self> {
        let value = OutcomeValue::Distribution(probs);
        value.validate()?;
        Ok(value)
    }

    pub fn score(score: f64) -> Result<Self> {
        let value = OutcomeValue::Score(score);
        value.validate()?;
        Ok(value)
    }

    pub fn form(&self) -> OutcomeForm {
        match self {
            OutcomeValue::Distribution(p) => OutcomeForm::Distribution(p.len()),
            OutcomeValue::Score(_) => OutcomeForm::Score,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            OutcomeValue::Score(s) => {
                if !s.is_finite() {
                    return Err(FairnessError::data(format!("score {s} is not finite")));
                }
            }
            OutcomeValue::Distribution(p) => {
                if p.len() < 2 {
                    return Err(FairnessError::data(format!(
                        "distribution needs at least 2 outcomes, got {}",
                        p.len()
                    )));
                }
                for &v in p {
                    if !v.is_finite() {
                        return Err(FairnessError::data(format!("probability {v} is not finite")));
                    }
                    if !(0.0..=1.0).contains(&v) {
                        return Err(FairnessError::data(format!(
                            "probability {v} outside [0, 1]"
                        )));
                    }
                }
                let sum: f64 = p.iter().sum();
                if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
                    return Err(FairnessError::data(format!(
                        "probabilities sum to {sum}, expected 1"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One input evaluated by one evaluator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub id: String,
    pub group: String,
    pub outcome: OutcomeValue,
    pub features: Option<Vec<f64>>,
}

/// The same input evaluated by the benchmark `f` and the system `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationPair {
    pub id: String,
    pub group: String,
    pub features: Option<Vec<f64>>,
    pub out_f: OutcomeValue,
    pub out_g: OutcomeValue,
}

impl EvaluationPair {
    pub fn benchmark_record(&self) -> EvaluationRecord {
        EvaluationRecord {
            id: self.id.clone(),
            group: self.group.clone(),
            outcome: self.out_f.clone(),
            features: self.features.clone(),
        }
    }

    pub fn system_record(&self) -> EvaluationRecord {
        EvaluationRecord {
            id: self.id.clone(),
            group: self.group.clone(),
            outcome: self.out_g.clone(),
            features: self.features.clone(),
        }
    }
}

/// Splits aligned pairs into the benchmark's and the system's record lists.
pub fn split_pairs(pairs: &[EvaluationPair]) -> (Vec<EvaluationRecord>, Vec<EvaluationRecord>) {
    pairs
        .iter()
        .map(|p| (p.benchmark_record(), p.system_record()))
        .unzip()
}

/// Common shape of a validated record list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetShape {
    pub form: OutcomeForm,
    pub feature_dim: Option<usize>,
}

/// Checks id uniqueness, a single outcome representation and a single
/// feature dimensionality across `records`.
pub fn validate_records(records: &[EvaluationRecord]) -> Result<DatasetShape> {
    let first = records
        .first()
        .ok_or_else(|| FairnessError::EmptyDataset("no records".into()))?;
    let form = first.outcome.form();
    let feature_dim = first.features.as_ref().map(Vec::len);
    let mut seen = HashSet::with_capacity(records.len());
    for r in records {
        if !seen.insert(r.id.as_str()) {
            return Err(FairnessError::schema(format!("duplicate id '{}'", r.id)));
        }
        r.outcome.validate()?;
        if r.outcome.form() != form {
            return Err(FairnessError::Representation(format!(
                "record '{}' uses {:?}, dataset uses {:?}",
                r.id,
                r.outcome.form(),
                form
            )));
        }
        if r.features.as_ref().map(Vec::len) != feature_dim {
            return Err(FairnessError::data(format!(
                "record '{}' has a different feature dimensionality",
                r.id
            )));
        }
        if let Some(x) = &r.features {
            if x.iter().any(|v| !v.is_finite()) {
                return Err(FairnessError::data(format!(
                    "record '{}' has a non-finite feature",
                    r.id
                )));
            }
        }
    }
    Ok(DatasetShape { form, feature_dim })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutcomeMetric {
    #[default]
    TotalVariation,
    EuclideanOnDistribution,
    AbsoluteScore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputMetric {
    SuppliedMatrix,
    #[default]
    StandardizedEuclidean,
}

/// Which input pairs the individual-fairness predicate admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimilarityDirection {
    /// Pairs with `D(x_i, x_j) >= kappa`.
    #[default]
    AtLeast,
    /// Pairs with `D(x_i, x_j) <= kappa`.
    AtMost,
}

impl SimilarityDirection {
    pub fn admits(self, input_distance: f64, kappa: f64) -> bool {
        match self {
            SimilarityDirection::AtLeast => input_distance >= kappa,
            SimilarityDirection::AtMost => input_distance <= kappa,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default, deny_unknown_fields)]
pub struct MetricConfig {
    pub outcome_metric: OutcomeMetric,
    pub input_metric: InputMetric,
    pub kappa: f64,
    pub similarity_direction: SimilarityDirection,
    pub tolerance: f64,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            outcome_metric: OutcomeMetric::TotalVariation,
            input_metric: InputMetric::StandardizedEuclidean,
            kappa: 0.0,
            similarity_direction: SimilarityDirection::AtLeast,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl MetricConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(FairnessError::Config(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return Err(FairnessError::Config(format!(
                "kappa must be a finite non-negative number, got {}",
                self.kappa
            )));
        }
        Ok(())
    }

    /// Fails unless the outcome metric applies to `form`.
    pub fn check_form(&self, form: OutcomeForm) -> Result<()> {
        let ok = matches!(
            (self.outcome_metric, form),
            (OutcomeMetric::AbsoluteScore, OutcomeForm::Score)
                | (OutcomeMetric::TotalVariation, OutcomeForm::Distribution(_))
                | (OutcomeMetric::EuclideanOnDistribution, OutcomeForm::Distribution(_))
        );
        if ok {
            Ok(())
        } else {
            Err(FairnessError::Representation(format!(
                "outcome metric {:?} cannot be applied to {:?} outcomes",
                self.outcome_metric, form
            )))
        }
    }
}

/// Estimated individual-fairness slack, or the vacuous case where no input
/// pair satisfies the similarity predicate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IfSlack {
    Value(f64),
    Vacuous,
}

impl IfSlack {
    pub fn value(self) -> Option<f64> {
        match self {
            IfSlack::Value(v) => Some(v),
            IfSlack::Vacuous => None,
        }
    }

    pub fn is_vacuous(self) -> bool {
        matches!(self, IfSlack::Vacuous)
    }

    /// `(kappa, delta)`-individual fairness holds iff the slack is at most
    /// `delta`; a vacuous check always holds.
    pub fn satisfies(self, delta: f64) -> bool {
        match self {
            IfSlack::Value(v) => v <= delta,
            IfSlack::Vacuous => true,
        }
    }
}

impl Serialize for IfSlack {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            IfSlack::Value(v) => serializer.serialize_f64(*v),
            IfSlack::Vacuous => serializer.serialize_str("VACUOUS"),
        }
    }
}

/// Empirical Lipschitz coupling constant. `undefined` is set when the system
/// coincides with the benchmark (no deviation to divide by); `value` is then 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LipschitzEstimate {
    pub value: f64,
    pub undefined: bool,
}

impl LipschitzEstimate {
    pub const UNDEFINED: LipschitzEstimate = LipschitzEstimate {
        value: 0.0,
        undefined: true,
    };

    pub fn defined(value: f64) -> Self {
        LipschitzEstimate {
            value,
            undefined: false,
        }
    }
}

/// Measured fairness quantities for one evaluator. `epsilon_hat` is measured
/// against the benchmark, so it is zero for the benchmark itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FairnessProfile {
    pub epsilon_hat: f64,
    pub if_slack_hat: IfSlack,
    pub kappa: f64,
    pub sp_gap: f64,
    pub m_hat: LipschitzEstimate,
    pub witness_ids: BTreeMap<String, Vec<String>>,
}

/// Profiles of the benchmark `f` and the system `g` over one aligned input set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditProfiles {
    pub benchmark: FairnessProfile,
    pub system: FairnessProfile,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distribution_validation() {
        assert!(OutcomeValue::distribution(vec![0.3, 0.7]).is_ok());
        assert!(OutcomeValue::distribution(vec![1.0]).is_err());
        assert!(OutcomeValue::distribution(vec![0.5, 0.4]).is_err());
        assert!(OutcomeValue::distribution(vec![1.2, -0.2]).is_err());
        assert!(OutcomeValue::distribution(vec![f64::NAN, 1.0]).is_err());
        assert!(OutcomeValue::score(f64::INFINITY).is_err());
    }

    #[test]
    fn duplicate_ids_rejected() {
        let r = EvaluationRecord {
            id: "a".into(),
            group: "A".into(),
            outcome: OutcomeValue::Score(0.1),
            features: None,
        };
        let err = validate_records(&[r.clone(), r]).unwrap_err();
        assert_eq!(err.code(), "SCHEMA_ERROR");
    }

    #[test]
    fn mixed_forms_rejected() {
        let a = EvaluationRecord {
            id: "a".into(),
            group: "A".into(),
            outcome: OutcomeValue::Score(0.1),
            features: None,
        };
        let b = EvaluationRecord {
            id: "b".into(),
            outcome: OutcomeValue::Distribution(vec![0.5, 0.5]),
            ..a.clone()
        };
        assert_eq!(
            validate_records(&[a, b]).unwrap_err().code(),
            "REPRESENTATION_ERROR"
        );
    }

    #[test]
    fn slack_serializes_vacuous_marker() {
        assert_eq!(serde_json::to_string(&IfSlack::Vacuous).unwrap(), "\"VACUOUS\"");
        assert_eq!(serde_json::to_string(&IfSlack::Value(0.25)).unwrap(), "0.25");
    }

    #[test]
    fn metric_config_kebab_case() {
        let cfg: MetricConfig = serde_json::from_str(
            r#"{"outcome-metric":"absolute-score","kappa":0.2,"similarity-direction":"at-most"}"#,
        )
        .unwrap();
        assert_eq!(cfg.outcome_metric, OutcomeMetric::AbsoluteScore);
        assert_eq!(cfg.similarity_direction, SimilarityDirection::AtMost);
        assert_eq!(cfg.tolerance, DEFAULT_TOLERANCE);
        assert!(cfg.check_form(OutcomeForm::Distribution(2)).is_err());
    }
}
