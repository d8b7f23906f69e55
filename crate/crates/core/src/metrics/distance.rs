//! Outcome distances `d` and input similarity metrics `D`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{FairnessError, Result};
use crate::types::{EvaluationRecord, InputMetric, MetricConfig, OutcomeMetric, OutcomeValue};

/// Conflicting duplicate entries in a distance matrix may differ by at most this.
pub const MATRIX_DUPLICATE_TOLERANCE: f64 = 1e-12;

/// Distance between two outcomes under the configured outcome metric.
pub fn outcome_distance(a: &OutcomeValue, b: &OutcomeValue, metric: &MetricConfig) -> Result<f64> {
    match (a, b) {
        (OutcomeValue::Distribution(p), OutcomeValue::Distribution(q)) => {
            if p.len() != q.len() {
                return Err(FairnessError::Representation(format!(
                    "distributions over {} and {} outcomes",
                    p.len(),
                    q.len()
                )));
            }
            if p.iter().chain(q).any(|v| !v.is_finite()) {
                return Err(FairnessError::data("non-finite probability"));
            }
            match metric.outcome_metric {
                OutcomeMetric::TotalVariation => Ok(total_variation(p, q)),
                OutcomeMetric::EuclideanOnDistribution => Ok(euclidean(p, q)),
                OutcomeMetric::AbsoluteScore => Err(FairnessError::Representation(
                    "absolute-score metric applied to distributions".into(),
                )),
            }
        }
        (OutcomeValue::Score(x), OutcomeValue::Score(y)) => {
            if !x.is_finite() || !y.is_finite() {
                return Err(FairnessError::data("non-finite score"));
            }
            match metric.outcome_metric {
                OutcomeMetric::AbsoluteScore => Ok((x - y).abs()),
                other => Err(FairnessError::Representation(format!(
                    "{other:?} metric applied to scores"
                ))),
            }
        }
        _ => Err(FairnessError::Representation(
            "cannot compare a distribution with a score".into(),
        )),
    }
}

/// Outcome distance for values already known to be finite and compatible
/// with `metric`.
#[inline]
pub(crate) fn distance_unchecked(a: &OutcomeValue, b: &OutcomeValue, metric: OutcomeMetric) -> f64 {
    match (a, b, metric) {
        (OutcomeValue::Distribution(p), OutcomeValue::Distribution(q), OutcomeMetric::TotalVariation) => {
            total_variation(p, q)
        }
        (OutcomeValue::Distribution(p), OutcomeValue::Distribution(q), _) => euclidean(p, q),
        (OutcomeValue::Score(x), OutcomeValue::Score(y), _) => (x - y).abs(),
        _ => unreachable!("outcome forms validated before use"),
    }
}

#[inline]
pub(crate) fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[inline]
pub(crate) fn euclidean(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Symmetric lookup of externally supplied input distances. The diagonal is
/// implicitly zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PairDistances {
    entries: BTreeMap<(String, String), f64>,
}

fn key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_owned(), b.to_owned())
    } else {
        (b.to_owned(), a.to_owned())
    }
}

impl PairDistances {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts one entry; either orientation may be given.
    pub fn insert(&mut self, a: &str, b: &str, distance: f64) -> Result<()> {
        if !distance.is_finite() || distance < 0.0 {
            return Err(FairnessError::data(format!(
                "distance ({a}, {b}) = {distance} must be finite and non-negative"
            )));
        }
        if a == b {
            if distance != 0.0 {
                return Err(FairnessError::data(format!(
                    "nonzero diagonal distance ({a}, {a}) = {distance}"
                )));
            }
            return Ok(());
        }
        let k = key(a, b);
        if let Some(&existing) = self.entries.get(&k) {
            if (existing - distance).abs() > MATRIX_DUPLICATE_TOLERANCE {
                return Err(FairnessError::data(format!(
                    "conflicting entries for ({a}, {b}): {existing} vs {distance}"
                )));
            }
            return Ok(());
        }
        self.entries.insert(k, distance);
        Ok(())
    }

    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        if a == b {
            return Some(0.0);
        }
        self.entries.get(&key(a, b)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in canonical order: `id_i < id_j`, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.entries
            .iter()
            .map(|((a, b), d)| (a.as_str(), b.as_str(), *d))
    }

    /// Verifies that every unordered pair of `ids` has an entry.
    pub fn check_complete<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Result<()> {
        let mut ids: Vec<&str> = ids.into_iter().collect();
        ids.sort_unstable();
        for (i, a) in ids.iter().enumerate() {
            for b in &ids[i + 1..] {
                if self.get(a, b).is_none() {
                    return Err(FairnessError::MatrixIncomplete((*a).into(), (*b).into()));
                }
            }
        }
        Ok(())
    }
}

/// Per-column mean and population standard deviation of the feature matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureStats {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl FeatureStats {
    pub fn from_records(records: &[EvaluationRecord]) -> Result<Self> {
        let rows = records
            .iter()
            .map(|r| {
                r.features.as_deref().ok_or_else(|| {
                    FairnessError::data(format!("record '{}' has no features", r.id))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let m = rows.first().map_or(0, |r| r.len());
        if m == 0 {
            return Err(FairnessError::data(
                "standardized-euclidean needs at least one feature column",
            ));
        }
        if rows.iter().any(|r| r.len() != m) {
            return Err(FairnessError::data("inconsistent feature dimensionality"));
        }
        let n = rows.len() as f64;
        let mut mean = vec![0.0; m];
        for r in &rows {
            for (acc, x) in mean.iter_mut().zip(r.iter()) {
                *acc += x;
            }
        }
        mean.iter_mut().for_each(|v| *v /= n);
        let mut var = vec![0.0; m];
        for r in &rows {
            for ((acc, x), mu) in var.iter_mut().zip(r.iter()).zip(&mean) {
                *acc += (x - mu) * (x - mu);
            }
        }
        let std = var.into_iter().map(|v| (v / n).sqrt()).collect();
        Ok(FeatureStats { mean, std })
    }

    /// Standardized copy of `x`; zero-variance columns map to 0.
    pub fn standardize(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(v, (mu, sd))| if *sd > 0.0 { (v - mu) / sd } else { 0.0 })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

/// Resolved input metric `D` for one dataset.
#[derive(Debug, Clone)]
pub enum InputSpace {
    Standardized {
        stats: FeatureStats,
        /// Standardized feature rows keyed by record id.
        rows: HashMap<String, Vec<f64>>,
    },
    Matrix(PairDistances),
}

impl InputSpace {
    pub fn standardized(records: &[EvaluationRecord]) -> Result<Self> {
        let stats = FeatureStats::from_records(records)?;
        let rows = records
            .iter()
            .map(|r| {
                let x = r.features.as_deref().unwrap_or_default();
                (r.id.clone(), stats.standardize(x))
            })
            .collect();
        Ok(InputSpace::Standardized { stats, rows })
    }

    /// Wraps a supplied matrix after checking it covers every pair of `records`.
    pub fn supplied(matrix: PairDistances, records: &[EvaluationRecord]) -> Result<Self> {
        matrix.check_complete(records.iter().map(|r| r.id.as_str()))?;
        Ok(InputSpace::Matrix(matrix))
    }

    /// Builds the space selected by `metric.input_metric`.
    pub fn for_metric(
        metric: &MetricConfig,
        records: &[EvaluationRecord],
        matrix: Option<PairDistances>,
    ) -> Result<Self> {
        match metric.input_metric {
            InputMetric::StandardizedEuclidean => Self::standardized(records),
            InputMetric::SuppliedMatrix => {
                let matrix = matrix.ok_or_else(|| {
                    FairnessError::data("supplied-matrix input metric requires a pair-distance file")
                })?;
                Self::supplied(matrix, records)
            }
        }
    }

    pub fn distance_by_id(&self, a: &str, b: &str) -> Result<f64> {
        match self {
            InputSpace::Standardized { stats, rows } => {
                let (za, zb) = match (rows.get(a), rows.get(b)) {
                    (Some(za), Some(zb)) => (za, zb),
                    _ => {
                        return Err(FairnessError::data(format!(
                            "no features for pair ({a}, {b})"
                        )))
                    }
                };
                Ok(standardized_distance(za, zb, stats.dim()))
            }
            InputSpace::Matrix(m) => m
                .get(a, b)
                .ok_or_else(|| FairnessError::MatrixIncomplete(a.into(), b.into())),
        }
    }
}

#[inline]
pub(crate) fn standardized_distance(za: &[f64], zb: &[f64], dim: usize) -> f64 {
    euclidean(za, zb) / (dim as f64).sqrt()
}

/// Input distance `D(r1, r2)`. For the standardized metric, `r1` and `r2`
/// are standardized with the dataset statistics held by `space`.
pub fn input_distance(
    r1: &EvaluationRecord,
    r2: &EvaluationRecord,
    space: &InputSpace,
) -> Result<f64> {
    match space {
        InputSpace::Standardized { stats, .. } => {
            let (x1, x2) = match (&r1.features, &r2.features) {
                (Some(a), Some(b)) if a.len() == stats.dim() && b.len() == stats.dim() => (a, b),
                _ => {
                    return Err(FairnessError::data(format!(
                        "missing or mis-sized features for ({}, {})",
                        r1.id, r2.id
                    )))
                }
            };
            Ok(standardized_distance(
                &stats.standardize(x1),
                &stats.standardize(x2),
                stats.dim(),
            ))
        }
        InputSpace::Matrix(_) => space.distance_by_id(&r1.id, &r2.id),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::OutcomeMetric;

    fn tv() -> MetricConfig {
        MetricConfig::default()
    }

    fn dist(p: &[f64]) -> OutcomeValue {
        OutcomeValue::Distribution(p.to_vec())
    }

    fn rec(id: &str, x: &[f64]) -> EvaluationRecord {
        EvaluationRecord {
            id: id.into(),
            group: "A".into(),
            outcome: OutcomeValue::Score(0.0),
            features: Some(x.to_vec()),
        }
    }

    #[test]
    fn total_variation_examples() {
        let d = |a: &[f64], b: &[f64]| outcome_distance(&dist(a), &dist(b), &tv()).unwrap();
        assert_eq!(d(&[0.5, 0.5], &[0.5, 0.5]), 0.0);
        assert_eq!(d(&[1.0, 0.0], &[0.0, 1.0]), 1.0);
        assert!((d(&[0.7, 0.3], &[0.4, 0.6]) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn euclidean_and_score_metrics() {
        let cfg = MetricConfig {
            outcome_metric: OutcomeMetric::EuclideanOnDistribution,
            ..tv()
        };
        let d = outcome_distance(&dist(&[1.0, 0.0]), &dist(&[0.0, 1.0]), &cfg).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-15);

        let cfg = MetricConfig {
            outcome_metric: OutcomeMetric::AbsoluteScore,
            ..tv()
        };
        let d = outcome_distance(&OutcomeValue::Score(0.2), &OutcomeValue::Score(-0.3), &cfg).unwrap();
        assert_eq!(d, 0.5);
    }

    #[test]
    fn representation_errors() {
        let err = outcome_distance(&dist(&[0.5, 0.5]), &OutcomeValue::Score(0.1), &tv()).unwrap_err();
        assert_eq!(err.code(), "REPRESENTATION_ERROR");
        let err = outcome_distance(&OutcomeValue::Score(0.1), &OutcomeValue::Score(0.2), &tv()).unwrap_err();
        assert_eq!(err.code(), "REPRESENTATION_ERROR");
        let err = outcome_distance(&dist(&[0.5, 0.5]), &dist(&[0.2, 0.3, 0.5]), &tv()).unwrap_err();
        assert_eq!(err.code(), "REPRESENTATION_ERROR");
        let err = outcome_distance(&dist(&[f64::NAN, 0.5]), &dist(&[0.5, 0.5]), &tv()).unwrap_err();
        assert_eq!(err.code(), "DATA_ERROR");
    }

    #[test]
    fn standardized_euclidean_unit_example() {
        // Each column holds {1, 0, x, y} with x + y = -1 and x^2 + y^2 = 3,
        // i.e. mean 0 and unit variance, so a and b standardize to (1,0), (0,1).
        let r5 = 5f64.sqrt();
        let (x, y) = ((-1.0 + r5) / 2.0, (-1.0 - r5) / 2.0);
        let records = vec![
            rec("a", &[1.0, 0.0]),
            rec("b", &[0.0, 1.0]),
            rec("c", &[x, y]),
            rec("d", &[y, x]),
        ];
        let space = InputSpace::standardized(&records).unwrap();
        let d = input_distance(&records[0], &records[1], &space).unwrap();
        assert!((d - 1.0).abs() < 1e-12, "{d}");
        assert_eq!(input_distance(&records[0], &records[0], &space).unwrap(), 0.0);
        assert_eq!(space.distance_by_id("a", "b").unwrap(), d);
    }

    #[test]
    fn zero_variance_column_contributes_nothing() {
        let records = vec![rec("a", &[1.0, 5.0]), rec("b", &[3.0, 5.0])];
        let space = InputSpace::standardized(&records).unwrap();
        // column 0 standardizes to -1, +1; column 1 is constant
        let d = input_distance(&records[0], &records[1], &space).unwrap();
        assert!((d - 2.0 / 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn missing_features_is_data_error() {
        let mut r = rec("a", &[1.0]);
        r.features = None;
        let err = InputSpace::standardized(&[r, rec("b", &[1.0])]).unwrap_err();
        assert_eq!(err.code(), "DATA_ERROR");
    }

    #[test]
    fn matrix_lookup_is_symmetric() {
        let mut m = PairDistances::new();
        m.insert("id_3", "id_7", 0.42).unwrap();
        assert_eq!(m.get("id_7", "id_3"), Some(0.42));
        assert_eq!(m.get("id_3", "id_3"), Some(0.0));
        assert!(m.insert("id_7", "id_3", 0.42).is_ok());
        assert_eq!(m.insert("id_7", "id_3", 0.5).unwrap_err().code(), "DATA_ERROR");
        assert_eq!(m.insert("a", "a", 0.1).unwrap_err().code(), "DATA_ERROR");
        assert_eq!(m.insert("a", "b", -0.1).unwrap_err().code(), "DATA_ERROR");
        let space = InputSpace::Matrix(m);
        assert_eq!(space.distance_by_id("id_3", "id_7").unwrap(), 0.42);
        assert_eq!(
            space.distance_by_id("id_3", "zz").unwrap_err().code(),
            "MATRIX_INCOMPLETE"
        );
    }

    #[test]
    fn completeness_names_missing_pair() {
        let mut m = PairDistances::new();
        m.insert("a", "b", 0.1).unwrap();
        m.insert("a", "c", 0.2).unwrap();
        match m.check_complete(["c", "b", "a"]) {
            Err(FairnessError::MatrixIncomplete(x, y)) => assert_eq!((x.as_str(), y.as_str()), ("b", "c")),
            other => panic!("{other:?}"),
        }
    }
}
