//! Brute-force recomputation of every fairness quantity.
//!
//! Nothing here calls into `crate::metrics`: distances, standardization,
//! group tables and extrema are re-derived with plain nested loops over all
//! ordered pairs, so agreement with the optimized estimators is evidence that
//! both are right.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{FairnessError, Result};
use crate::metrics::{PairDistances, ParityEvent};
use crate::types::{
    AuditProfiles, EvaluationPair, FairnessProfile, IfSlack, InputMetric, LipschitzEstimate,
    MetricConfig, OutcomeMetric, OutcomeValue, SimilarityDirection,
};

fn oracle_distance(a: &OutcomeValue, b: &OutcomeValue, metric: OutcomeMetric) -> Result<f64> {
    match (a, b) {
        (OutcomeValue::Distribution(p), OutcomeValue::Distribution(q)) if p.len() == q.len() => {
            let mut l1 = 0.0;
            let mut l2 = 0.0;
            for k in 0..p.len() {
                let diff = p[k] - q[k];
                if !diff.is_finite() {
                    return Err(FairnessError::data("non-finite probability"));
                }
                l1 += diff.abs();
                l2 += diff * diff;
            }
            match metric {
                OutcomeMetric::TotalVariation => Ok(l1 / 2.0),
                OutcomeMetric::EuclideanOnDistribution => Ok(l2.sqrt()),
                OutcomeMetric::AbsoluteScore => {
                    Err(FairnessError::Representation("score metric on distributions".into()))
                }
            }
        }
        (OutcomeValue::Score(x), OutcomeValue::Score(y)) => match metric {
            OutcomeMetric::AbsoluteScore if x.is_finite() && y.is_finite() => {
                Ok(if x > y { x - y } else { y - x })
            }
            OutcomeMetric::AbsoluteScore => Err(FairnessError::data("non-finite score")),
            _ => Err(FairnessError::Representation("distribution metric on scores".into())),
        },
        _ => Err(FairnessError::Representation("mismatched outcome forms".into())),
    }
}

struct Inputs<'a> {
    pairs: &'a [EvaluationPair],
    metric: &'a MetricConfig,
    matrix: Option<&'a PairDistances>,
    mean: Vec<f64>,
    sd: Vec<f64>,
}

impl<'a> Inputs<'a> {
    fn new(pairs: &'a [EvaluationPair], metric: &'a MetricConfig, matrix: Option<&'a PairDistances>) -> Result<Self> {
        let mut mean = Vec::new();
        let mut sd = Vec::new();
        if metric.input_metric == InputMetric::StandardizedEuclidean {
            let m = match pairs[0].features.as_ref() {
                Some(x) if !x.is_empty() => x.len(),
                _ => return Err(FairnessError::data("no features")),
            };
            for c in 0..m {
                let mut col = Vec::with_capacity(pairs.len());
                for p in pairs {
                    match &p.features {
                        Some(x) if x.len() == m => col.push(x[c]),
                        _ => return Err(FairnessError::data(format!("bad features for '{}'", p.id))),
                    }
                }
                let mu = col.iter().sum::<f64>() / col.len() as f64;
                let var = col.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / col.len() as f64;
                mean.push(mu);
                sd.push(var.sqrt());
            }
        }
        Ok(Inputs { pairs, metric, matrix, mean, sd })
    }

    fn distance(&self, i: usize, j: usize) -> Result<f64> {
        let (a, b) = (&self.pairs[i], &self.pairs[j]);
        match self.metric.input_metric {
            InputMetric::SuppliedMatrix => {
                let m = self
                    .matrix
                    .ok_or_else(|| FairnessError::data("no distance matrix"))?;
                m.get(&a.id, &b.id)
                    .ok_or_else(|| FairnessError::MatrixIncomplete(a.id.clone(), b.id.clone()))
            }
            InputMetric::StandardizedEuclidean => {
                let (xa, xb) = (a.features.as_ref().unwrap(), b.features.as_ref().unwrap());
                let mut sq = 0.0;
                for c in 0..self.mean.len() {
                    if self.sd[c] > 0.0 {
                        let za = (xa[c] - self.mean[c]) / self.sd[c];
                        let zb = (xb[c] - self.mean[c]) / self.sd[c];
                        sq += (za - zb) * (za - zb);
                    }
                }
                Ok(sq.sqrt() / (self.mean.len() as f64).sqrt())
            }
        }
    }
}

fn qualifies(dx: f64, metric: &MetricConfig) -> bool {
    match metric.similarity_direction {
        SimilarityDirection::AtLeast => dx >= metric.kappa,
        SimilarityDirection::AtMost => dx <= metric.kappa,
    }
}

fn oracle_slack(
    inputs: &Inputs,
    outcome: impl Fn(&EvaluationPair) -> &OutcomeValue,
) -> Result<(IfSlack, Option<(String, String)>)> {
    let pairs = inputs.pairs;
    let metric = inputs.metric;
    let mut found: Vec<(f64, String, String)> = Vec::new();
    for i in 0..pairs.len() {
        for j in 0..pairs.len() {
            if i == j {
                continue;
            }
            if !qualifies(inputs.distance(i, j)?, metric) {
                continue;
            }
            let d = oracle_distance(outcome(&pairs[i]), outcome(&pairs[j]), metric.outcome_metric)?;
            let (a, b) = if pairs[i].id < pairs[j].id { (i, j) } else { (j, i) };
            found.push((d, pairs[a].id.clone(), pairs[b].id.clone()));
        }
    }
    if found.is_empty() {
        return Ok((IfSlack::Vacuous, None));
    }
    let top = found.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
    let witness = found
        .iter()
        .filter(|t| t.0 == top)
        .map(|t| (t.1.clone(), t.2.clone()))
        .min()
        .expect("non-empty");
    Ok((IfSlack::Value(top - metric.kappa), Some(witness)))
}

/// `rates[group][column]` computed by filtering the whole list once per group.
fn oracle_rates(
    pairs: &[EvaluationPair],
    event: ParityEvent,
    outcome: impl Fn(&EvaluationPair) -> &OutcomeValue,
) -> Result<BTreeMap<String, Vec<f64>>> {
    let groups: BTreeSet<&str> = pairs.iter().map(|p| p.group.as_str()).collect();
    let mut out = BTreeMap::new();
    for g in groups {
        let members: Vec<&EvaluationPair> = pairs.iter().filter(|p| p.group == g).collect();
        let column_values: Vec<Vec<f64>> = members
            .iter()
            .map(|p| match (outcome(p), event) {
                (OutcomeValue::Distribution(v), ParityEvent::AllOutcomes) => Ok(v.clone()),
                (OutcomeValue::Distribution(v), ParityEvent::Outcome(y)) => v
                    .get(y)
                    .map(|x| vec![*x])
                    .ok_or_else(|| FairnessError::Config("outcome index out of range".into())),
                (OutcomeValue::Score(s), ParityEvent::ScoreAtLeast(t)) => {
                    Ok(vec![if *s >= t { 1.0 } else { 0.0 }])
                }
                (OutcomeValue::Distribution(_), ParityEvent::ScoreAtLeast(_)) => Err(
                    FairnessError::Representation("threshold event on distributions".into()),
                ),
                (OutcomeValue::Score(_), _) => Err(FairnessError::Config(
                    "score parity requires a threshold".into(),
                )),
            })
            .collect::<Result<_>>()?;
        let width = column_values[0].len();
        let rates = (0..width)
            .map(|c| column_values.iter().map(|v| v[c]).sum::<f64>() / members.len() as f64)
            .collect();
        out.insert(g.to_owned(), rates);
    }
    Ok(out)
}

fn oracle_gap(rates: &BTreeMap<String, Vec<f64>>) -> Result<f64> {
    if rates.len() < 2 {
        return Err(FairnessError::data("fewer than 2 groups"));
    }
    let mut gap: f64 = 0.0;
    for (a, ra) in rates {
        for (b, rb) in rates {
            if a == b {
                continue;
            }
            for c in 0..ra.len() {
                gap = gap.max((ra[c] - rb[c]).abs());
            }
        }
    }
    Ok(gap)
}

/// Recomputes both profiles by exhaustive enumeration.
pub fn oracle_recompute(
    pairs: &[EvaluationPair],
    metric: &MetricConfig,
    matrix: Option<&PairDistances>,
    event: ParityEvent,
) -> Result<AuditProfiles> {
    if pairs.is_empty() {
        return Err(FairnessError::EmptyDataset("no evaluation pairs".into()));
    }

    let mut eps_all = Vec::with_capacity(pairs.len());
    for p in pairs {
        eps_all.push((oracle_distance(&p.out_g, &p.out_f, metric.outcome_metric)?, &p.id));
    }
    let eps = eps_all.iter().map(|t| t.0).fold(0.0, f64::max);
    let eps_witness = eps_all
        .iter()
        .filter(|t| t.0 == eps)
        .map(|t| t.1)
        .min()
        .expect("non-empty")
        .clone();

    if pairs.len() < 2 {
        return Err(FairnessError::data("need at least 2 records"));
    }
    let inputs = Inputs::new(pairs, metric, matrix)?;
    let (slack_f, wit_f) = oracle_slack(&inputs, |p| &p.out_f)?;
    let (slack_g, wit_g) = oracle_slack(&inputs, |p| &p.out_g)?;

    let rates_f = oracle_rates(pairs, event, |p| &p.out_f)?;
    let rates_g = oracle_rates(pairs, event, |p| &p.out_g)?;
    let sp_f = oracle_gap(&rates_f)?;
    let sp_g = oracle_gap(&rates_g)?;

    let m_hat = if eps <= metric.tolerance {
        LipschitzEstimate::UNDEFINED
    } else {
        let mut dev: f64 = 0.0;
        for (g, rf) in &rates_f {
            let rg = &rates_g[g];
            for c in 0..rf.len() {
                dev = dev.max((rg[c] - rf[c]).abs());
            }
        }
        LipschitzEstimate::defined(dev / eps)
    };

    let profile = |epsilon_hat, slack, witness: Option<(String, String)>, sp_gap, m_hat, eps_id: Option<String>| {
        let mut witness_ids = BTreeMap::new();
        if let Some(id) = eps_id {
            witness_ids.insert("epsilon".to_owned(), vec![id]);
        }
        if let Some((a, b)) = witness {
            witness_ids.insert("if_slack".to_owned(), vec![a, b]);
        }
        FairnessProfile {
            epsilon_hat,
            if_slack_hat: slack,
            kappa: metric.kappa,
            sp_gap,
            m_hat,
            witness_ids,
        }
    };
    Ok(AuditProfiles {
        benchmark: profile(0.0, slack_f, wit_f, sp_f, LipschitzEstimate::UNDEFINED, None),
        system: profile(eps, slack_g, wit_g, sp_g, m_hat, Some(eps_witness)),
    })
}

/// Largest absolute difference between the quantities of two profiles, or
/// `None` when their vacuity or definedness markers disagree.
pub fn profile_discrepancy(a: &FairnessProfile, b: &FairnessProfile) -> Option<f64> {
    let slack = match (a.if_slack_hat, b.if_slack_hat) {
        (IfSlack::Value(x), IfSlack::Value(y)) => (x - y).abs(),
        (IfSlack::Vacuous, IfSlack::Vacuous) => 0.0,
        _ => return None,
    };
    if a.m_hat.undefined != b.m_hat.undefined {
        return None;
    }
    Some(
        [
            (a.epsilon_hat - b.epsilon_hat).abs(),
            slack,
            (a.sp_gap - b.sp_gap).abs(),
            (a.m_hat.value - b.m_hat.value).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_dataset_error() {
        let err = oracle_recompute(&[], &MetricConfig::default(), None, ParityEvent::AllOutcomes).unwrap_err();
        assert_eq!(err.code(), "EMPTY_DATASET");
    }

    #[test]
    fn hand_example() {
        let mk = |id: &str, g: &str, f: [f64; 2], s: [f64; 2]| EvaluationPair {
            id: id.into(),
            group: g.into(),
            features: None,
            out_f: OutcomeValue::Distribution(f.to_vec()),
            out_g: OutcomeValue::Distribution(s.to_vec()),
        };
        let pairs = vec![
            mk("a", "A", [0.5, 0.5], [0.5, 0.5]),
            mk("b", "A", [0.5, 0.5], [0.7, 0.3]),
            mk("c", "B", [0.5, 0.5], [0.5, 0.5]),
        ];
        let mut m = PairDistances::new();
        m.insert("a", "b", 0.1).unwrap();
        m.insert("a", "c", 0.2).unwrap();
        m.insert("b", "c", 0.3).unwrap();
        let metric = MetricConfig { input_metric: InputMetric::SuppliedMatrix, ..Default::default() };
        let p = oracle_recompute(&pairs, &metric, Some(&m), ParityEvent::AllOutcomes).unwrap();
        assert!((p.system.epsilon_hat - 0.2).abs() < 1e-15);
        assert!((p.system.m_hat.value - 0.5).abs() < 1e-12);
        assert!((p.system.sp_gap - 0.1).abs() < 1e-12);
        assert_eq!(p.benchmark.sp_gap, 0.0);
        assert_eq!(p.benchmark.if_slack_hat, IfSlack::Value(0.0));
    }
}
