//! Estimators for the noncomparative gap, individual-fairness slack,
//! statistical-parity gap and Lipschitz coupling constant.
//!
//! Every extremum is reduced in ascending id order with a strict comparison,
//! so ties resolve to the lexicographically smallest id (or id pair). The
//! pairwise scan runs in parallel per row, and rows are folded sequentially,
//! which keeps results identical for any thread count.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;

use super::distance::{distance_unchecked, outcome_distance, standardized_distance, InputSpace};
use crate::error::{FairnessError, Result};
use crate::types::{
    split_pairs, validate_records, AuditProfiles, EvaluationPair, EvaluationRecord,
    FairnessProfile, IfSlack, LipschitzEstimate, MetricConfig, OutcomeForm, OutcomeValue,
};

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonEstimate {
    pub value: f64,
    pub witness: String,
}

/// Largest outcome distance between system and benchmark over all pairs.
pub fn estimate_epsilon(pairs: &[EvaluationPair], metric: &MetricConfig) -> Result<EpsilonEstimate> {
    if pairs.is_empty() {
        return Err(FairnessError::EmptyDataset("no evaluation pairs".into()));
    }
    let mut order: Vec<&EvaluationPair> = pairs.iter().collect();
    order.sort_by(|a, b| a.id.cmp(&b.id));
    if let Some(w) = order.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(FairnessError::schema(format!("duplicate pair id '{}'", w[0].id)));
    }
    let mut best: Option<(f64, &str)> = None;
    for p in order {
        let d = outcome_distance(&p.out_g, &p.out_f, metric)?;
        if best.is_none_or(|(v, _)| d > v) {
            best = Some((d, &p.id));
        }
    }
    let (value, witness) = best.expect("non-empty");
    Ok(EpsilonEstimate {
        value,
        witness: witness.to_owned(),
    })
}

/// An extremal pair value with the ids attaining it (`ids.0 < ids.1`).
#[derive(Debug, Clone, PartialEq)]
pub struct PairExtremum {
    pub value: f64,
    pub ids: (String, String),
}

/// Largest outcome distance over unordered record pairs admitted by the
/// similarity predicate, or `None` when no pair qualifies.
pub fn max_qualifying_gap(
    records: &[EvaluationRecord],
    space: &InputSpace,
    metric: &MetricConfig,
) -> Result<Option<PairExtremum>> {
    metric.validate()?;
    if records.len() < 2 {
        return Err(FairnessError::data(format!(
            "individual-fairness estimation needs at least 2 records, got {}",
            records.len()
        )));
    }
    let shape = validate_records(records)?;
    metric.check_form(shape.form)?;

    let mut order: Vec<&EvaluationRecord> = records.iter().collect();
    order.sort_by(|a, b| a.id.cmp(&b.id));

    // Resolve standardized rows up front so the inner loop is allocation free.
    let rows: Option<(Vec<&[f64]>, usize)> = match space {
        InputSpace::Standardized { stats, rows } => {
            let resolved = order
                .iter()
                .map(|r| {
                    rows.get(&r.id).map(Vec::as_slice).ok_or_else(|| {
                        FairnessError::data(format!("record '{}' is not in the input space", r.id))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Some((resolved, stats.dim()))
        }
        InputSpace::Matrix(_) => None,
    };

    let kappa = metric.kappa;
    let direction = metric.similarity_direction;
    let outcome_metric = metric.outcome_metric;
    let n = order.len();

    let per_row: Vec<Result<Option<(f64, usize)>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best: Option<(f64, usize)> = None;
            for j in i + 1..n {
                let dx = match &rows {
                    Some((z, dim)) => standardized_distance(z[i], z[j], *dim),
                    None => space.distance_by_id(&order[i].id, &order[j].id)?,
                };
                if !direction.admits(dx, kappa) {
                    continue;
                }
                let dy = distance_unchecked(&order[i].outcome, &order[j].outcome, outcome_metric);
                if best.is_none_or(|(v, _)| dy > v) {
                    best = Some((dy, j));
                }
            }
            Ok(best)
        })
        .collect();

    let mut best: Option<(f64, usize, usize)> = None;
    for (i, row) in per_row.into_iter().enumerate() {
        if let Some((v, j)) = row? {
            if best.is_none_or(|(bv, _, _)| v > bv) {
                best = Some((v, i, j));
            }
        }
    }
    Ok(best.map(|(value, i, j)| PairExtremum {
        value,
        ids: (order[i].id.clone(), order[j].id.clone()),
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct IfSlackEstimate {
    pub slack: IfSlack,
    pub witness: Option<(String, String)>,
}

/// Smallest `delta` for which the evaluator is `(kappa, delta)`-individually
/// fair: the max over qualifying pairs of `d(out_i, out_j) - kappa`.
pub fn estimate_if_slack(
    records: &[EvaluationRecord],
    space: &InputSpace,
    metric: &MetricConfig,
) -> Result<IfSlackEstimate> {
    Ok(match max_qualifying_gap(records, space, metric)? {
        Some(ext) => IfSlackEstimate {
            slack: IfSlack::Value(ext.value - metric.kappa),
            witness: Some(ext.ids),
        },
        None => IfSlackEstimate {
            slack: IfSlack::Vacuous,
            witness: None,
        },
    })
}

/// The event whose group-conditional probability enters statistical parity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParityEvent {
    /// Every outcome of a distribution; the gap is the max over outcomes.
    AllOutcomes,
    /// A single outcome index of a distribution.
    Outcome(usize),
    /// For scores: the event `score >= threshold`.
    ScoreAtLeast(f64),
}

/// Per-group plug-in estimates of `P[outcome = y | group]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupTable {
    pub groups: Vec<String>,
    pub counts: Vec<usize>,
    /// Outcome index of each column (`[0]` for the score event).
    pub columns: Vec<usize>,
    /// `rates[g][c]`: group `g`, column `c`.
    pub rates: Vec<Vec<f64>>,
}

impl GroupTable {
    /// Builds the table. With `declared`, every declared group must have at
    /// least one record and no record may fall outside the declared set.
    pub fn build(
        records: &[EvaluationRecord],
        event: ParityEvent,
        declared: Option<&BTreeSet<String>>,
    ) -> Result<Self> {
        if records.is_empty() {
            return Err(FairnessError::EmptyDataset("no records".into()));
        }
        let shape = validate_records(records)?;
        let columns: Vec<usize> = match (shape.form, event) {
            (OutcomeForm::Distribution(k), ParityEvent::AllOutcomes) => (0..k).collect(),
            (OutcomeForm::Distribution(k), ParityEvent::Outcome(y)) => {
                if y >= k {
                    return Err(FairnessError::Config(format!(
                        "outcome index {y} out of range for {k} outcomes"
                    )));
                }
                vec![y]
            }
            (OutcomeForm::Distribution(_), ParityEvent::ScoreAtLeast(_)) => {
                return Err(FairnessError::Representation(
                    "score threshold event applied to distribution outcomes".into(),
                ))
            }
            (OutcomeForm::Score, ParityEvent::ScoreAtLeast(t)) => {
                if !t.is_finite() {
                    return Err(FairnessError::Config(format!("score threshold {t} is not finite")));
                }
                vec![0]
            }
            (OutcomeForm::Score, _) => {
                return Err(FairnessError::Config(
                    "score-form parity requires an explicit score threshold".into(),
                ))
            }
        };

        let mut order: Vec<&EvaluationRecord> = records.iter().collect();
        order.sort_by(|a, b| a.id.cmp(&b.id));

        let mut acc: BTreeMap<&str, (usize, Vec<f64>)> = BTreeMap::new();
        if let Some(declared) = declared {
            for g in declared {
                acc.insert(g.as_str(), (0, vec![0.0; columns.len()]));
            }
        }
        for r in order {
            if declared.is_some() && !acc.contains_key(r.group.as_str()) {
                return Err(FairnessError::data(format!(
                    "record '{}' has undeclared group '{}'",
                    r.id, r.group
                )));
            }
            let entry = acc
                .entry(r.group.as_str())
                .or_insert_with(|| (0, vec![0.0; columns.len()]));
            entry.0 += 1;
            match (&r.outcome, event) {
                (OutcomeValue::Distribution(p), _) => {
                    for (slot, &y) in entry.1.iter_mut().zip(&columns) {
                        *slot += p[y];
                    }
                }
                (OutcomeValue::Score(s), ParityEvent::ScoreAtLeast(t)) => {
                    if *s >= t {
                        entry.1[0] += 1.0;
                    }
                }
                _ => unreachable!("event checked against form"),
            }
        }

        let mut table = GroupTable {
            groups: Vec::with_capacity(acc.len()),
            counts: Vec::with_capacity(acc.len()),
            columns,
            rates: Vec::with_capacity(acc.len()),
        };
        for (g, (count, sums)) in acc {
            if count == 0 {
                return Err(FairnessError::EmptyGroup(g.to_owned()));
            }
            table.groups.push(g.to_owned());
            table.counts.push(count);
            table
                .rates
                .push(sums.into_iter().map(|s| s / count as f64).collect());
        }
        Ok(table)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParityGap {
    pub gap: f64,
    /// Group with the larger rate on the witnessing outcome.
    pub high_group: String,
    /// Group with the smaller rate on the witnessing outcome.
    pub low_group: String,
    pub outcome: usize,
    pub table: GroupTable,
}

/// Largest difference across groups of the probability of any outcome in `event`.
pub fn statistical_parity_gap(records: &[EvaluationRecord], event: ParityEvent) -> Result<ParityGap> {
    statistical_parity_gap_over(records, event, None)
}

/// [`statistical_parity_gap`] over a declared group set; an empty declared
/// group is an error.
pub fn statistical_parity_gap_over(
    records: &[EvaluationRecord],
    event: ParityEvent,
    declared: Option<&BTreeSet<String>>,
) -> Result<ParityGap> {
    let table = GroupTable::build(records, event, declared)?;
    if table.groups.len() < 2 {
        return Err(FairnessError::data(format!(
            "statistical parity needs at least 2 groups, found {}",
            table.groups.len()
        )));
    }
    // per column: max - min over groups (first index wins ties)
    let mut best: Option<(f64, usize, usize, usize)> = None;
    for c in 0..table.columns.len() {
        let (mut hi, mut lo) = (0, 0);
        for g in 1..table.groups.len() {
            if table.rates[g][c] > table.rates[hi][c] {
                hi = g;
            }
            if table.rates[g][c] < table.rates[lo][c] {
                lo = g;
            }
        }
        let gap = table.rates[hi][c] - table.rates[lo][c];
        if best.is_none_or(|(v, ..)| gap > v) {
            best = Some((gap, hi, lo, c));
        }
    }
    let (gap, mut hi, mut lo, c) = best.expect("at least one column");
    if hi == lo {
        hi = 0;
        lo = 1;
    }
    Ok(ParityGap {
        gap,
        high_group: table.groups[hi].clone(),
        low_group: table.groups[lo].clone(),
        outcome: table.columns[c],
        table,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzFit {
    pub estimate: LipschitzEstimate,
    /// Largest `|p(g, a, y) - p(f, a, y)|` over groups and outcomes.
    pub max_deviation: f64,
    /// `(group, outcome index)` attaining `max_deviation`.
    pub witness: (String, usize),
}

/// Empirical coupling constant: the largest group-probability deviation
/// between system and benchmark divided by `epsilon_hat`. Undefined when
/// `epsilon_hat <= tolerance`.
pub fn estimate_lipschitz(
    pairs: &[EvaluationPair],
    epsilon_hat: f64,
    event: ParityEvent,
    tolerance: f64,
) -> Result<LipschitzFit> {
    if pairs.is_empty() {
        return Err(FairnessError::EmptyDataset("no evaluation pairs".into()));
    }
    if !(epsilon_hat >= 0.0 && epsilon_hat.is_finite()) {
        return Err(FairnessError::data(format!(
            "epsilon_hat must be finite and non-negative, got {epsilon_hat}"
        )));
    }
    let (records_f, records_g) = split_pairs(pairs);
    let table_f = GroupTable::build(&records_f, event, None)?;
    let groups: BTreeSet<String> = table_f.groups.iter().cloned().collect();
    let table_g = GroupTable::build(&records_g, event, Some(&groups))?;

    let mut best: Option<(f64, usize, usize)> = None;
    for g in 0..table_f.groups.len() {
        for c in 0..table_f.columns.len() {
            let dev = (table_g.rates[g][c] - table_f.rates[g][c]).abs();
            if best.is_none_or(|(v, ..)| dev > v) {
                best = Some((dev, g, c));
            }
        }
    }
    let (max_deviation, g, c) = best.expect("non-empty table");
    let estimate = if epsilon_hat <= tolerance {
        LipschitzEstimate::UNDEFINED
    } else {
        LipschitzEstimate::defined(max_deviation / epsilon_hat)
    };
    Ok(LipschitzFit {
        estimate,
        max_deviation,
        witness: (table_f.groups[g].clone(), table_f.columns[c]),
    })
}

fn check_unique_ids(pairs: &[EvaluationPair]) -> Result<()> {
    let mut seen = HashSet::with_capacity(pairs.len());
    for p in pairs {
        if !seen.insert(p.id.as_str()) {
            return Err(FairnessError::schema(format!("duplicate pair id '{}'", p.id)));
        }
    }
    Ok(())
}

/// Computes the benchmark's and the system's profiles over aligned pairs.
pub fn audit_profiles(
    pairs: &[EvaluationPair],
    space: &InputSpace,
    metric: &MetricConfig,
    event: ParityEvent,
) -> Result<AuditProfiles> {
    metric.validate()?;
    check_unique_ids(pairs)?;
    let eps = estimate_epsilon(pairs, metric)?;
    let (records_f, records_g) = split_pairs(pairs);
    let if_f = estimate_if_slack(&records_f, space, metric)?;
    let if_g = estimate_if_slack(&records_g, space, metric)?;
    let sp_f = statistical_parity_gap(&records_f, event)?;
    let sp_g = statistical_parity_gap(&records_g, event)?;
    let lip = estimate_lipschitz(pairs, eps.value, event, metric.tolerance)?;

    let profile = |epsilon_hat: f64,
                   witness_eps: Option<&str>,
                   slack: &IfSlackEstimate,
                   sp: &ParityGap,
                   m_hat: LipschitzEstimate,
                   witness_m: Option<&(String, usize)>| {
        let mut witness_ids = BTreeMap::new();
        if let Some(id) = witness_eps {
            witness_ids.insert("epsilon".to_owned(), vec![id.to_owned()]);
        }
        if let Some((a, b)) = &slack.witness {
            witness_ids.insert("if_slack".to_owned(), vec![a.clone(), b.clone()]);
        }
        witness_ids.insert(
            "sp_gap".to_owned(),
            vec![sp.high_group.clone(), sp.low_group.clone(), sp.outcome.to_string()],
        );
        if let Some((group, y)) = witness_m {
            witness_ids.insert("m_hat".to_owned(), vec![group.clone(), y.to_string()]);
        }
        FairnessProfile {
            epsilon_hat,
            if_slack_hat: slack.slack,
            kappa: metric.kappa,
            sp_gap: sp.gap,
            m_hat,
            witness_ids,
        }
    };

    let m_witness = (!lip.estimate.undefined).then_some(&lip.witness);
    Ok(AuditProfiles {
        benchmark: profile(0.0, None, &if_f, &sp_f, LipschitzEstimate::UNDEFINED, None),
        system: profile(
            eps.value,
            Some(&eps.witness),
            &if_g,
            &sp_g,
            lip.estimate,
            m_witness,
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::PairDistances;
    use crate::types::{OutcomeMetric, SimilarityDirection};

    fn d(p: &[f64]) -> OutcomeValue {
        OutcomeValue::Distribution(p.to_vec())
    }

    fn pair(id: &str, group: &str, f: &[f64], g: &[f64]) -> EvaluationPair {
        EvaluationPair {
            id: id.into(),
            group: group.into(),
            features: None,
            out_f: d(f),
            out_g: d(g),
        }
    }

    fn rec(id: &str, group: &str, p: &[f64]) -> EvaluationRecord {
        EvaluationRecord {
            id: id.into(),
            group: group.into(),
            outcome: d(p),
            features: None,
        }
    }

    fn score(id: &str, group: &str, s: f64) -> EvaluationRecord {
        EvaluationRecord {
            id: id.into(),
            group: group.into(),
            outcome: OutcomeValue::Score(s),
            features: None,
        }
    }

    fn matrix(entries: &[(&str, &str, f64)]) -> InputSpace {
        let mut m = PairDistances::new();
        for (a, b, v) in entries {
            m.insert(a, b, *v).unwrap();
        }
        InputSpace::Matrix(m)
    }

    #[test]
    fn epsilon_identical_is_zero() {
        let pairs = vec![pair("a", "A", &[0.2, 0.8], &[0.2, 0.8]), pair("b", "B", &[1.0, 0.0], &[1.0, 0.0])];
        let e = estimate_epsilon(&pairs, &MetricConfig::default()).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.witness, "a");
    }

    #[test]
    fn epsilon_picks_max_distance() {
        // distances 0.1, 0.05, 0.2
        let pairs = vec![
            pair("p1", "A", &[0.5, 0.5], &[0.6, 0.4]),
            pair("p2", "A", &[0.5, 0.5], &[0.55, 0.45]),
            pair("p3", "B", &[0.5, 0.5], &[0.3, 0.7]),
        ];
        let e = estimate_epsilon(&pairs, &MetricConfig::default()).unwrap();
        assert!((e.value - 0.2).abs() < 1e-15);
        assert_eq!(e.witness, "p3");
    }

    #[test]
    fn epsilon_tie_uses_smallest_id() {
        let pairs = vec![
            pair("z", "A", &[1.0, 0.0], &[0.0, 1.0]),
            pair("m", "A", &[0.0, 1.0], &[1.0, 0.0]),
        ];
        assert_eq!(estimate_epsilon(&pairs, &MetricConfig::default()).unwrap().witness, "m");
    }

    #[test]
    fn epsilon_empty_errors() {
        let err = estimate_epsilon(&[], &MetricConfig::default()).unwrap_err();
        assert_eq!(err.code(), "EMPTY_DATASET");
    }

    #[test]
    fn if_slack_all_identical_is_minus_kappa() {
        let records = vec![rec("a", "A", &[0.5, 0.5]), rec("b", "A", &[0.5, 0.5]), rec("c", "B", &[0.5, 0.5])];
        let space = matrix(&[("a", "b", 0.3), ("a", "c", 0.5), ("b", "c", 0.1)]);
        let metric = MetricConfig { kappa: 0.2, input_metric: crate::types::InputMetric::SuppliedMatrix, ..Default::default() };
        let est = estimate_if_slack(&records, &space, &metric).unwrap();
        assert_eq!(est.slack, IfSlack::Value(-0.2));
        // literal mode admits (a,b) and (a,c); tie at distance 0 resolves to the smallest pair
        assert_eq!(est.witness, Some(("a".into(), "b".into())));
    }

    #[test]
    fn if_slack_kappa_zero_is_max_distance() {
        // pairwise outcome distances: (a,b)=0.1, (a,c)=0.3, (b,c)=0.2
        let records = vec![rec("a", "A", &[0.5, 0.5]), rec("b", "A", &[0.6, 0.4]), rec("c", "B", &[0.8, 0.2])];
        let space = matrix(&[("a", "b", 0.3), ("a", "c", 0.5), ("b", "c", 0.1)]);
        let est = estimate_if_slack(&records, &space, &MetricConfig::default()).unwrap();
        match est.slack {
            IfSlack::Value(v) => assert!((v - 0.3).abs() < 1e-15),
            IfSlack::Vacuous => panic!("vacuous"),
        }
        assert_eq!(est.witness, Some(("a".into(), "c".into())));
    }

    #[test]
    fn if_slack_vacuous_when_kappa_exceeds_all_distances() {
        let records = vec![rec("a", "A", &[0.5, 0.5]), rec("b", "A", &[0.6, 0.4])];
        let space = matrix(&[("a", "b", 0.3)]);
        let metric = MetricConfig { kappa: 0.31, ..Default::default() };
        assert_eq!(estimate_if_slack(&records, &space, &metric).unwrap().slack, IfSlack::Vacuous);
        // flipped mode admits the pair
        let metric = MetricConfig { kappa: 0.31, similarity_direction: SimilarityDirection::AtMost, ..Default::default() };
        assert!(!estimate_if_slack(&records, &space, &metric).unwrap().slack.is_vacuous());
    }

    #[test]
    fn if_slack_needs_two_records_and_complete_matrix() {
        let records = vec![rec("a", "A", &[0.5, 0.5])];
        let space = matrix(&[]);
        let err = estimate_if_slack(&records, &space, &MetricConfig::default()).unwrap_err();
        assert_eq!(err.code(), "DATA_ERROR");
        let records = vec![rec("a", "A", &[0.5, 0.5]), rec("b", "A", &[0.5, 0.5])];
        let err = estimate_if_slack(&records, &space, &MetricConfig::default()).unwrap_err();
        assert_eq!(err.code(), "MATRIX_INCOMPLETE");
    }

    fn binary(id: &str, group: &str, positive: bool) -> EvaluationRecord {
        rec(id, group, if positive { &[0.0, 1.0] } else { &[1.0, 0.0] })
    }

    #[test]
    fn parity_identical_tables_is_zero() {
        let records = vec![binary("1", "A", true), binary("2", "A", false), binary("3", "B", true), binary("4", "B", false)];
        let gap = statistical_parity_gap(&records, ParityEvent::AllOutcomes).unwrap();
        assert_eq!(gap.gap, 0.0);
        assert_eq!((gap.high_group.as_str(), gap.low_group.as_str()), ("A", "B"));
    }

    #[test]
    fn parity_counts_example() {
        // group A: 2 of 4 positive, group B: 1 of 4
        let mut records = Vec::new();
        for (i, pos) in [true, true, false, false].iter().enumerate() {
            records.push(binary(&format!("a{i}"), "A", *pos));
        }
        for (i, pos) in [true, false, false, false].iter().enumerate() {
            records.push(binary(&format!("b{i}"), "B", *pos));
        }
        let gap = statistical_parity_gap(&records, ParityEvent::Outcome(1)).unwrap();
        assert_eq!(gap.gap, 0.25);
        assert_eq!(gap.high_group, "A");
        assert_eq!(gap.table.counts, vec![4, 4]);
    }

    #[test]
    fn parity_three_groups() {
        // positive rates: X 0.5 (2/4), Y 0.25 (1/4), Z 0.4 (2/5)
        let mut records = Vec::new();
        let mut push = |g: &str, pos: usize, n: usize| {
            for i in 0..n {
                records.push(score(&format!("{g}{i}"), g, if i < pos { 1.0 } else { 0.0 }));
            }
        };
        push("X", 2, 4);
        push("Y", 1, 4);
        push("Z", 2, 5);
        let gap = statistical_parity_gap(&records, ParityEvent::ScoreAtLeast(0.5)).unwrap();
        assert_eq!(gap.gap, 0.25);
        assert_eq!((gap.high_group.as_str(), gap.low_group.as_str()), ("X", "Y"));
    }

    #[test]
    fn parity_errors() {
        let one_group = vec![binary("1", "A", true), binary("2", "A", false)];
        assert_eq!(
            statistical_parity_gap(&one_group, ParityEvent::AllOutcomes).unwrap_err().code(),
            "DATA_ERROR"
        );
        let declared: BTreeSet<String> = ["A", "B"].iter().map(|s| s.to_string()).collect();
        assert_eq!(
            statistical_parity_gap_over(&one_group, ParityEvent::AllOutcomes, Some(&declared))
                .unwrap_err()
                .code(),
            "EMPTY_GROUP"
        );
        let scores = vec![score("1", "A", 0.2), score("2", "B", 0.7)];
        assert_eq!(
            statistical_parity_gap(&scores, ParityEvent::AllOutcomes).unwrap_err().code(),
            "CONFIG_ERROR"
        );
        assert_eq!(
            statistical_parity_gap(&one_group, ParityEvent::ScoreAtLeast(0.5)).unwrap_err().code(),
            "REPRESENTATION_ERROR"
        );
    }

    #[test]
    fn lipschitz_identical_is_undefined() {
        let pairs = vec![pair("a", "A", &[0.2, 0.8], &[0.2, 0.8]), pair("b", "B", &[0.4, 0.6], &[0.4, 0.6])];
        let fit = estimate_lipschitz(&pairs, 0.0, ParityEvent::AllOutcomes, 1e-9).unwrap();
        assert!(fit.estimate.undefined);
        assert_eq!(fit.estimate.value, 0.0);
    }

    #[test]
    fn lipschitz_ratio_example() {
        // eps_hat = 0.2 (record b); group A mean shift on outcome 0 is 0.1
        let pairs = vec![
            pair("a", "A", &[0.5, 0.5], &[0.5, 0.5]),
            pair("b", "A", &[0.5, 0.5], &[0.7, 0.3]),
            pair("c", "B", &[0.5, 0.5], &[0.5, 0.5]),
        ];
        let eps = estimate_epsilon(&pairs, &MetricConfig::default()).unwrap();
        assert!((eps.value - 0.2).abs() < 1e-15);
        let fit = estimate_lipschitz(&pairs, eps.value, ParityEvent::AllOutcomes, 1e-9).unwrap();
        assert!((fit.estimate.value - 0.5).abs() < 1e-12);
        assert_eq!(fit.witness, ("A".to_owned(), 0));
    }

    #[test]
    fn lipschitz_one_group_shift_is_one() {
        let eps = 0.15;
        let fs = [[0.3, 0.7], [0.6, 0.4], [0.2, 0.8]];
        let mut pairs = Vec::new();
        for (i, f) in fs.iter().enumerate() {
            let g = [f[0] + eps, f[1] - eps];
            pairs.push(pair(&format!("a{i}"), "A", f, &g));
            pairs.push(pair(&format!("b{i}"), "B", f, f));
        }
        let e = estimate_epsilon(&pairs, &MetricConfig::default()).unwrap();
        let fit = estimate_lipschitz(&pairs, e.value, ParityEvent::AllOutcomes, 1e-9).unwrap();
        assert!((fit.estimate.value - 1.0).abs() < 1e-9, "{}", fit.estimate.value);
    }

    #[test]
    fn profiles_carry_witnesses() {
        let pairs = vec![
            pair("a", "A", &[0.5, 0.5], &[0.5, 0.5]),
            pair("b", "A", &[0.5, 0.5], &[0.7, 0.3]),
            pair("c", "B", &[0.5, 0.5], &[0.5, 0.5]),
        ];
        let space = matrix(&[("a", "b", 0.1), ("a", "c", 0.2), ("b", "c", 0.3)]);
        let metric = MetricConfig { outcome_metric: OutcomeMetric::TotalVariation, ..Default::default() };
        let prof = audit_profiles(&pairs, &space, &metric, ParityEvent::AllOutcomes).unwrap();
        assert_eq!(prof.benchmark.epsilon_hat, 0.0);
        assert!(prof.benchmark.m_hat.undefined);
        assert_eq!(prof.system.witness_ids["epsilon"], vec!["b".to_owned()]);
        assert_eq!(prof.system.witness_ids["if_slack"], vec!["a".to_owned(), "b".to_owned()]);
        assert!((prof.system.m_hat.value - 0.5).abs() < 1e-12);
    }
}
