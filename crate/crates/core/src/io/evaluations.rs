//! Evaluation CSV: `id,group`, then `p_<outcome>` columns or a single `score`
//! column, then optional `x_0..x_{m-1}` feature columns.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::Path;

use crate::error::{FairnessError, Result};
use crate::types::{EvaluationRecord, OutcomeValue, PROBABILITY_SUM_TOLERANCE};

/// Parsed evaluation file.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationSet {
    pub records: Vec<EvaluationRecord>,
    /// Outcome names in column order; `None` for score files.
    pub outcome_names: Option<Vec<String>>,
}

impl EvaluationSet {
    pub fn new(records: Vec<EvaluationRecord>, outcome_names: Option<Vec<String>>) -> Self {
        EvaluationSet {
            records,
            outcome_names,
        }
    }

    pub fn feature_dim(&self) -> usize {
        self.records
            .first()
            .and_then(|r| r.features.as_ref())
            .map_or(0, Vec::len)
    }
}

enum Column {
    Id,
    Group,
    Prob(usize),
    Score,
    Feature(usize),
}

struct Header {
    columns: Vec<Column>,
    outcome_names: Option<Vec<String>>,
    feature_dim: usize,
}

fn parse_header(fields: &csv::StringRecord) -> Result<Header> {
    let mut columns = Vec::with_capacity(fields.len());
    let mut names = Vec::new();
    let mut feature_idx = Vec::new();
    let (mut ids, mut groups, mut scores) = (0, 0, 0);
    for name in fields.iter() {
        let col = if name == "id" {
            ids += 1;
            Column::Id
        } else if name == "group" {
            groups += 1;
            Column::Group
        } else if name == "score" {
            scores += 1;
            Column::Score
        } else if let Some(outcome) = name.strip_prefix("p_") {
            if outcome.is_empty() || names.iter().any(|n: &String| n == outcome) {
                return Err(FairnessError::schema(format!("bad or repeated outcome column '{name}'")));
            }
            names.push(outcome.to_owned());
            Column::Prob(names.len() - 1)
        } else if let Some(idx) = name.strip_prefix("x_").and_then(|s| s.parse::<usize>().ok()) {
            feature_idx.push(idx);
            Column::Feature(idx)
        } else {
            return Err(FairnessError::schema(format!("unknown column '{name}'")));
        };
        columns.push(col);
    }
    if ids != 1 || groups != 1 {
        return Err(FairnessError::schema("header needs exactly one 'id' and one 'group' column"));
    }
    match (names.is_empty(), scores) {
        (false, 0) if names.len() < 2 => {
            return Err(FairnessError::schema("distribution form needs at least 2 p_ columns"))
        }
        (false, 0) | (true, 1) => {}
        (false, _) => {
            return Err(FairnessError::schema(
                "mixed forms: both p_ columns and a score column",
            ))
        }
        (true, 0) => return Err(FairnessError::schema("no p_ columns and no score column")),
        (true, _) => return Err(FairnessError::schema("repeated score column")),
    }
    let mut sorted = feature_idx.clone();
    sorted.sort_unstable();
    if sorted.iter().enumerate().any(|(i, &x)| i != x) {
        return Err(FairnessError::schema("feature columns must be x_0..x_{m-1} without gaps"));
    }
    Ok(Header {
        columns,
        outcome_names: (!names.is_empty()).then_some(names),
        feature_dim: feature_idx.len(),
    })
}

fn number(cell: &str, what: &str, row: usize) -> Result<f64> {
    let v: f64 = cell
        .trim()
        .parse()
        .map_err(|_| FairnessError::data_at(format!("{what}: '{cell}' is not a number"), row))?;
    if !v.is_finite() {
        return Err(FairnessError::data_at(format!("{what}: '{cell}' is not finite"), row));
    }
    Ok(v)
}

/// Rounding left by summing decimal probabilities in floating point. Rows
/// within this of 1 are kept verbatim so canonical files parse to the exact
/// values they were written from.
const SUMMATION_NOISE: f64 = 1e-12;

/// Parses evaluation CSV text. Distribution rows whose sum is off by at most
/// 1e-6 are renormalized; larger deviations are rejected.
pub fn parse_evaluations_str(text: &str) -> Result<EvaluationSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| FairnessError::schema(format!("unreadable header: {e}")))?
        .clone();
    let header = parse_header(&headers)?;
    let k = header.outcome_names.as_ref().map_or(0, Vec::len);

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            FairnessError::schema_at(format!("malformed row: {e}"), line)
        })?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let mut id = String::new();
        let mut group = String::new();
        let mut probs = vec![0.0; k];
        let mut score = 0.0;
        let mut features = vec![0.0; header.feature_dim];
        for (col, cell) in header.columns.iter().zip(row.iter()) {
            match col {
                Column::Id => id = cell.to_owned(),
                Column::Group => group = cell.to_owned(),
                Column::Prob(y) => probs[*y] = number(cell, "probability", line)?,
                Column::Score => score = number(cell, "score", line)?,
                Column::Feature(c) => features[*c] = number(cell, "feature", line)?,
            }
        }
        if id.is_empty() {
            return Err(FairnessError::schema_at("empty id", line));
        }
        if !seen.insert(id.clone()) {
            return Err(FairnessError::schema_at(format!("duplicate id '{id}'"), line));
        }
        let outcome = if k > 0 {
            if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                return Err(FairnessError::data_at(format!("probability {p} outside [0, 1]"), line));
            }
            let sum: f64 = probs.iter().sum();
            if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
                return Err(FairnessError::data_at(
                    format!("probabilities for '{id}' sum to {sum}"),
                    line,
                ));
            }
            if (sum - 1.0).abs() > SUMMATION_NOISE {
                probs.iter_mut().for_each(|p| *p /= sum);
            }
            OutcomeValue::Distribution(probs)
        } else {
            OutcomeValue::Score(score)
        };
        records.push(EvaluationRecord {
            id,
            group,
            outcome,
            features: (header.feature_dim > 0).then_some(features),
        });
    }
    if records.is_empty() {
        return Err(FairnessError::EmptyDataset("file has no data rows".into()));
    }
    Ok(EvaluationSet {
        records,
        outcome_names: header.outcome_names,
    })
}

pub fn parse_evaluations(path: &Path) -> Result<EvaluationSet> {
    let text = fs::read_to_string(path).map_err(|source| FairnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_evaluations_str(&text)
}

/// Fixed nine-decimal rendering used by every canonical file.
pub fn format_decimal(v: f64) -> String {
    format!("{v:.9}")
}

/// Canonical CSV: rows ascending by id, numbers with nine decimals.
pub fn write_evaluations(set: &EvaluationSet) -> String {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let m = set.feature_dim();
    let mut header = vec!["id".to_owned(), "group".to_owned()];
    match &set.outcome_names {
        Some(names) => header.extend(names.iter().map(|n| format!("p_{n}"))),
        None => header.push("score".to_owned()),
    }
    header.extend((0..m).map(|i| format!("x_{i}")));
    out.write_record(&header).expect("in-memory write");

    let by_id: BTreeMap<&str, &EvaluationRecord> =
        set.records.iter().map(|r| (r.id.as_str(), r)).collect();
    for r in by_id.values() {
        let mut row = vec![r.id.clone(), r.group.clone()];
        match &r.outcome {
            OutcomeValue::Distribution(p) => row.extend(p.iter().map(|v| format_decimal(*v))),
            OutcomeValue::Score(s) => row.push(format_decimal(*s)),
        }
        if let Some(x) = &r.features {
            row.extend(x.iter().map(|v| format_decimal(*v)));
        }
        out.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(out.into_inner().expect("flush")).expect("utf-8")
}
