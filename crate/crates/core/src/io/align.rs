use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::evaluations::EvaluationSet;
use crate::error::{FairnessError, Result};
use crate::types::{EvaluationPair, EvaluationRecord};

/// How ids present in only one of the two files are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlignMode {
    #[default]
    Strict,
    /// Drop unmatched ids and report how many were dropped.
    Drop,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Alignment {
    /// Pairs ascending by id.
    pub pairs: Vec<EvaluationPair>,
    pub only_in_system: Vec<String>,
    pub only_in_benchmark: Vec<String>,
    pub outcome_names: Option<Vec<String>>,
}

impl Alignment {
    pub fn dropped(&self) -> usize {
        self.only_in_system.len() + self.only_in_benchmark.len()
    }
}

/// Inner join of the system's (`g`) and the benchmark's (`f`) records on id.
pub fn align_pairs(
    system: &EvaluationSet,
    benchmark: &EvaluationSet,
    mode: AlignMode,
) -> Result<Alignment> {
    if system.outcome_names != benchmark.outcome_names {
        return Err(FairnessError::Representation(format!(
            "outcome columns differ: system {:?}, benchmark {:?}",
            system.outcome_names, benchmark.outcome_names
        )));
    }
    let index = |set: &EvaluationSet| -> Result<BTreeMap<String, EvaluationRecord>> {
        let mut map = BTreeMap::new();
        for r in &set.records {
            if map.insert(r.id.clone(), r.clone()).is_some() {
                return Err(FairnessError::schema(format!("duplicate id '{}'", r.id)));
            }
        }
        Ok(map)
    };
    let sys = index(system)?;
    let bench = index(benchmark)?;

    let only_in_system: Vec<String> = sys.keys().filter(|k| !bench.contains_key(*k)).cloned().collect();
    let only_in_benchmark: Vec<String> = bench.keys().filter(|k| !sys.contains_key(*k)).cloned().collect();

    let mut pairs = Vec::new();
    for (id, g) in &sys {
        let Some(f) = bench.get(id) else { continue };
        if f.group != g.group {
            return Err(FairnessError::data(format!(
                "id '{id}' has group '{}' in the system file but '{}' in the benchmark file",
                g.group, f.group
            )));
        }
        if f.features != g.features {
            return Err(FairnessError::data(format!(
                "id '{id}' has different features in the two files"
            )));
        }
        if f.outcome.form() != g.outcome.form() {
            return Err(FairnessError::Representation(format!(
                "id '{id}' uses different outcome representations"
            )));
        }
        pairs.push(EvaluationPair {
            id: id.clone(),
            group: f.group.clone(),
            features: f.features.clone(),
            out_f: f.outcome.clone(),
            out_g: g.outcome.clone(),
        });
    }
    if pairs.is_empty() {
        return Err(FairnessError::EmptyDataset(
            "the two files share no ids".into(),
        ));
    }
    if mode == AlignMode::Strict && !(only_in_system.is_empty() && only_in_benchmark.is_empty()) {
        let mut unmatched: Vec<&str> = only_in_system
            .iter()
            .chain(&only_in_benchmark)
            .map(String::as_str)
            .collect();
        unmatched.sort_unstable();
        return Err(FairnessError::data(format!(
            "ids present in only one file: {{{}}}",
            unmatched.join(", ")
        )));
    }
    Ok(Alignment {
        pairs,
        only_in_system,
        only_in_benchmark,
        outcome_names: system.outcome_names.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_evaluations_str;

    fn set(rows: &[(&str, &str, f64)]) -> EvaluationSet {
        let mut text = String::from("id,group,score\n");
        for (id, g, s) in rows {
            text.push_str(&format!("{id},{g},{s}\n"));
        }
        parse_evaluations_str(&text).unwrap()
    }

    #[test]
    fn identical_ids_sorted() {
        let a = set(&[("c", "A", 0.1), ("a", "A", 0.2), ("b", "B", 0.3)]);
        let b = set(&[("b", "B", 0.3), ("a", "A", 0.2), ("c", "A", 0.0)]);
        let al = align_pairs(&a, &b, AlignMode::Strict).unwrap();
        let ids: Vec<&str> = al.pairs.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert_eq!(al.dropped(), 0);
    }

    #[test]
    fn strict_lists_unmatched() {
        let a = set(&[("a", "A", 0.1), ("b", "A", 0.2), ("c", "B", 0.3)]);
        let b = set(&[("b", "A", 0.1), ("c", "B", 0.2), ("d", "B", 0.3)]);
        let err = align_pairs(&a, &b, AlignMode::Strict).unwrap_err();
        assert_eq!(err.code(), "DATA_ERROR");
        assert!(err.to_string().contains("{a, d}"), "{err}");
        let al = align_pairs(&a, &b, AlignMode::Drop).unwrap();
        assert_eq!(al.pairs.len(), 2);
        assert_eq!(al.dropped(), 2);
    }

    #[test]
    fn mismatches() {
        let a = set(&[("a", "A", 0.1)]);
        let b = set(&[("a", "B", 0.1)]);
        assert_eq!(align_pairs(&a, &b, AlignMode::Strict).unwrap_err().code(), "DATA_ERROR");
        let c = set(&[("z", "A", 0.1)]);
        assert_eq!(align_pairs(&a, &c, AlignMode::Drop).unwrap_err().code(), "EMPTY_DATASET");
        let d = parse_evaluations_str("id,group,p_x,p_y\na,A,0.5,0.5\n").unwrap();
        assert_eq!(
            align_pairs(&a, &d, AlignMode::Strict).unwrap_err().code(),
            "REPRESENTATION_ERROR"
        );
    }
}
