use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::align::AlignMode;
use crate::certification::ScreeningConfig;
use crate::error::{FairnessError, Result};
use crate::metrics::ParityEvent;
use crate::types::{MetricConfig, OutcomeForm};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct PathsConfig {
    #[serde(default)]
    pub system: Option<PathBuf>,
    #[serde(default)]
    pub benchmark: Option<PathBuf>,
    #[serde(default)]
    pub pair_distances: Option<PathBuf>,
}

/// Audit configuration file (JSON, kebab-case keys).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct AuditConfig {
    #[serde(default)]
    pub metric: MetricConfig,
    #[serde(default)]
    pub screening: Option<ScreeningConfig>,
    #[serde(default)]
    pub paths: PathsConfig,
    /// Event threshold for score-form parity. Required for score files.
    #[serde(default)]
    pub score_threshold: Option<f64>,
    /// Restricts distribution-form parity to one named outcome.
    #[serde(default)]
    pub parity_outcome: Option<String>,
    #[serde(default)]
    pub align: AlignMode,
}

impl AuditConfig {
    pub fn validate(&self) -> Result<()> {
        self.metric.validate()?;
        if let Some(s) = &self.screening {
            s.validate()?;
        }
        if let Some(t) = self.score_threshold {
            if !t.is_finite() {
                return Err(FairnessError::Config("score-threshold must be finite".into()));
            }
        }
        Ok(())
    }

    /// Resolves the parity event for a dataset of the given form.
    pub fn parity_event(
        &self,
        form: OutcomeForm,
        outcome_names: Option<&[String]>,
    ) -> Result<ParityEvent> {
        match form {
            OutcomeForm::Score => {
                if self.parity_outcome.is_some() {
                    return Err(FairnessError::Config(
                        "parity-outcome applies to distribution files only".into(),
                    ));
                }
                self.score_threshold
                    .map(ParityEvent::ScoreAtLeast)
                    .ok_or_else(|| {
                        FairnessError::Config(
                            "score files need an explicit score-threshold for parity".into(),
                        )
                    })
            }
            OutcomeForm::Distribution(_) => {
                if self.score_threshold.is_some() {
                    return Err(FairnessError::Config(
                        "score-threshold given for a distribution file".into(),
                    ));
                }
                match &self.parity_outcome {
                    None => Ok(ParityEvent::AllOutcomes),
                    Some(name) => outcome_names
                        .and_then(|names| names.iter().position(|n| n == name))
                        .map(ParityEvent::Outcome)
                        .ok_or_else(|| {
                            FairnessError::Config(format!("unknown parity-outcome '{name}'"))
                        }),
                }
            }
        }
    }
}

pub fn parse_config_str(text: &str) -> Result<AuditConfig> {
    let cfg: AuditConfig = serde_json::from_str(text)
        .map_err(|e| FairnessError::Config(format!("invalid config JSON: {e}")))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Loads a config file; relative paths inside it resolve against its directory.
pub fn load_config(path: &Path) -> Result<AuditConfig> {
    let text = fs::read_to_string(path).map_err(|source| FairnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut cfg = parse_config_str(&text)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    for p in [
        &mut cfg.paths.system,
        &mut cfg.paths.benchmark,
        &mut cfg.paths.pair_distances,
    ]
    .into_iter()
    .flatten()
    {
        if p.is_relative() {
            *p = base.join(&*p);
        }
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{InputMetric, SimilarityDirection};

    #[test]
    fn full_config() {
        let cfg = parse_config_str(
            r#"{
                "metric": {"outcome-metric": "total-variation", "input-metric": "supplied-matrix",
                           "kappa": 0.1, "similarity-direction": "at-most"},
                "screening": {"delta-benchmark": 0.05, "delta-prime": 0.4, "kappa": 0.1},
                "paths": {"pair-distances": "d.csv"},
                "parity-outcome": "grant",
                "align": "drop"
            }"#,
        )
        .unwrap();
        assert_eq!(cfg.metric.input_metric, InputMetric::SuppliedMatrix);
        assert_eq!(cfg.metric.similarity_direction, SimilarityDirection::AtMost);
        assert_eq!(cfg.align, AlignMode::Drop);
        let names = vec!["deny".to_owned(), "grant".to_owned()];
        assert_eq!(
            cfg.parity_event(OutcomeForm::Distribution(2), Some(&names)).unwrap(),
            ParityEvent::Outcome(1)
        );
    }

    #[test]
    fn score_parity_requires_threshold() {
        let cfg = parse_config_str("{}").unwrap();
        assert_eq!(cfg.parity_event(OutcomeForm::Score, None).unwrap_err().code(), "CONFIG_ERROR");
        assert_eq!(
            cfg.parity_event(OutcomeForm::Distribution(2), None).unwrap(),
            ParityEvent::AllOutcomes
        );
    }

    #[test]
    fn rejects_bad_config() {
        assert_eq!(parse_config_str(r#"{"metric": {"tolerance": 0}}"#).unwrap_err().code(), "CONFIG_ERROR");
        assert_eq!(parse_config_str(r#"{"bogus": 1}"#).unwrap_err().code(), "CONFIG_ERROR");
    }
}
