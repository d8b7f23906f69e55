//! File loading with the path attached to every diagnostic.

use std::path::Path;

use anyhow::{Context, Result};
use ncfair::io::{
    align_pairs, load_config, parse_evaluations, parse_pair_distances, AuditConfig, Alignment,
};
use ncfair::metrics::{InputSpace, ParityEvent};
use ncfair::types::{split_pairs, InputMetric, MetricConfig};

pub struct Loaded {
    pub config: AuditConfig,
    pub alignment: Alignment,
    pub event: ParityEvent,
}

/// Loads the config and both evaluation files, then aligns them.
/// `system` is the evaluator under test (`g`), `benchmark` is `f`.
pub fn load(system: &Path, benchmark: &Path, config: &Path) -> Result<Loaded> {
    let config = load_config(config).with_context(|| format!("{}", config.display()))?;
    let sys = parse_evaluations(system).with_context(|| format!("{}", system.display()))?;
    let bench = parse_evaluations(benchmark).with_context(|| format!("{}", benchmark.display()))?;
    let alignment = align_pairs(&sys, &bench, config.align)
        .with_context(|| format!("aligning {} with {}", system.display(), benchmark.display()))?;
    if alignment.dropped() > 0 {
        eprintln!(
            "warning: dropped {} unmatched id(s) ({} system-only, {} benchmark-only)",
            alignment.dropped(),
            alignment.only_in_system.len(),
            alignment.only_in_benchmark.len()
        );
    }
    let form = alignment.pairs[0].out_f.form();
    config.metric.check_form(form)?;
    let event = config.parity_event(form, alignment.outcome_names.as_deref())?;
    Ok(Loaded {
        config,
        alignment,
        event,
    })
}

/// Input space over the aligned inputs, reading the pair-distance file when
/// the config selects a supplied matrix.
pub fn input_space(loaded: &Loaded, metric: &MetricConfig) -> Result<InputSpace> {
    let (records, _) = split_pairs(&loaded.alignment.pairs);
    let matrix = match metric.input_metric {
        InputMetric::SuppliedMatrix => {
            let path = loaded
                .config
                .paths
                .pair_distances
                .as_deref()
                .context("input-metric 'supplied-matrix' needs paths.pair-distances in the config")?;
            Some(parse_pair_distances(path).with_context(|| format!("{}", path.display()))?)
        }
        InputMetric::StandardizedEuclidean => None,
    };
    let space = InputSpace::for_metric(metric, &records, matrix);
    match &loaded.config.paths.pair_distances {
        Some(p) if metric.input_metric == InputMetric::SuppliedMatrix => {
            space.with_context(|| format!("{}", p.display()))
        }
        _ => Ok(space?),
    }
}
