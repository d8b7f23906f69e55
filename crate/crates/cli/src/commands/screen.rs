use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use ncfair::certification::{screen_individual, screen_parity, Check, MMode};
use ncfair::metrics::{
    estimate_epsilon, estimate_if_slack, estimate_lipschitz, statistical_parity_gap,
};
use ncfair::types::{split_pairs, FairnessProfile, IfSlack, LipschitzEstimate};

use crate::load::{input_space, load};
use crate::report::{emit, screen_summary, ScreenReport};
use crate::SummaryFormat;

/// Returns whether every requested corollary passed.
pub fn run(
    candidate: &Path,
    benchmark: &Path,
    config: &Path,
    out: Option<&Path>,
    summary: SummaryFormat,
) -> Result<bool> {
    let loaded = load(candidate, benchmark, config)?;
    let screening = loaded
        .config
        .screening
        .clone()
        .with_context(|| format!("{}: CONFIG_ERROR: screen needs a \"screening\" section", config.display()))?;
    screening.validate()?;
    let pairs = &loaded.alignment.pairs;
    let mut metric = loaded.config.metric.clone();
    metric.kappa = screening.kappa;

    let eps = estimate_epsilon(pairs, &metric)?;
    let (records_f, _) = split_pairs(pairs);
    let wants = |c: Check| screening.corollaries.contains(&c);

    // only measure what the requested thresholds actually depend on
    let mut benchmark_profile = FairnessProfile {
        epsilon_hat: 0.0,
        if_slack_hat: IfSlack::Vacuous,
        kappa: screening.kappa,
        sp_gap: 0.0,
        m_hat: LipschitzEstimate::UNDEFINED,
        witness_ids: BTreeMap::new(),
    };
    if wants(Check::Cor1) && screening.delta_benchmark_if.or(screening.delta_benchmark).is_none() {
        let space = input_space(&loaded, &metric)?;
        benchmark_profile.if_slack_hat = estimate_if_slack(&records_f, &space, &metric)?.slack;
    }
    if wants(Check::Cor2) && screening.delta_benchmark_sp.or(screening.delta_benchmark).is_none() {
        benchmark_profile.sp_gap = statistical_parity_gap(&records_f, loaded.event)?.gap;
    }
    let mut candidate_profile = FairnessProfile {
        epsilon_hat: eps.value,
        if_slack_hat: IfSlack::Vacuous,
        kappa: screening.kappa,
        sp_gap: 0.0,
        m_hat: LipschitzEstimate::UNDEFINED,
        witness_ids: BTreeMap::from([("epsilon".to_owned(), vec![eps.witness.clone()])]),
    };
    if wants(Check::Cor2) && screening.m_mode == MMode::Estimated {
        candidate_profile.m_hat =
            estimate_lipschitz(pairs, eps.value, loaded.event, screening.tolerance)?.estimate;
    }

    let mut verdicts = Vec::new();
    let mut thresholds = BTreeMap::new();
    for check in [Check::Cor1, Check::Cor2] {
        if !wants(check) {
            continue;
        }
        let verdict = if check == Check::Cor1 {
            screen_individual(&candidate_profile, &benchmark_profile, &screening)?
        } else {
            screen_parity(&candidate_profile, &benchmark_profile, &screening)?
        };
        thresholds.insert(format!("{check:?}").to_uppercase(), verdict.bound_value);
        verdicts.push(verdict);
    }

    let passed = verdicts.iter().all(|v| v.passed);
    let report = ScreenReport {
        epsilon_hat: eps.value,
        thresholds,
        n_pairs: pairs.len(),
        dropped_ids: loaded.alignment.dropped(),
        passed,
        verdicts,
        witnesses: BTreeMap::from([("epsilon".to_owned(), vec![eps.witness])]),
    };
    emit(&report, out)?;
    let text = screen_summary(&report, summary);
    if out.is_some() {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
    Ok(passed)
}
