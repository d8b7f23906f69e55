use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Result;
use ncfair::certification::{check_prop1_bound, check_prop4_bound, MMode};
use ncfair::metrics::audit_profiles;
use ncfair::types::split_pairs;

use crate::load::{input_space, load};
use crate::report::{audit_summary, emit, AuditReport};
use crate::SummaryFormat;

/// Returns whether every verdict passed.
pub fn run(
    system: &Path,
    benchmark: &Path,
    config: &Path,
    out: Option<&Path>,
    summary: SummaryFormat,
) -> Result<bool> {
    let loaded = load(system, benchmark, config)?;
    let metric = &loaded.config.metric;
    let space = input_space(&loaded, metric)?;
    let pairs = &loaded.alignment.pairs;
    let profiles = audit_profiles(pairs, &space, metric, loaded.event)?;
    let (f, g) = (&profiles.benchmark, &profiles.system);
    let eps = g.epsilon_hat;

    let (_, records_g) = split_pairs(pairs);
    let mut verdicts = vec![check_prop1_bound(f, eps, &records_g, &space, metric)?];
    // an undefined estimate only happens when the outputs coincide, and then any m works
    let m_hat = if g.m_hat.undefined { 0.0 } else { g.m_hat.value };
    verdicts.push(check_prop4_bound(
        f.sp_gap,
        g.sp_gap,
        eps,
        m_hat,
        MMode::Estimated,
        metric.tolerance,
    )?);
    if let Some(screening) = &loaded.config.screening {
        if let (MMode::Supplied, Some(m)) = (screening.m_mode, screening.m_supplied) {
            verdicts.push(check_prop4_bound(
                f.sp_gap,
                g.sp_gap,
                eps,
                m,
                MMode::Supplied,
                metric.tolerance,
            )?);
        }
    }

    let mut witnesses = BTreeMap::new();
    for (key, ids) in &g.witness_ids {
        let key = if key == "sp_gap" { "sp_gap_g" } else { key };
        witnesses.insert(key.to_owned(), ids.clone());
    }
    for (key, ids) in &f.witness_ids {
        let key = match key.as_str() {
            "sp_gap" => "sp_gap_f".to_owned(),
            other => format!("{other}_benchmark"),
        };
        witnesses.insert(key, ids.clone());
    }

    let passed = verdicts.iter().all(|v| v.passed);
    let report = AuditReport {
        epsilon_hat: eps,
        if_slack_hat: g.if_slack_hat,
        if_slack_hat_benchmark: f.if_slack_hat,
        kappa: metric.kappa,
        sp_gap_f: f.sp_gap,
        sp_gap_g: g.sp_gap,
        m_hat,
        m_hat_undefined: g.m_hat.undefined,
        n_pairs: pairs.len(),
        dropped_ids: loaded.alignment.dropped(),
        passed,
        verdicts,
        witnesses,
    };
    emit(&report, out)?;
    let text = audit_summary(&report, summary);
    if out.is_some() {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
    Ok(passed)
}
