//! JSON reports and human-readable summaries.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use ncfair::certification::CertificationVerdict;
use ncfair::types::IfSlack;
use serde::Serialize;

use crate::SummaryFormat;

#[derive(Debug, Serialize)]
pub struct AuditReport {
    pub epsilon_hat: f64,
    /// Slack of the system under test.
    pub if_slack_hat: IfSlack,
    pub if_slack_hat_benchmark: IfSlack,
    pub kappa: f64,
    pub sp_gap_f: f64,
    pub sp_gap_g: f64,
    pub m_hat: f64,
    pub m_hat_undefined: bool,
    pub n_pairs: usize,
    pub dropped_ids: usize,
    pub passed: bool,
    pub verdicts: Vec<CertificationVerdict>,
    pub witnesses: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct ScreenReport {
    pub epsilon_hat: f64,
    pub thresholds: BTreeMap<String, f64>,
    pub n_pairs: usize,
    pub dropped_ids: usize,
    pub passed: bool,
    pub verdicts: Vec<CertificationVerdict>,
    pub witnesses: BTreeMap<String, Vec<String>>,
}

/// Writes `report` to `out`, or to standard output when `out` is `None`.
pub fn emit<T: Serialize>(report: &T, out: Option<&Path>) -> Result<()> {
    let json = serde_json::to_string_pretty(report)? + "\n";
    match out {
        Some(path) => std::fs::write(path, json).with_context(|| format!("{}", path.display())),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn slack(s: IfSlack) -> String {
    match s {
        IfSlack::Value(v) => format!("{v:.6}"),
        IfSlack::Vacuous => "VACUOUS".to_owned(),
    }
}

fn verdict_line(v: &CertificationVerdict) -> (String, String, String, String) {
    (
        format!("{:?}", v.check).to_uppercase(),
        format!("{:.6}", v.observed_value),
        format!("{:.6}", v.bound_value),
        serde_json::to_value(v.status)
            .ok()
            .and_then(|s| s.as_str().map(str::to_owned))
            .unwrap_or_default(),
    )
}

pub fn audit_summary(r: &AuditReport, format: SummaryFormat) -> String {
    let mut s = String::new();
    let m = if r.m_hat_undefined {
        "UNDEFINED".to_owned()
    } else {
        format!("{:.6}", r.m_hat)
    };
    let rows = [
        ("epsilon_hat", format!("{:.6}", r.epsilon_hat)),
        ("if_slack_hat (system)", slack(r.if_slack_hat)),
        ("if_slack_hat (benchmark)", slack(r.if_slack_hat_benchmark)),
        ("kappa", format!("{:.6}", r.kappa)),
        ("sp_gap_f", format!("{:.6}", r.sp_gap_f)),
        ("sp_gap_g", format!("{:.6}", r.sp_gap_g)),
        ("m_hat", m),
    ];
    match format {
        SummaryFormat::Text => {
            let _ = writeln!(s, "audit over {} pairs", r.n_pairs);
            for (k, v) in rows {
                let _ = writeln!(s, "  {k:<26}{v}");
            }
            for v in &r.verdicts {
                let (check, obs, bound, status) = verdict_line(v);
                let _ = writeln!(s, "  {check:<6} observed {obs} bound {bound}  {status}");
            }
            let _ = writeln!(s, "{}", if r.passed { "PASS" } else { "FAIL" });
        }
        SummaryFormat::Md => {
            let _ = writeln!(s, "## Audit summary ({} pairs)\n", r.n_pairs);
            let _ = writeln!(s, "| quantity | value |\n|---|---|");
            for (k, v) in rows {
                let _ = writeln!(s, "| {k} | {v} |");
            }
            let _ = writeln!(s, "\n| check | observed | bound | status |\n|---|---|---|---|");
            for v in &r.verdicts {
                let (check, obs, bound, status) = verdict_line(v);
                let _ = writeln!(s, "| {check} | {obs} | {bound} | {status} |");
            }
            let _ = writeln!(s, "\n**{}**", if r.passed { "PASS" } else { "FAIL" });
        }
    }
    s
}

pub fn screen_summary(r: &ScreenReport, format: SummaryFormat) -> String {
    let mut s = String::new();
    match format {
        SummaryFormat::Text => {
            let _ = writeln!(s, "screening over {} pairs, epsilon_hat {:.6}", r.n_pairs, r.epsilon_hat);
            for v in &r.verdicts {
                let (check, obs, bound, status) = verdict_line(v);
                let _ = writeln!(s, "  {check:<5} epsilon_hat {obs} threshold {bound}  {status}");
            }
            let _ = writeln!(s, "{}", if r.passed { "PASS" } else { "FAIL" });
        }
        SummaryFormat::Md => {
            let _ = writeln!(s, "## Screening summary ({} pairs)\n", r.n_pairs);
            let _ = writeln!(s, "| check | epsilon_hat | threshold | status |\n|---|---|---|---|");
            for v in &r.verdicts {
                let (check, obs, bound, status) = verdict_line(v);
                let _ = writeln!(s, "| {check} | {obs} | {bound} | {status} |");
            }
            let _ = writeln!(s, "\n**{}**", if r.passed { "PASS" } else { "FAIL" });
        }
    }
    s
}
