mod common;

use common::*;
use serde_json::Value;

const SCREEN_CONFIG: &str = r#"{
  "metric": {"kappa": 0.1},
  "screening": {"delta-benchmark": 0.05, "delta-prime": DP, "kappa": 0.1, "corollaries": ["COR1"]}
}"#;

fn report(path: &std::path::Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(report: &Value) {
    let schema: Value = serde_json::from_str(include_str!("../../../docs/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(report).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

#[test]
fn audit_of_generated_scenario_reports_its_epsilon() {
    let dir = tempfile::tempdir().unwrap();
    let (bench, cand) = generate(
        dir.path(),
        r#"{"seed": 5, "n-records": 60, "n-groups": 3, "target-epsilon": 0.15, "target-sp-gap-f": 0.1, "feature-dim": 2}"#,
    );
    let config = write(dir.path(), "config.json", r#"{"metric": {"kappa": 0.2}}"#);
    let out = dir.path().join("report.json");
    let o = ncfair(&["audit", "--system", s(&cand), "--benchmark", s(&bench), "--config", s(&config), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("PROP1"));
    let r = report(&out);
    assert_valid(&r);
    assert!((r["epsilon_hat"].as_f64().unwrap() - 0.15).abs() <= 1e-12);
    assert!((r["sp_gap_f"].as_f64().unwrap() - 0.1).abs() <= 1e-12);
    assert_eq!(r["kappa"].as_f64(), Some(0.2));
    assert_eq!(r["passed"], Value::Bool(true));
    assert_eq!(r["verdicts"][0]["check"], "PROP1");
    assert_eq!(r["verdicts"][1]["check"], "PROP4");
}

#[test]
fn audit_with_supplied_matrix_and_markdown_summary() {
    let dir = tempfile::tempdir().unwrap();
    let (bench, cand) = generate(
        dir.path(),
        r#"{"seed": 2, "n-records": 30, "n-groups": 2, "target-epsilon": 0.2, "feature-dim": 0}"#,
    );
    let config = write(
        dir.path(),
        "config.json",
        r#"{"metric": {"input-metric": "supplied-matrix", "kappa": 0.3},
            "paths": {"pair-distances": "scenario/pair_distances.csv"}}"#,
    );
    let o = ncfair(&["audit", "--system", s(&cand), "--benchmark", s(&bench), "--config", s(&config), "--summary", "md"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_valid(&r);
    assert!(stderr(&o).contains("| check | observed | bound | status |"));
}

#[test]
fn missing_file_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "config.json", "{}");
    let missing = dir.path().join("nope.csv");
    let o = ncfair(&["audit", "--system", s(&missing), "--benchmark", s(&missing), "--config", s(&config)]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("nope.csv") && err.contains("IO_ERROR"), "{err}");
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
}

#[test]
fn supplied_m_too_small_is_an_assumption_violation() {
    // benchmark gap 0.05, system gap 0.2, epsilon 0.1: m = 0.5 bounds the gap by 0.15
    let dir = tempfile::tempdir().unwrap();
    let bench = write(
        dir.path(),
        "f.csv",
        &evaluations(&[("a1", "A", 0.5, 0.0), ("a2", "A", 0.5, 1.0), ("b1", "B", 0.55, 2.0), ("b2", "B", 0.55, 3.0)]),
    );
    let sys = write(
        dir.path(),
        "g.csv",
        &evaluations(&[("a1", "A", 0.4, 0.0), ("a2", "A", 0.4, 1.0), ("b1", "B", 0.6, 2.0), ("b2", "B", 0.6, 3.0)]),
    );
    let config = write(
        dir.path(),
        "config.json",
        r#"{"screening": {"delta-benchmark": 0.05, "delta-prime": 0.4, "kappa": 0.0, "m-mode": "supplied", "m-supplied": 0.5}}"#,
    );
    let out = dir.path().join("report.json");
    let o = ncfair(&["audit", "--system", s(&sys), "--benchmark", s(&bench), "--config", s(&config), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let r = report(&out);
    assert_valid(&r);
    let verdicts = r["verdicts"].as_array().unwrap();
    let supplied = verdicts.last().unwrap();
    assert_eq!(supplied["status"], "ASSUMPTION_VIOLATED");
    assert!((supplied["bound_value"].as_f64().unwrap() - 0.15).abs() < 1e-12);
    assert!((supplied["observed_value"].as_f64().unwrap() - 0.2).abs() < 1e-12);
    // the estimated constant is 1 here and its bound holds
    assert_eq!(verdicts[1]["status"], "PASS");
    assert!((r["m_hat"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

fn screen(delta_prime: &str, candidate_eps: f64) -> (Option<i32>, Value) {
    let dir = tempfile::tempdir().unwrap();
    let rows = [("a1", "A", 0.5, 0.0), ("a2", "A", 0.5, 1.0), ("b1", "B", 0.5, 2.0), ("b2", "B", 0.5, 3.0)];
    let bench = write(dir.path(), "f.csv", &evaluations(&rows));
    let mut moved = rows;
    moved[2].2 += candidate_eps;
    let cand = write(dir.path(), "g.csv", &evaluations(&moved));
    let config = write(dir.path(), "config.json", &SCREEN_CONFIG.replace("DP", delta_prime));
    let out = dir.path().join("screen.json");
    let o = ncfair(&["screen", "--candidate", s(&cand), "--benchmark", s(&bench), "--config", s(&config), "--out", s(&out)]);
    let r = report(&out);
    assert_valid(&r);
    (o.status.code(), r)
}

#[test]
fn screening_examples() {
    let (code, r) = screen("0.4", 0.10);
    assert_eq!(code, Some(0));
    assert!((r["thresholds"]["COR1"].as_f64().unwrap() - 0.125).abs() < 1e-12);
    assert_eq!(r["verdicts"][0]["status"], "PASS");

    let (code, r) = screen("0.4", 0.13);
    assert_eq!(code, Some(2));
    assert_eq!(r["verdicts"][0]["status"], "THRESHOLD_EXCEEDED");

    let (code, r) = screen("0.1", 0.0);
    assert_eq!(code, Some(2));
    assert_eq!(r["verdicts"][0]["status"], "THRESHOLD_EMPTY");
}

#[test]
fn screen_requires_a_screening_section() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.csv", &evaluations(&[("a", "A", 0.5, 0.0), ("b", "B", 0.5, 1.0)]));
    let config = write(dir.path(), "config.json", "{}");
    let o = ncfair(&["screen", "--candidate", s(&f), "--benchmark", s(&f), "--config", s(&config)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("CONFIG_ERROR"));
}

#[test]
fn strict_alignment_rejects_unmatched_ids_and_drop_mode_warns() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.csv", &evaluations(&[("a", "A", 0.5, 0.0), ("b", "A", 0.5, 1.0), ("c", "B", 0.5, 2.0)]));
    let g = write(dir.path(), "g.csv", &evaluations(&[("b", "A", 0.5, 1.0), ("c", "B", 0.5, 2.0), ("d", "B", 0.5, 3.0)]));
    let strict = write(dir.path(), "strict.json", "{}");
    let o = ncfair(&["audit", "--system", s(&g), "--benchmark", s(&f), "--config", s(&strict)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("DATA_ERROR"), "{}", stderr(&o));

    let drop = write(dir.path(), "drop.json", r#"{"align": "drop"}"#);
    let o = ncfair(&["audit", "--system", s(&g), "--benchmark", s(&f), "--config", s(&drop)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("dropped 2"));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["n_pairs"], 2);
}

#[test]
fn gen_is_reproducible_and_prints_the_sidecar() {
    let spec = r#"{"seed": 0, "n-records": 20, "n-groups": 2, "target-epsilon": 0.1}"#;
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let run = |dir: &std::path::Path| {
        let spec_path = write(dir, "spec.json", spec);
        ncfair(&["gen", "--spec", s(&spec_path), "--out-dir", s(&dir.join("out"))])
    };
    let (oa, ob) = (run(a.path()), run(b.path()));
    assert_eq!(oa.status.code(), Some(0));
    assert_eq!(oa.stdout, ob.stdout);
    let sidecar: Value = serde_json::from_slice(&oa.stdout).unwrap();
    assert_eq!(sidecar["epsilon"].as_f64(), Some(0.1));
    assert_eq!(sidecar["seed"], 0);
    for name in ["benchmark.csv", "candidate.csv", "ground_truth.json"] {
        assert_eq!(
            std::fs::read(a.path().join("out").join(name)).unwrap(),
            std::fs::read(b.path().join("out").join(name)).unwrap()
        );
    }
}

#[test]
fn gen_with_zero_epsilon_copies_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let (bench, cand) = generate(dir.path(), r#"{"seed": 9, "n-records": 15, "n-groups": 3, "target-epsilon": 0}"#);
    assert_eq!(std::fs::read(bench).unwrap(), std::fs::read(cand).unwrap());
}

#[test]
fn gen_rejects_unattainable_total_variation() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", r#"{"seed": 0, "n-records": 10, "n-groups": 2, "target-epsilon": 1.5}"#);
    let o = ncfair(&["gen", "--spec", s(&spec), "--out-dir", s(&dir.path().join("out"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("GENERATION_ERROR"), "{}", stderr(&o));
}

#[test]
fn selftest_exit_codes() {
    let o = ncfair(&["selftest", "--trials", "40", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).trim(), "40/40 bounds held");

    let o = ncfair(&["selftest", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(1));

    let o = ncfair(&["selftest", "--trials", "40", "--seed", "7", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("violation at seed"), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(ncfair(&["audit"]).status.code(), Some(1));
    assert_eq!(ncfair(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(ncfair(&["--help"]).status.code(), Some(0));
}

#[test]
fn score_files_need_a_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.csv", "id,group,score,x_0\na,A,0.2,0\nb,B,0.7,1\n");
    let cfg = write(dir.path(), "config.json", r#"{"metric": {"outcome-metric": "absolute-score"}}"#);
    let o = ncfair(&["audit", "--system", s(&f), "--benchmark", s(&f), "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("CONFIG_ERROR"));

    let cfg = write(
        dir.path(),
        "config2.json",
        r#"{"metric": {"outcome-metric": "absolute-score"}, "score-threshold": 0.5}"#,
    );
    let o = ncfair(&["audit", "--system", s(&f), "--benchmark", s(&f), "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["sp_gap_f"].as_f64(), Some(1.0));
    assert_eq!(r["m_hat_undefined"], Value::Bool(true));
}
