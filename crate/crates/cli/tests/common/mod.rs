#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn ncfair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncfair"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Two-outcome evaluation file; each row is (id, group, p_grant, x_0).
pub fn evaluations(rows: &[(&str, &str, f64, f64)]) -> String {
    let mut out = String::from("id,group,p_deny,p_grant,x_0\n");
    for (id, group, grant, x) in rows {
        out += &format!("{id},{group},{:.9},{grant:.9},{x}\n", 1.0 - grant);
    }
    out
}

/// Runs `gen` for `spec` into `dir` and returns the generated paths.
pub fn generate(dir: &Path, spec: &str) -> (PathBuf, PathBuf) {
    let spec_path = write(dir, "spec.json", spec);
    let out = dir.join("scenario");
    let o = ncfair(&["gen", "--spec", s(&spec_path), "--out-dir", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    (out.join("benchmark.csv"), out.join("candidate.csv"))
}
