use std::path::Path;

use anyhow::{Context, Result};
use ncfair::synth::{generate_scenario, ScenarioSpec};
use ncfair::FairnessError;

pub fn run(spec: &Path, out_dir: &Path) -> Result<bool> {
    let text = std::fs::read_to_string(spec).with_context(|| format!("{}", spec.display()))?;
    let spec_value: ScenarioSpec = serde_json::from_str(&text)
        .map_err(|e| FairnessError::Config(format!("invalid scenario spec: {e}")))
        .with_context(|| format!("{}", spec.display()))?;
    let scenario = generate_scenario(&spec_value)?;
    std::fs::create_dir_all(out_dir).with_context(|| format!("{}", out_dir.display()))?;
    scenario.write_files(out_dir)?;
    println!("{}", scenario.ground_truth_json());
    Ok(true)
}
