use anyhow::{Context, Result};
use ncfair::synth::run_trial;

/// Largest scenario the self-test draws.
const MAX_RECORDS: usize = 120;

pub fn run(trials: u64, seed: u64, inject_fault: bool) -> Result<bool> {
    let mut held = 0u64;
    for i in 0..trials {
        let trial_seed = seed.wrapping_add(i);
        let outcome = run_trial(trial_seed, MAX_RECORDS, inject_fault)
            .with_context(|| format!("trial seed {trial_seed}"))?;
        if !outcome.passed() {
            for f in &outcome.failures {
                println!("violation at seed {trial_seed}: {}: {}", f.check, f.detail);
            }
            println!("{held}/{trials} bounds held before seed {trial_seed}");
            return Ok(false);
        }
        held += 1;
    }
    println!("{held}/{trials} bounds held");
    Ok(true)
}
