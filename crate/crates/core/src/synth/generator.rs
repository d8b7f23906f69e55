//! Seeded scenario generator with analytically known ground truth.
//!
//! All probabilities, scores, features and supplied distances are built as
//! integers on a 1e-9 grid and only converted to `f64` at the end. Canonical
//! CSV output uses nine decimal places, so files carry the exact values the
//! ground truth was derived from.
//!
//! Distribution construction, per attempt:
//!
//! 1. Group means `mu_a = b + s_a (e_0 - e_1)` with `s_0 = 0`, `s_1 = T` and
//!    `s_a` in `[0, T]` otherwise, so the benchmark's parity gap is exactly `T`.
//! 2. Within a group, records come in antithetic pairs `mu_a +/- d`, so every
//!    group mean is exactly `mu_a`.
//! 3. The system moves `e_i` units of mass from the other outcomes onto one
//!    outcome (the mixture `(1 - lambda) f + lambda u` with `u` a point mass),
//!    which puts it at total variation exactly `e_i` from the benchmark. One
//!    record gets `e_i = E`; the rest draw `e_i` in `[0, E]`.
//! 4. With `saturate_prop1`, one antithetic pair of group 0 is stretched to
//!    `mu_0 +/- W (e_0 - e_1)` so it is the benchmark's widest pair, and the
//!    system pushes both ends further apart by `E - 5e-4` each. The pair's
//!    features sit outside every other record's range, making it the most
//!    distant input pair as well.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::rng::ScenarioRng;
use crate::error::{FairnessError, Result};
use crate::io::{write_evaluations, write_pair_distances, EvaluationSet};
use crate::metrics::PairDistances;
use crate::types::{
    EvaluationPair, EvaluationRecord, InputMetric, MetricConfig, OutcomeMetric, OutcomeValue,
};

/// Grid resolution: one unit is 1e-9.
pub const UNITS: i64 = 1_000_000_000;
const UNITS_F: f64 = UNITS as f64;
/// Distance kept between each saturated record's deviation and epsilon.
const SATURATION_MARGIN: i64 = 500_000;
const MAX_ATTEMPTS: usize = 100;

fn default_outcomes() -> usize {
    2
}

fn default_threshold() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ScenarioSpec {
    pub seed: u64,
    #[serde(alias = "n_records")]
    pub n_records: usize,
    #[serde(alias = "n_groups")]
    pub n_groups: usize,
    #[serde(default = "default_outcomes", alias = "n_outcomes")]
    pub n_outcomes: usize,
    /// Scalar scores instead of outcome distributions.
    #[serde(default, alias = "score_form")]
    pub score_form: bool,
    /// Parity event threshold for score-form scenarios.
    #[serde(default = "default_threshold", alias = "score_threshold")]
    pub score_threshold: f64,
    #[serde(alias = "target_epsilon")]
    pub target_epsilon: f64,
    #[serde(default, alias = "target_sp_gap_f")]
    pub target_sp_gap_f: f64,
    /// Feature columns per record; 0 emits a supplied distance matrix instead.
    #[serde(default, alias = "feature_dim")]
    pub feature_dim: usize,
    #[serde(default, alias = "saturate_prop1")]
    pub saturate_prop1: bool,
}

impl ScenarioSpec {
    pub fn new(seed: u64, n_records: usize, n_groups: usize, target_epsilon: f64) -> Self {
        ScenarioSpec {
            seed,
            n_records,
            n_groups,
            n_outcomes: 2,
            score_form: false,
            score_threshold: 0.5,
            target_epsilon,
            target_sp_gap_f: 0.0,
            feature_dim: 2,
            saturate_prop1: false,
        }
    }

    fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(FairnessError::Config(m));
        if self.n_groups < 2 {
            return cfg(format!("n-groups must be at least 2, got {}", self.n_groups));
        }
        let min_records = self.n_groups + usize::from(self.saturate_prop1);
        if self.n_records < min_records.max(2) {
            return cfg(format!(
                "n-records must be at least {}, got {}",
                min_records.max(2),
                self.n_records
            ));
        }
        if !self.score_form && self.n_outcomes < 2 {
            return cfg(format!("n-outcomes must be at least 2, got {}", self.n_outcomes));
        }
        if !(self.target_epsilon.is_finite() && self.target_epsilon >= 0.0) {
            return cfg(format!("target-epsilon must be finite and non-negative, got {}", self.target_epsilon));
        }
        if !(self.target_sp_gap_f.is_finite() && self.target_sp_gap_f >= 0.0) {
            return cfg(format!("target-sp-gap-f must be finite and non-negative, got {}", self.target_sp_gap_f));
        }
        if !self.score_threshold.is_finite() || self.score_threshold.abs() > 1e6 {
            return cfg(format!("score-threshold {} out of range", self.score_threshold));
        }
        if self.score_form && self.saturate_prop1 {
            return cfg("saturate-prop1 requires distribution outcomes".into());
        }
        if self.score_form && self.target_epsilon > 1e6 {
            return cfg(format!("target-epsilon {} out of range", self.target_epsilon));
        }
        if !self.score_form && self.target_epsilon > 1.0 {
            return Err(FairnessError::Generation(format!(
                "target-epsilon {} is unattainable: total variation never exceeds 1",
                self.target_epsilon
            )));
        }
        if self.saturate_prop1
            && 2 * (to_units(self.target_epsilon) - SATURATION_MARGIN) + 3 * to_units(self.target_sp_gap_f) >= UNITS
        {
            return Err(FairnessError::Generation(format!(
                "saturate-prop1 needs target-epsilon below (1 - 3 * target-sp-gap-f) / 2, got {} and {}",
                self.target_epsilon, self.target_sp_gap_f
            )));
        }
        if self.target_sp_gap_f > 1.0 {
            return Err(FairnessError::Generation(format!(
                "target-sp-gap-f {} is unattainable: probabilities differ by at most 1",
                self.target_sp_gap_f
            )));
        }
        Ok(())
    }
}

/// Ground truth written next to a generated scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub epsilon: f64,
    pub sp_gap_f: f64,
    pub seed: u64,
    pub epsilon_witness: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub saturated_pair: Option<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score_threshold: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub spec: ScenarioSpec,
    /// Outcome names for distribution scenarios.
    pub outcome_names: Option<Vec<String>>,
    /// Benchmark `f`, ascending by id.
    pub benchmark: Vec<EvaluationRecord>,
    /// System or candidate `g`, ascending by id.
    pub candidate: Vec<EvaluationRecord>,
    pub pair_distances: Option<PairDistances>,
    pub ground_truth: GroundTruth,
}

pub const BENCHMARK_FILE: &str = "benchmark.csv";
pub const CANDIDATE_FILE: &str = "candidate.csv";
pub const PAIR_DISTANCE_FILE: &str = "pair_distances.csv";
pub const GROUND_TRUTH_FILE: &str = "ground_truth.json";

impl Scenario {
    pub fn pairs(&self) -> Vec<EvaluationPair> {
        self.benchmark
            .iter()
            .zip(&self.candidate)
            .map(|(f, g)| EvaluationPair {
                id: f.id.clone(),
                group: f.group.clone(),
                features: f.features.clone(),
                out_f: f.outcome.clone(),
                out_g: g.outcome.clone(),
            })
            .collect()
    }

    /// Metric configuration matching the scenario's representation, at `kappa = 0`.
    pub fn default_metric(&self) -> MetricConfig {
        MetricConfig {
            outcome_metric: if self.spec.score_form {
                OutcomeMetric::AbsoluteScore
            } else {
                OutcomeMetric::TotalVariation
            },
            input_metric: if self.pair_distances.is_some() {
                InputMetric::SuppliedMatrix
            } else {
                InputMetric::StandardizedEuclidean
            },
            ..MetricConfig::default()
        }
    }

    pub fn benchmark_set(&self) -> EvaluationSet {
        EvaluationSet::new(self.benchmark.clone(), self.outcome_names.clone())
    }

    pub fn candidate_set(&self) -> EvaluationSet {
        EvaluationSet::new(self.candidate.clone(), self.outcome_names.clone())
    }

    pub fn ground_truth_json(&self) -> String {
        serde_json::to_string_pretty(&self.ground_truth).expect("ground truth serializes")
    }

    /// Writes the canonical files into `dir` and returns their paths.
    pub fn write_files(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let io_err = |path: &Path| {
            let path = path.to_path_buf();
            move |source| FairnessError::Io { path, source }
        };
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let mut written = Vec::new();
        let mut put = |name: &str, body: String| -> Result<()> {
            let path = dir.join(name);
            fs::write(&path, body).map_err(io_err(&path))?;
            written.push(path);
            Ok(())
        };
        put(BENCHMARK_FILE, write_evaluations(&self.benchmark_set()))?;
        put(CANDIDATE_FILE, write_evaluations(&self.candidate_set()))?;
        if let Some(m) = &self.pair_distances {
            put(PAIR_DISTANCE_FILE, write_pair_distances(m))?;
        }
        put(GROUND_TRUTH_FILE, self.ground_truth_json() + "\n")?;
        Ok(written)
    }
}

fn to_units(x: f64) -> i64 {
    (x * UNITS_F).round() as i64
}

fn from_units(u: i64) -> f64 {
    u as f64 / UNITS_F
}

fn digits(n: usize) -> usize {
    n.max(1).to_string().len()
}

/// Record layout shared by both outcome forms.
struct Layout {
    ids: Vec<String>,
    group_names: Vec<String>,
    group_of: Vec<usize>,
    members: Vec<Vec<usize>>,
}

fn layout(spec: &ScenarioSpec, rng: &mut ScenarioRng) -> Layout {
    let n = spec.n_records;
    let wid = digits(n - 1);
    let wgr = digits(spec.n_groups - 1);
    let ids = (0..n).map(|i| format!("r{i:0wid$}")).collect();
    let group_names = (0..spec.n_groups).map(|g| format!("g{g:0wgr$}")).collect();
    let mut group_of = Vec::with_capacity(n);
    for i in 0..n {
        let g = if i < spec.n_groups {
            i
        } else if spec.saturate_prop1 && i == spec.n_groups {
            0
        } else {
            rng.below(spec.n_groups as u64) as usize
        };
        group_of.push(g);
    }
    let mut members = vec![Vec::new(); spec.n_groups];
    for (i, &g) in group_of.iter().enumerate() {
        members[g].push(i);
    }
    for m in &mut members {
        rng.shuffle(m);
    }
    Layout {
        ids,
        group_names,
        group_of,
        members,
    }
}

/// Input geometry: features on the grid in [-1, 1] (the saturated pair at
/// -2 / +2), or 1-D positions in [0, 1] turned into a distance matrix.
fn inputs(
    spec: &ScenarioSpec,
    lay: &Layout,
    pair: Option<(usize, usize)>,
    rng: &mut ScenarioRng,
) -> (Vec<Option<Vec<f64>>>, Option<PairDistances>) {
    let n = spec.n_records;
    if spec.feature_dim > 0 {
        let feats = (0..n)
            .map(|i| {
                let x = match pair {
                    Some((lo, _)) if lo == i => vec![-2 * UNITS; spec.feature_dim],
                    Some((_, hi)) if hi == i => vec![2 * UNITS; spec.feature_dim],
                    _ => (0..spec.feature_dim)
                        .map(|_| rng.between(-UNITS, UNITS))
                        .collect(),
                };
                Some(x.into_iter().map(from_units).collect())
            })
            .collect();
        (feats, None)
    } else {
        let pos: Vec<i64> = (0..n)
            .map(|i| match pair {
                Some((lo, _)) if lo == i => 0,
                Some((_, hi)) if hi == i => UNITS,
                _ => rng.between(1, UNITS - 1),
            })
            .collect();
        let mut m = PairDistances::new();
        for i in 0..n {
            for j in i + 1..n {
                m.insert(&lay.ids[i], &lay.ids[j], from_units((pos[i] - pos[j]).abs()))
                    .expect("grid distances are valid");
            }
        }
        (vec![None; n], Some(m))
    }
}

/// Generates a scenario. Deterministic in `spec`.
pub fn generate_scenario(spec: &ScenarioSpec) -> Result<Scenario> {
    spec.validate()?;
    let mut rng = ScenarioRng::new(spec.seed);
    for _ in 0..MAX_ATTEMPTS {
        let attempt = if spec.score_form {
            try_scores(spec, &mut rng)
        } else {
            try_distributions(spec, &mut rng)
        };
        if let Some(s) = attempt {
            return Ok(s);
        }
    }
    Err(FairnessError::Generation(format!(
        "no admissible scenario for target-epsilon {} after {MAX_ATTEMPTS} attempts",
        spec.target_epsilon
    )))
}

fn l1(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Moves `e` units onto outcome `target`, taken from the other outcomes in
/// proportion to their mass. Requires `e <= UNITS - f[target]`.
fn shift_mass(f: &[i64], target: usize, e: i64) -> Vec<i64> {
    let mut g = f.to_vec();
    if e == 0 {
        return g;
    }
    let avail = UNITS - f[target];
    debug_assert!(e <= avail);
    let mut taken = 0;
    for (y, v) in g.iter_mut().enumerate() {
        if y != target {
            let take = (e as i128 * f[y] as i128 / avail as i128) as i64;
            *v -= take;
            taken += take;
        }
    }
    let mut rem = e - taken;
    while rem > 0 {
        for (y, v) in g.iter_mut().enumerate() {
            if rem > 0 && y != target && *v > 0 {
                *v -= 1;
                rem -= 1;
            }
        }
    }
    g[target] += e;
    g
}

fn random_distribution(k: usize, rng: &mut ScenarioRng) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| -(1.0 - rng.uniform()).ln()).collect();
    let total: f64 = w.iter().sum();
    if total > 0.0 {
        w.into_iter().map(|x| x / total).collect()
    } else {
        vec![1.0 / k as f64; k]
    }
}

/// Zero-sum deviation `d` with `mu +/- d` both non-negative.
fn antithetic_deviation(mu: &[i64], eta_cap: f64, rng: &mut ScenarioRng) -> Vec<i64> {
    let k = mu.len();
    let v = random_distribution(k, rng);
    let mut eta = eta_cap * rng.uniform();
    for y in 0..k {
        let m = mu[y] as f64 / UNITS_F;
        if v[y] > m {
            eta = eta.min(m / (v[y] - m));
        }
    }
    let mut d = vec![0i64; k];
    for y in 1..k {
        let raw = (eta * (v[y] * UNITS_F - mu[y] as f64)).trunc() as i64;
        d[y] = raw.clamp(-mu[y], mu[y]);
    }
    d[0] = -d[1..].iter().sum::<i64>();
    if d[0].abs() > mu[0] {
        return vec![0; k];
    }
    d
}

fn try_distributions(spec: &ScenarioSpec, rng: &mut ScenarioRng) -> Option<Scenario> {
    let k = spec.n_outcomes;
    let n = spec.n_records;
    let e_units = to_units(spec.target_epsilon);
    let t_units = to_units(spec.target_sp_gap_f);
    let lay = layout(spec, rng);

    // base distribution: b0 = alpha, b1 = alpha + T, remainder spread over the rest
    let free = UNITS - t_units;
    // saturation stretches along outcomes 0 and 1, so it wants their mass large
    let spread = if spec.saturate_prop1 { 0.9 + 0.09 * rng.uniform() } else { 0.5 + 0.4 * rng.uniform() };
    let alpha = if k == 2 {
        free / 2
    } else {
        ((free as f64 / 2.0) * spread).floor() as i64
    };
    let mut base = vec![0i64; k];
    base[0] = alpha;
    base[1] = alpha + t_units;
    let rest = UNITS - base[0] - base[1];
    if k == 2 {
        base[1] += rest;
    } else {
        let w: Vec<i64> = (2..k).map(|_| 1 + rng.below(1000) as i64).collect();
        let wsum: i64 = w.iter().sum();
        let mut placed = 0;
        for (y, wy) in (2..k).zip(&w) {
            base[y] = (rest as i128 * *wy as i128 / wsum as i128) as i64;
            placed += base[y];
        }
        base[2] += rest - placed;
    }

    let shifts: Vec<i64> = (0..spec.n_groups)
        .map(|g| match g {
            0 => 0,
            1 => t_units,
            _ => rng.between(0, t_units),
        })
        .collect();
    let means: Vec<Vec<i64>> = shifts
        .iter()
        .map(|&s| {
            let mut mu = base.clone();
            mu[0] += s;
            mu[1] -= s;
            mu
        })
        .collect();

    let near = if e_units >= SATURATION_MARGIN {
        e_units - SATURATION_MARGIN
    } else {
        0
    };
    // the stretched pair must out-span every other pair, including its far
    // end against group 1, which sits T further along the same axis
    let eta_cap = if spec.saturate_prop1 {
        let w = (alpha - near) as f64 / UNITS_F;
        let t = t_units as f64 / UNITS_F;
        if w <= t {
            return None;
        }
        (0.9 * (w - t)).min(0.2)
    } else {
        0.9
    };
    let mut f: Vec<Vec<i64>> = vec![Vec::new(); n];
    for (g, members) in lay.members.iter().enumerate() {
        let mu = &means[g];
        for chunk in members.chunks(2) {
            match *chunk {
                [p, q] => {
                    let d = antithetic_deviation(mu, eta_cap, rng);
                    f[p] = mu.iter().zip(&d).map(|(m, x)| m + x).collect();
                    f[q] = mu.iter().zip(&d).map(|(m, x)| m - x).collect();
                }
                [p] => f[p] = mu.clone(),
                _ => unreachable!(),
            }
        }
    }

    // saturated pair: first antithetic pair of group 0, ordered by index
    let pair = if spec.saturate_prop1 {
        let (a, b) = (lay.members[0][0], lay.members[0][1]);
        let (lo, hi) = (a.min(b), a.max(b));
        let mu = &means[0];
        let w = mu[0].min(mu[1]) - near;
        if w <= 0 {
            return None;
        }
        f[lo] = mu.clone();
        f[lo][0] += w;
        f[lo][1] -= w;
        f[hi] = mu.clone();
        f[hi][0] -= w;
        f[hi][1] += w;
        let widest = l1(&f[lo], &f[hi]);
        for i in 0..n {
            for j in i + 1..n {
                if (i, j) != (lo, hi) && l1(&f[i], &f[j]) > widest {
                    return None;
                }
            }
        }
        Some((lo, hi))
    } else {
        None
    };
    let in_pair = |i: usize| pair.is_some_and(|(lo, hi)| i == lo || i == hi);

    // the record that attains epsilon exactly
    let headroom = |fi: &[i64]| UNITS - fi.iter().min().copied().unwrap_or(0);
    let eligible: Vec<usize> = (0..n)
        .filter(|&i| !in_pair(i) && headroom(&f[i]) >= e_units)
        .collect();
    if eligible.is_empty() {
        return None;
    }
    let designated = eligible[rng.below(eligible.len() as u64) as usize];

    let mut g: Vec<Vec<i64>> = Vec::with_capacity(n);
    let mut deviation = vec![0i64; n];
    for i in 0..n {
        let fi = &f[i];
        let gi = match pair {
            Some((lo, _)) if i == lo => {
                let mut v = fi.clone();
                v[0] += near;
                v[1] -= near;
                deviation[i] = near;
                v
            }
            Some((_, hi)) if i == hi => {
                let mut v = fi.clone();
                v[0] -= near;
                v[1] += near;
                deviation[i] = near;
                v
            }
            _ if i == designated => {
                let target = (0..k).min_by_key(|&y| (fi[y], y)).expect("k >= 2");
                deviation[i] = e_units;
                shift_mass(fi, target, e_units)
            }
            _ => {
                let target = rng.below(k as u64) as usize;
                let e = rng.between(0, e_units.min(UNITS - fi[target]));
                deviation[i] = e;
                shift_mass(fi, target, e)
            }
        };
        g.push(gi);
    }

    let (features, pair_distances) = inputs(spec, &lay, pair, rng);
    let to_dist = |u: &[i64]| OutcomeValue::Distribution(u.iter().map(|&x| from_units(x)).collect());
    let build = |vals: &[Vec<i64>]| -> Vec<EvaluationRecord> {
        (0..n)
            .map(|i| EvaluationRecord {
                id: lay.ids[i].clone(),
                group: lay.group_names[lay.group_of[i]].clone(),
                outcome: to_dist(&vals[i]),
                features: features[i].clone(),
            })
            .collect()
    };
    let witness = (0..n).find(|&i| deviation[i] == e_units).expect("designated attains epsilon");
    Some(Scenario {
        spec: spec.clone(),
        outcome_names: Some((0..k).map(|y| format!("y{y}")).collect()),
        benchmark: build(&f),
        candidate: build(&g),
        pair_distances,
        ground_truth: GroundTruth {
            epsilon: from_units(e_units),
            sp_gap_f: from_units(t_units),
            seed: spec.seed,
            epsilon_witness: lay.ids[witness].clone(),
            saturated_pair: pair.map(|(lo, hi)| (lay.ids[lo].clone(), lay.ids[hi].clone())),
            score_threshold: None,
        },
    })
}

fn try_scores(spec: &ScenarioSpec, rng: &mut ScenarioRng) -> Option<Scenario> {
    let n = spec.n_records;
    let e_units = to_units(spec.target_epsilon);
    let t = spec.target_sp_gap_f;
    let theta = to_units(spec.score_threshold);
    let lay = layout(spec, rng);

    let q0 = rng.uniform() * (1.0 - t);
    let rates: Vec<f64> = (0..spec.n_groups)
        .map(|g| match g {
            0 => q0,
            1 => q0 + t,
            _ => q0 + rng.uniform() * t,
        })
        .collect();
    let mut f = vec![0i64; n];
    let mut realized = Vec::with_capacity(spec.n_groups);
    for (g, members) in lay.members.iter().enumerate() {
        let positives = (rates[g] * members.len() as f64).round() as usize;
        for (rank, &i) in members.iter().enumerate() {
            f[i] = if rank < positives {
                rng.between(theta, theta + UNITS / 2)
            } else {
                rng.between(theta - UNITS / 2, theta - 1)
            };
        }
        realized.push(positives as f64 / members.len() as f64);
    }
    let hi = realized.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = realized.iter().copied().fold(f64::INFINITY, f64::min);

    let designated = rng.below(n as u64) as usize;
    let mut g = vec![0i64; n];
    let mut deviation = vec![0i64; n];
    for i in 0..n {
        let e = if i == designated {
            e_units
        } else {
            rng.between(0, e_units)
        };
        let sign = if rng.below(2) == 0 { 1 } else { -1 };
        g[i] = f[i] + sign * e;
        deviation[i] = e;
    }

    let (features, pair_distances) = inputs(spec, &lay, None, rng);
    let build = |vals: &[i64]| -> Vec<EvaluationRecord> {
        (0..n)
            .map(|i| EvaluationRecord {
                id: lay.ids[i].clone(),
                group: lay.group_names[lay.group_of[i]].clone(),
                outcome: OutcomeValue::Score(from_units(vals[i])),
                features: features[i].clone(),
            })
            .collect()
    };
    let witness = (0..n).find(|&i| deviation[i] == e_units).expect("designated attains epsilon");
    Some(Scenario {
        spec: spec.clone(),
        outcome_names: None,
        benchmark: build(&f),
        candidate: build(&g),
        pair_distances,
        ground_truth: GroundTruth {
            epsilon: from_units(e_units),
            sp_gap_f: hi - lo,
            seed: spec.seed,
            epsilon_witness: lay.ids[witness].clone(),
            saturated_pair: None,
            score_threshold: Some(from_units(theta)),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(p: &OutcomeValue, q: &OutcomeValue) -> f64 {
        match (p, q) {
            (OutcomeValue::Distribution(a), OutcomeValue::Distribution(b)) => {
                0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
            }
            _ => panic!(),
        }
    }

    #[test]
    fn zero_epsilon_copies_benchmark() {
        let s = generate_scenario(&ScenarioSpec::new(3, 40, 3, 0.0)).unwrap();
        assert_eq!(s.benchmark.len(), 40);
        for (f, g) in s.benchmark.iter().zip(&s.candidate) {
            assert_eq!(f.outcome, g.outcome);
        }
    }

    #[test]
    fn epsilon_is_attained_exactly() {
        let s = generate_scenario(&ScenarioSpec::new(1, 60, 2, 0.15)).unwrap();
        let max = s
            .benchmark
            .iter()
            .zip(&s.candidate)
            .map(|(f, g)| tv(&f.outcome, &g.outcome))
            .fold(0.0, f64::max);
        assert!((max - 0.15).abs() < 1e-12, "{max}");
        assert_eq!(s.ground_truth.epsilon, 0.15);
    }

    #[test]
    fn shift_mass_moves_exact_amount() {
        let f = vec![300_000_000, 200_000_001, 499_999_999];
        let g = shift_mass(&f, 1, 123_456_789);
        assert_eq!(g.iter().sum::<i64>(), UNITS);
        assert_eq!(l1(&f, &g), 2 * 123_456_789);
        assert!(g.iter().all(|&v| v >= 0));
        let g = shift_mass(&f, 1, UNITS - f[1]);
        assert_eq!(g, vec![0, UNITS, 0]);
    }

    #[test]
    fn same_seed_same_scenario() {
        let spec = ScenarioSpec {
            n_outcomes: 4,
            target_sp_gap_f: 0.2,
            feature_dim: 0,
            ..ScenarioSpec::new(9, 30, 3, 0.3)
        };
        let a = generate_scenario(&spec).unwrap();
        let b = generate_scenario(&spec).unwrap();
        assert_eq!(a.benchmark, b.benchmark);
        assert_eq!(a.candidate, b.candidate);
        assert_eq!(a.pair_distances, b.pair_distances);
        assert_eq!(a.ground_truth, b.ground_truth);
    }

    #[test]
    fn invalid_specs() {
        let err = generate_scenario(&ScenarioSpec::new(0, 10, 2, 1.5)).unwrap_err();
        assert_eq!(err.code(), "GENERATION_ERROR");
        let err = generate_scenario(&ScenarioSpec::new(0, 10, 1, 0.1)).unwrap_err();
        assert_eq!(err.code(), "CONFIG_ERROR");
        let err = generate_scenario(&ScenarioSpec::new(0, 1, 2, 0.1)).unwrap_err();
        assert_eq!(err.code(), "CONFIG_ERROR");
    }

    #[test]
    fn full_epsilon_is_exact_or_a_generation_error() {
        let spec = ScenarioSpec {
            target_sp_gap_f: 0.1,
            ..ScenarioSpec::new(5, 6, 2, 1.0)
        };
        match generate_scenario(&spec) {
            Ok(s) => {
                let max = s
                    .benchmark
                    .iter()
                    .zip(&s.candidate)
                    .map(|(f, g)| tv(&f.outcome, &g.outcome))
                    .fold(0.0, f64::max);
                assert!((max - 1.0).abs() < 1e-12);
            }
            Err(e) => assert_eq!(e.code(), "GENERATION_ERROR"),
        }
    }

    #[test]
    fn spec_parses_kebab_and_snake_case() {
        let a: ScenarioSpec = serde_json::from_str(
            r#"{"seed": 1, "n-records": 20, "n-groups": 2, "target-epsilon": 0.15}"#,
        )
        .unwrap();
        let b: ScenarioSpec = serde_json::from_str(
            r#"{"seed": 1, "n_records": 20, "n_groups": 2, "target_epsilon": 0.15}"#,
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n_outcomes, 2);
    }
}
