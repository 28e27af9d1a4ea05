//! Experiment orchestration: seeded parallel trials, summary statistics and
//! the `trials.csv` / `summary.json` outputs.

mod config;
mod stats;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{run_trial, GENERATOR};
use crate::error::{Error, Result};

pub use config::{Budget, Experiment, ExperimentConfig, AUTO_BUDGET_FACTOR};
pub use stats::{quantile, SummaryStats};

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "MOEA_LAB_THREADS";

pub const TRIALS_FILE: &str = "trials.csv";
pub const SUMMARY_FILE: &str = "summary.json";

/// Columns of `trials.csv`, in order.
pub const TRIALS_HEADER: [&str; 8] = [
    "trial",
    "seed",
    "covered",
    "evaluations",
    "corners_eval",
    "cliffs_eval",
    "coverage_fraction",
    "wall_ms",
];

const SEED_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed of trial `trial`: the SplitMix64 output for state
/// `base + (trial + 1) * 0x9E3779B97F4A7C15`, i.e.
///
/// ```text
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB
/// z ^ (z >> 31)
/// ```
///
/// with wrapping 64-bit arithmetic. Trial 0 of base seed 0 is the first
/// SplitMix64 output from state 0.
pub fn trial_seed(base_seed: u64, trial: u64) -> u64 {
    let mut z = base_seed.wrapping_add(trial.wrapping_add(1).wrapping_mul(SEED_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One row of `trials.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub covered: bool,
    /// Evaluations until the front was covered; empty when uncovered.
    pub evaluations: Option<u64>,
    pub corners_eval: Option<u64>,
    pub cliffs_eval: Option<u64>,
    pub coverage_fraction: f64,
    pub wall_ms: Option<f64>,
}

/// The bound figures written to `summary.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundSummary {
    pub whp: f64,
    pub expectation: f64,
    pub phases: BTreeMap<String, f64>,
    pub front_size: u128,
    pub provenance: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorInfo {
    pub name: String,
    pub seed_derivation: String,
    pub crate_version: String,
}

impl GeneratorInfo {
    fn current() -> Self {
        Self {
            name: GENERATOR.to_string(),
            seed_derivation: "splitmix64(base_seed + (trial + 1) * 0x9E3779B97F4A7C15)".into(),
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Contents of `summary.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub config: ExperimentConfig,
    pub stats: SummaryStats,
    pub bounds: BoundSummary,
    pub ratio_mean_over_expectation_bound: Option<f64>,
    pub ratio_q95_over_whp_bound: Option<f64>,
    pub generator: GeneratorInfo,
}

/// Everything an experiment produced.
#[derive(Clone, Debug)]
pub struct ExperimentOutcome {
    pub trials: Vec<TrialRecord>,
    pub summary: Summary,
}

/// Worker count from `MOEA_LAB_THREADS`, if set and valid.
pub fn threads_from_env() -> Option<usize> {
    let raw = std::env::var(THREADS_ENV).ok()?;
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => Some(n),
        _ => {
            log::warn!("ignoring {THREADS_ENV}={raw:?}");
            None
        }
    }
}

/// Runs every trial of `cfg`, with the worker count taken from the
/// environment.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    run_experiment_with_threads(cfg, threads_from_env())
}

/// Runs every trial of `cfg` on `threads` workers (default: available
/// parallelism). Results are ordered by trial index and do not depend on
/// the worker count.
pub fn run_experiment_with_threads(
    cfg: &ExperimentConfig,
    threads: Option<usize>,
) -> Result<ExperimentOutcome> {
    let exp = cfg.resolve()?;
    log::info!(
        "{} on {:?}: {} trials, budget {}",
        exp.algorithm,
        exp.instance.spec(),
        cfg.trials,
        exp.budget
    );
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?;
    let record_time = cfg.record_wall_time;
    let trials: Vec<TrialRecord> = pool.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|i| {
                let seed = trial_seed(cfg.base_seed, i as u64);
                let start = Instant::now();
                let r = run_trial(exp.algorithm, &exp.instance, exp.budget, seed)?;
                let wall_ms = record_time.then(|| start.elapsed().as_secs_f64() * 1e3);
                Ok(TrialRecord {
                    trial: i,
                    seed,
                    covered: r.covered,
                    evaluations: r.evaluations_to_cover,
                    corners_eval: r.corners_eval,
                    cliffs_eval: r.cliffs_eval,
                    coverage_fraction: r.coverage_fraction,
                    wall_ms,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let summary = summarize(&exp, &trials);
    Ok(ExperimentOutcome { trials, summary })
}

fn summarize(exp: &Experiment, trials: &[TrialRecord]) -> Summary {
    let samples: Vec<u64> = trials.iter().filter_map(|t| t.evaluations).collect();
    let stats = SummaryStats::from_samples(&samples, trials.len());
    let b = &exp.bounds;
    Summary {
        config: exp.config.clone(),
        ratio_mean_over_expectation_bound: stats.mean.map(|m| m / b.expectation_bound),
        ratio_q95_over_whp_bound: stats.q95.map(|q| q / b.whp_bound),
        stats,
        bounds: BoundSummary {
            whp: b.whp_bound,
            expectation: b.expectation_bound,
            phases: b.phase_bounds.clone(),
            front_size: b.front_size,
            provenance: b.provenance.tag().to_string(),
            notes: b.notes.clone(),
        },
        generator: GeneratorInfo::current(),
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `trials.csv` and `summary.json` into `dir`, creating it if needed.
pub fn write_results(outcome: &ExperimentOutcome, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let csv_path = dir.join(TRIALS_FILE);
    let csv_err = |source| Error::Csv {
        path: csv_path.clone(),
        source,
    };
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(&csv_path)
        .map_err(csv_err)?;
    w.write_record(TRIALS_HEADER).map_err(csv_err)?;
    for t in &outcome.trials {
        w.serialize(t).map_err(csv_err)?;
    }
    w.flush().map_err(io_err(&csv_path))?;

    let json_path = dir.join(SUMMARY_FILE);
    let mut text =
        serde_json::to_string_pretty(&outcome.summary).map_err(|source| Error::Json {
            path: json_path.clone(),
            source,
        })?;
    text.push('\n');
    fs::write(&json_path, text).map_err(io_err(&json_path))?;
    Ok((csv_path, json_path))
}

/// Reads a `trials.csv` written by [`write_results`].
pub fn read_trials(path: &Path) -> Result<Vec<TrialRecord>> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(csv_err)
}

/// Reads a `summary.json` written by [`write_results`].
pub fn read_summary(path: &Path) -> Result<Summary> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}
