//! Runtime experiments for simple multi-objective evolutionary algorithms on
//! many-objective pseudo-Boolean benchmarks.
//!
//! The crate provides the benchmarks (`mOMM`, `mCOCZ`, `mLOTZ`, `mOJZJ_k`)
//! with their exact Pareto fronts, the SEMO, GSEMO, SMS-EMOA and NSGA-III
//! as step functions, evaluators for the known runtime guarantees, and a
//! harness that runs seeded trials in parallel and writes `trials.csv` and
//! `summary.json`.
//!
//! ```
//! use std::sync::Arc;
//! use moea_lab::{run_trial, Algorithm, BenchmarkSpec, Instance};
//!
//! let spec = BenchmarkSpec::omm(8, 2).unwrap();
//! let instance = Arc::new(Instance::new(spec).unwrap());
//! let result = run_trial(Algorithm::Gsemo, &instance, 1_000_000, 7).unwrap();
//! assert!(result.covered);
//! ```

pub mod algorithms;
pub mod benchmarks;
pub mod bitstring;
pub mod bounds;
pub mod error;
pub mod harness;
pub mod objective;
pub mod oracle;
pub mod population;
pub mod ranking;
pub mod verify;

pub use algorithms::{
    mutate, run_trial, run_trial_observed, Algorithm, AlgorithmKind, Coverage, Instance, Mutation,
    RunState, TrialResult,
};
pub use benchmarks::{
    brute_force_front, milestone_sets, pareto_front, BenchmarkKind, BenchmarkSpec, FrontDescriptor,
    MilestoneSets,
};
pub use bitstring::BitString;
pub use bounds::{bound, transfer, BoundReport, Provenance};
pub use error::{Error, Result};
pub use harness::{
    run_experiment, run_experiment_with_threads, trial_seed, write_results, Budget,
    ExperimentConfig, ExperimentOutcome, Summary, SummaryStats, TrialRecord,
};
pub use objective::{dominates, strictly_dominates, ObjectiveVector};
pub use population::{FixedPopulation, Individual, ParetoArchive};
pub use ranking::{
    contributions, fast_non_dominated_sort, hv_contribution, hypervolume, min_contributors,
    niche_select, reference_points, FrontPartition, ReferencePointSet,
};
