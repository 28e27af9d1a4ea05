//! SEMO, GSEMO, SMS-EMOA and NSGA-III as step-wise state machines, plus a
//! run loop that counts fitness evaluations until the front is covered.

mod coverage;
mod mutation;
mod state;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use coverage::{Coverage, Instance};
pub use mutation::{mutate, Mutation};
pub use state::{gsemo_step, nsga3_generation, semo_step, smsemoa_step, Population, RunState};

/// Name of the pseudo-random generator every trial uses.
pub const GENERATOR: &str = "ChaCha8Rng (rand_chacha 0.9), seeded with seed_from_u64";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmKind {
    Semo,
    Gsemo,
    Smsemoa,
    Nsga3,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 4] = [Self::Semo, Self::Gsemo, Self::Smsemoa, Self::Nsga3];

    pub fn name(self) -> &'static str {
        match self {
            Self::Semo => "semo",
            Self::Gsemo => "gsemo",
            Self::Smsemoa => "smsemoa",
            Self::Nsga3 => "nsga3",
        }
    }

    pub fn uses_population_size(self) -> bool {
        matches!(self, Self::Smsemoa | Self::Nsga3)
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "semo" => Ok(Self::Semo),
            "gsemo" => Ok(Self::Gsemo),
            "smsemoa" => Ok(Self::Smsemoa),
            "nsga3" | "nsgaiii" => Ok(Self::Nsga3),
            _ => Err(Error::usage(format!(
                "unknown algorithm {s:?} (expected semo, gsemo, smsemoa or nsga3)"
            ))),
        }
    }
}

/// A fully parameterized optimizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Semo,
    Gsemo,
    SmsEmoa {
        mu: usize,
    },
    /// `p` is the granularity of the simplex-lattice reference set.
    Nsga3 {
        mu: usize,
        p: usize,
    },
}

impl Algorithm {
    pub fn kind(&self) -> AlgorithmKind {
        match self {
            Algorithm::Semo => AlgorithmKind::Semo,
            Algorithm::Gsemo => AlgorithmKind::Gsemo,
            Algorithm::SmsEmoa { .. } => AlgorithmKind::Smsemoa,
            Algorithm::Nsga3 { .. } => AlgorithmKind::Nsga3,
        }
    }

    pub fn mu(&self) -> Option<usize> {
        match *self {
            Algorithm::SmsEmoa { mu } | Algorithm::Nsga3 { mu, .. } => Some(mu),
            _ => None,
        }
    }

    /// Evaluations spent on the initial population.
    pub fn init_cost(&self) -> u64 {
        self.mu().unwrap_or(1) as u64
    }

    /// Evaluations spent per step (per generation for NSGA-III).
    pub fn step_cost(&self) -> u64 {
        match *self {
            Algorithm::Nsga3 { mu, .. } => mu as u64,
            _ => 1,
        }
    }

    /// The mutation operator the algorithm uses on length-`n` strings.
    pub fn mutation(&self, n: usize) -> Mutation {
        match self {
            Algorithm::Semo => Mutation::OneBit,
            _ => Mutation::standard_bitwise(n),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Algorithm::SmsEmoa { mu: 0 } | Algorithm::Nsga3 { mu: 0, .. } => {
                Err(Error::usage("population size mu must be positive"))
            }
            Algorithm::Nsga3 { p: 0, .. } => Err(Error::usage("granularity p must be positive")),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Semo | Algorithm::Gsemo => write!(f, "{}", self.kind()),
            Algorithm::SmsEmoa { mu } => write!(f, "smsemoa(mu={mu})"),
            Algorithm::Nsga3 { mu, p } => write!(f, "nsga3(mu={mu}, p={p})"),
        }
    }
}

/// Smallest granularity meeting `p >= 2 m^{3/2} f_max`.
pub fn nsga3_granularity_threshold(objectives: usize, f_max: i64) -> usize {
    (2.0 * (objectives as f64).powf(1.5) * f_max as f64).ceil() as usize
}

/// Outcome of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub seed: u64,
    pub covered: bool,
    /// Evaluations at the first moment the population covered the front.
    pub evaluations_to_cover: Option<u64>,
    /// Evaluations spent in total (equals `evaluations_to_cover` when
    /// covered).
    pub evaluations: u64,
    pub coverage_fraction: f64,
    pub corners_eval: Option<u64>,
    pub cliffs_eval: Option<u64>,
}

/// Runs `algorithm` from a fresh random start until the front is covered or
/// another step would exceed `budget` evaluations.
pub fn run_trial(
    algorithm: Algorithm,
    instance: &Arc<Instance>,
    budget: u64,
    seed: u64,
) -> Result<TrialResult> {
    run_trial_observed(algorithm, instance, budget, seed, |_| {})
}

/// As [`run_trial`], calling `observe` after initialization and after every
/// step.
pub fn run_trial_observed<F>(
    algorithm: Algorithm,
    instance: &Arc<Instance>,
    budget: u64,
    seed: u64,
    mut observe: F,
) -> Result<TrialResult>
where
    F: FnMut(&RunState),
{
    if budget < algorithm.init_cost() {
        return Err(Error::usage(format!(
            "budget {budget} is below the initialization cost {} of {algorithm}",
            algorithm.init_cost()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = RunState::initialize(algorithm, Arc::clone(instance), &mut rng)?;
    observe(&state);
    let step_cost = algorithm.step_cost();
    while !state.coverage().is_covered() && state.evaluations() + step_cost <= budget {
        state.step(&mut rng)?;
        observe(&state);
    }
    let coverage = state.coverage();
    Ok(TrialResult {
        seed,
        covered: coverage.is_covered(),
        evaluations_to_cover: coverage.covered_at(),
        evaluations: state.evaluations(),
        coverage_fraction: coverage.fraction(),
        corners_eval: coverage.corners_reached_at(),
        cliffs_eval: coverage.cliffs_reached_at(),
    })
}
