use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algorithms::{nsga3_granularity_threshold, Algorithm, AlgorithmKind, Instance};
use crate::benchmarks::{BenchmarkKind, BenchmarkSpec};
use crate::bounds::{self, BoundReport};
use crate::error::{Error, Result};

/// Multiple of the expectation bound used by [`Budget::Auto`].
pub const AUTO_BUDGET_FACTOR: f64 = 50.0;

/// Evaluation budget per trial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Budget {
    /// 50 times the expectation bound of the configured algorithm.
    #[default]
    Auto,
    Evaluations(u64),
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Auto => f.write_str("auto"),
            Budget::Evaluations(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Budget::Auto);
        }
        s.parse()
            .map(Budget::Evaluations)
            .map_err(|_| Error::usage(format!("budget must be \"auto\" or a count, got {s:?}")))
    }
}

impl Serialize for Budget {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Budget::Auto => serializer.serialize_str("auto"),
            Budget::Evaluations(n) => serializer.serialize_u64(*n),
        }
    }
}

impl<'de> Deserialize<'de> for Budget {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(u64),
            Word(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Count(n) => Ok(Budget::Evaluations(n)),
            Raw::Word(w) => w.parse().map_err(serde::de::Error::custom),
        }
    }
}

fn default_trials() -> usize {
    1
}

/// One experiment, as read from a JSON document.
///
/// ```json
/// {"benchmark": "omm", "n": 8, "m": 4, "algorithm": "gsemo",
///  "trials": 100, "base_seed": 1, "budget": "auto", "output": "out/omm"}
/// ```
///
/// `m` is the number of objectives. `mu` defaults to the largest set of
/// incomparable values and `p` to the smallest granularity with
/// `p >= 2 m^{3/2} f_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub benchmark: BenchmarkKind,
    pub n: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub algorithm: AlgorithmKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub budget: Budget,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Wall-clock times make `trials.csv` differ between runs, so they are
    /// off by default.
    #[serde(default)]
    pub record_wall_time: bool,
}

impl ExperimentConfig {
    pub fn new(spec: BenchmarkSpec, algorithm: AlgorithmKind) -> Self {
        Self {
            benchmark: spec.kind(),
            n: spec.n(),
            m: spec.objectives(),
            k: spec.k(),
            algorithm,
            mu: None,
            p: None,
            trials: 1,
            base_seed: 0,
            budget: Budget::Auto,
            output: None,
            record_wall_time: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(e.to_string()))
    }

    pub fn load(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let text = std::fs::read_to_string(&path).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| Error::Json { path, source })
    }

    pub fn spec(&self) -> Result<BenchmarkSpec> {
        BenchmarkSpec::with_objectives(self.benchmark, self.n, self.m, self.k)
            .map_err(|e| Error::config(e.to_string()))
    }

    /// Validates the configuration and fills in every default.
    pub fn resolve(&self) -> Result<Experiment> {
        if self.trials == 0 {
            return Err(Error::usage("trials must be at least 1"));
        }
        let spec = self.spec()?;
        if self.algorithm == AlgorithmKind::Semo && spec.kind() == BenchmarkKind::Ojzj {
            return Err(Error::Unsupported(
                "semo on ojzj: one-bit mutation cannot jump the fitness valleys, so the front \
                 is never covered"
                    .into(),
            ));
        }
        if !self.algorithm.uses_population_size() && self.mu.is_some() {
            return Err(Error::config(format!(
                "mu does not apply to {}",
                self.algorithm
            )));
        }
        if self.algorithm != AlgorithmKind::Nsga3 && self.p.is_some() {
            return Err(Error::config(format!(
                "p does not apply to {}",
                self.algorithm
            )));
        }
        let mut instance = Instance::new(spec)?;
        let s = instance.front().max_incomparable();
        let mu = self.algorithm.uses_population_size().then(|| {
            self.mu
                .unwrap_or_else(|| usize::try_from(s).unwrap_or(usize::MAX))
        });
        let algorithm = match self.algorithm {
            AlgorithmKind::Semo => Algorithm::Semo,
            AlgorithmKind::Gsemo => Algorithm::Gsemo,
            AlgorithmKind::Smsemoa => Algorithm::SmsEmoa {
                mu: mu.expect("set above"),
            },
            AlgorithmKind::Nsga3 => {
                let p = self.p.unwrap_or_else(|| {
                    nsga3_granularity_threshold(spec.objectives(), spec.f_max())
                });
                instance = instance.with_reference_points(p)?;
                Algorithm::Nsga3 {
                    mu: mu.expect("set above"),
                    p,
                }
            }
        };
        algorithm
            .validate()
            .map_err(|e| Error::config(e.to_string()))?;

        let base = bounds::bound(&spec)?;
        let report = match bounds::transfer(&base, self.algorithm, mu) {
            Ok(r) => r,
            Err(Error::Precondition(msg)) => {
                log::warn!("{msg}; falling back to the GSEMO bound");
                let mut r = base;
                r.notes.push(format!(
                    "{msg}: no transferred bound, GSEMO bound shown instead"
                ));
                r
            }
            Err(e) => return Err(e),
        };
        let budget = match self.budget {
            Budget::Evaluations(b) => b,
            Budget::Auto => {
                let b = (AUTO_BUDGET_FACTOR * report.expectation_bound).ceil();
                if b >= u64::MAX as f64 {
                    u64::MAX
                } else {
                    b as u64
                }
            }
        };
        if budget < algorithm.init_cost() {
            return Err(Error::usage(format!(
                "budget {budget} is below the initialization cost {}",
                algorithm.init_cost()
            )));
        }
        let mut resolved = self.clone();
        resolved.mu = mu;
        resolved.p = match algorithm {
            Algorithm::Nsga3 { p, .. } => Some(p),
            _ => None,
        };
        resolved.budget = Budget::Evaluations(budget);
        Ok(Experiment {
            config: resolved,
            algorithm,
            instance: Arc::new(instance),
            budget,
            bounds: report,
        })
    }
}

/// A validated experiment with all defaults filled in.
#[derive(Clone, Debug)]
pub struct Experiment {
    /// The configuration with `mu`, `p` and `budget` made explicit.
    pub config: ExperimentConfig,
    pub algorithm: Algorithm,
    pub instance: Arc<Instance>,
    pub budget: u64,
    pub bounds: BoundReport,
}
