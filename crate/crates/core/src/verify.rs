//! Self-checks against the slow oracles in [`crate::oracle`], runnable from
//! the command line.

use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algorithms::{run_trial, Algorithm, Instance, RunState};
use crate::benchmarks::{brute_force_front, pareto_front, BenchmarkKind, BenchmarkSpec};
use crate::bounds;
use crate::error::Result;
use crate::harness::trial_seed;
use crate::objective::ObjectiveVector;
use crate::oracle::{inclusion_exclusion_hv, peel_fronts};
use crate::ranking::{contributions, fast_non_dominated_sort, hypervolume};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

impl std::str::FromStr for Level {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            _ => Err(crate::error::Error::usage(format!(
                "unknown verify level {s:?} (expected fast or full)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

/// All instances with `n <= max_n` and a valid block split.
pub fn small_instances(max_n: usize) -> Vec<BenchmarkSpec> {
    let mut out = Vec::new();
    for kind in BenchmarkKind::ALL {
        for n in 1..=max_n {
            for m_prime in 1..=n {
                if kind == BenchmarkKind::Ojzj {
                    for k in 2..=n / (2 * m_prime) {
                        if let Ok(s) = BenchmarkSpec::new(kind, n, m_prime, Some(k)) {
                            out.push(s);
                        }
                    }
                } else if let Ok(s) = BenchmarkSpec::new(kind, n, m_prime, None) {
                    out.push(s);
                }
            }
        }
    }
    out
}

fn closed_form_size(spec: &BenchmarkSpec) -> u128 {
    let (n, m) = (spec.n() as u128, spec.m_prime() as u32);
    let mp = m as u128;
    match spec.kind() {
        BenchmarkKind::Omm | BenchmarkKind::Lotz => (n / mp + 1).pow(m),
        BenchmarkKind::Cocz => (n / (2 * mp) + 1).pow(m),
        BenchmarkKind::Ojzj => {
            let k = spec.k().expect("ojzj has k") as u128;
            (n / mp + 3 - 2 * k).pow(m)
        }
    }
}

/// Closed-form fronts against exhaustive enumeration.
pub fn check_fronts(max_n: usize) -> Result<Check> {
    let mut failures = Vec::new();
    let instances = small_instances(max_n);
    for spec in &instances {
        let fast = pareto_front(spec)?;
        let slow = brute_force_front(spec)?;
        if fast.value_set() != slow.value_set() || fast.size() as u128 != closed_form_size(spec) {
            failures.push(format!("{spec:?}"));
        }
    }
    Ok(Check::new(
        "front-oracle",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} instances with n <= {max_n}", instances.len())
        } else {
            format!("mismatch on {}", failures.join(", "))
        },
    ))
}

/// A random point set with `m` coordinates in `0..=10`.
pub fn random_front<R: Rng + ?Sized>(
    rng: &mut R,
    max_m: usize,
    max_points: usize,
) -> Vec<ObjectiveVector> {
    let m = rng.random_range(1..=max_m);
    let k = rng.random_range(1..=max_points);
    (0..k)
        .map(|_| ObjectiveVector::new((0..m).map(|_| rng.random_range(0..=10)).collect()))
        .collect()
}

/// Hypervolume and contributions against inclusion-exclusion; duplicates
/// must contribute exactly zero.
pub fn check_hypervolume(fronts: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0usize;
    let mut duplicates = 0usize;
    for _ in 0..fronts {
        let mut pts = random_front(&mut rng, 4, 6);
        if rng.random_bool(0.3) {
            let dup = pts[rng.random_range(0..pts.len())].clone();
            pts.push(dup);
        }
        let r = ObjectiveVector::new(vec![-1; pts[0].len()]);
        let ok_total = hypervolume(&pts, &r)? == inclusion_exclusion_hv(&pts, &r);
        let contribs = contributions(&pts, &r)?;
        let mut ok_each = true;
        for (i, c) in contribs.iter().enumerate() {
            let others: Vec<ObjectiveVector> = pts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v.clone())
                .collect();
            let expected = inclusion_exclusion_hv(&pts, &r) - inclusion_exclusion_hv(&others, &r);
            if *c != expected {
                ok_each = false;
            }
            if pts.iter().enumerate().any(|(j, v)| j != i && v == &pts[i]) {
                duplicates += 1;
                if *c != 0 {
                    ok_each = false;
                }
            }
        }
        if !(ok_total && ok_each) {
            bad += 1;
        }
    }
    Ok(Check::new(
        "hypervolume-oracle",
        bad == 0,
        format!("{fronts} fronts, {duplicates} duplicate members, {bad} mismatches"),
    ))
}

/// Fast non-dominated sorting against repeated peeling.
pub fn check_sorting(cases: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..cases {
        let pts = random_front(&mut rng, 4, 40);
        if fast_non_dominated_sort(&pts)?.fronts != peel_fronts(&pts) {
            bad += 1;
        }
    }
    Ok(Check::new(
        "sorting-oracle",
        bad == 0,
        format!("{cases} point sets, {bad} mismatches"),
    ))
}

/// GSEMO archives stay mutually incomparable and never lose a front value.
pub fn check_archive(steps: usize, seed: u64) -> Result<Check> {
    let mut problems = Vec::new();
    for spec in [
        BenchmarkSpec::omm(8, 2)?,
        BenchmarkSpec::cocz(16, 2)?,
        BenchmarkSpec::lotz(6, 2)?,
        BenchmarkSpec::ojzj(8, 2, 2)?,
    ] {
        let inst = Arc::new(Instance::new(spec)?);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = RunState::initialize(Algorithm::Gsemo, Arc::clone(&inst), &mut rng)?;
        let mut seen: HashSet<ObjectiveVector> = HashSet::new();
        for _ in 0..steps {
            state.step(&mut rng)?;
            let now: HashSet<ObjectiveVector> = state.values().cloned().collect();
            if now.len() != state.members().len() || !seen.iter().all(|v| now.contains(v)) {
                problems.push(spec.kind().name());
                break;
            }
            seen.extend(now.into_iter().filter(|v| inst.front().contains(v)));
        }
    }
    Ok(Check::new(
        "archive-invariants",
        problems.is_empty(),
        if problems.is_empty() {
            format!("{steps} steps on each benchmark")
        } else {
            format!("violations on {}", problems.join(", "))
        },
    ))
}

/// GSEMO on OMM n=8, m=4: mean evaluations stay below the expectation bound.
pub fn check_gsemo_bound(trials: usize, seed: u64) -> Result<Check> {
    let spec = BenchmarkSpec::omm(8, 2)?;
    let report = bounds::bound(&spec)?;
    let inst = Arc::new(Instance::new(spec)?);
    let budget = (50.0 * report.expectation_bound) as u64;
    let mut total = 0u64;
    let mut covered = 0usize;
    for i in 0..trials {
        let r = run_trial(Algorithm::Gsemo, &inst, budget, trial_seed(seed, i as u64))?;
        if let Some(t) = r.evaluations_to_cover {
            total += t;
            covered += 1;
        }
    }
    let mean = total as f64 / covered.max(1) as f64;
    Ok(Check::new(
        "gsemo-omm-bound",
        covered == trials && mean <= report.expectation_bound,
        format!(
            "mean {mean:.0} vs expectation bound {:.0} ({covered}/{trials} covered)",
            report.expectation_bound
        ),
    ))
}

/// Runs the checks of `level`.
pub fn run(level: Level) -> Result<Vec<Check>> {
    match level {
        Level::Fast => Ok(vec![
            check_fronts(8)?,
            check_hypervolume(200, 1)?,
            check_sorting(200, 2)?,
            check_archive(2_000, 3)?,
            check_gsemo_bound(20, 4)?,
        ]),
        Level::Full => Ok(vec![
            check_fronts(12)?,
            check_hypervolume(1_000, 1)?,
            check_sorting(1_000, 2)?,
            check_archive(20_000, 3)?,
            check_gsemo_bound(200, 4)?,
        ]),
    }
}
