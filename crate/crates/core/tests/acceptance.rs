//! Acceptance suite. Runs every criterion at its stated tolerance and
//! prints one PASS/FAIL line each; exits non-zero if any criterion fails.
//!
//! Reference values (front sizes, bound formulas, hypervolumes) are
//! recomputed here without going through the library.

use std::collections::HashSet;
use std::f64::consts::E;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use moea_lab::benchmarks::milestone_sets;
use moea_lab::harness::{run_experiment_with_threads, trial_seed, write_results};
use moea_lab::{
    brute_force_front, contributions, hypervolume, pareto_front, run_trial_observed, Algorithm,
    AlgorithmKind, BenchmarkKind, BenchmarkSpec, BitString, Budget, ExperimentConfig, Instance,
    ObjectiveVector, RunState,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Criterion = (u32, &'static str, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

// ---- independent reference formulas ----

fn closed_form_front_size(kind: BenchmarkKind, n: usize, mp: usize, k: usize) -> u128 {
    let per_block = match kind {
        BenchmarkKind::Omm | BenchmarkKind::Lotz => n / mp + 1,
        BenchmarkKind::Cocz => n / (2 * mp) + 1,
        BenchmarkKind::Ojzj => n / mp + 3 - 2 * k,
    };
    (per_block as u128).pow(mp as u32)
}

/// (whp, expectation) for GSEMO on OMM.
fn omm_bounds(n: usize, mp: usize) -> (f64, f64) {
    let (n, mp) = (n as f64, mp as f64);
    let s = (n / mp + 1.0).powf(mp);
    let t = ((2f64.ln() * mp + 2.0) / n.ln() + 16.0 * (mp * mp + 2.0 * mp) / n + 2.0)
        * E
        * s
        * n
        * n.ln()
        + 1.0;
    (t, t / (1.0 - 1.0 / n).powi(2))
}

/// Expectation bound for GSEMO on OJZJ with m' >= 2.
fn ojzj_expectation(n: usize, mp: usize, k: usize) -> f64 {
    let (nf, mpf) = (n as f64, mp as f64);
    let s = (nf / mpf - 2.0 * k as f64 + 3.0).powf(mpf);
    let lm = mpf.ln();
    (4f64.ln() * mpf / lm + 2.0) * 3.0 * E * lm * s * nf.powi(k as i32) / (1.0 - 1.0 / mpf)
}

/// Hypervolume by inclusion-exclusion over all subsets.
fn hv_inclusion_exclusion(points: &[Vec<i64>], r: i64) -> i128 {
    let m = points[0].len();
    let mut total = 0i128;
    for mask in 1u32..(1 << points.len()) {
        let mut corner = vec![i64::MAX; m];
        for (i, p) in points.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for d in 0..m {
                    corner[d] = corner[d].min(p[d]);
                }
            }
        }
        let vol: i128 = corner.iter().map(|&c| (c - r) as i128).product();
        total += if mask.count_ones() % 2 == 1 {
            vol
        } else {
            -vol
        };
    }
    total
}

fn mean(xs: &[u64]) -> f64 {
    xs.iter().map(|&x| x as f64).sum::<f64>() / xs.len() as f64
}

fn median(mut xs: Vec<u64>) -> f64 {
    xs.sort_unstable();
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2] as f64
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) as f64 / 2.0
    }
}

fn gsemo_config(
    spec: BenchmarkSpec,
    algorithm: AlgorithmKind,
    trials: usize,
    seed: u64,
) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(spec, algorithm);
    cfg.trials = trials;
    cfg.base_seed = seed;
    cfg
}

/// Evaluations-to-cover of every trial, or `None` if some trial ran out of
/// budget.
fn coverage_times(cfg: &ExperimentConfig) -> (Vec<u64>, usize) {
    let out = run_experiment_with_threads(cfg, None).expect("experiment runs");
    let times: Vec<u64> = out.trials.iter().filter_map(|t| t.evaluations).collect();
    (times, out.trials.len())
}

// ---- criteria ----

fn front_oracle() -> Verdict {
    let mut checked = 0;
    let mut failures = Vec::new();
    for kind in BenchmarkKind::ALL {
        for n in 1..=12usize {
            for mp in 1..=n {
                let ks: Vec<Option<usize>> = if kind == BenchmarkKind::Ojzj {
                    (2..=n / (2 * mp)).map(Some).collect()
                } else {
                    vec![None]
                };
                for k in ks {
                    let Ok(spec) = BenchmarkSpec::new(kind, n, mp, k) else {
                        continue;
                    };
                    checked += 1;
                    let fast = pareto_front(&spec).unwrap();
                    let slow = brute_force_front(&spec).unwrap();
                    let expected = closed_form_front_size(kind, n, mp, k.unwrap_or(0));
                    if fast.value_set() != slow.value_set()
                        || fast.size() as u128 != expected
                        || slow.size() as u128 != expected
                    {
                        failures.push(format!("{spec}"));
                    }
                }
            }
        }
    }
    Verdict::new(
        failures.is_empty() && checked > 0,
        format!("{checked} instances, mismatches: {failures:?}"),
    )
}

fn gsemo_omm_bound() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [8usize, 12, 16] {
        for m in [2usize, 4] {
            let mp = m / 2;
            let spec = BenchmarkSpec::omm(n, mp).unwrap();
            let (t, expectation) = omm_bounds(n, mp);
            let (times, trials) = coverage_times(&gsemo_config(
                spec,
                AlgorithmKind::Gsemo,
                200,
                2_000 + n as u64 * 10 + m as u64,
            ));
            let within_t = times.iter().filter(|&&x| x as f64 <= t).count();
            let avg = mean(&times);
            let pass = times.len() == trials
                && avg <= expectation
                && within_t as f64 >= 0.95 * trials as f64;
            ok &= pass;
            parts.push(format!(
                "n={n} m={m}: mean {avg:.0} <= {expectation:.0}, {within_t}/{trials} <= t={t:.0}"
            ));
        }
    }
    Verdict::new(ok, parts.join("; "))
}

fn scaling_shape() -> Verdict {
    let mut ratios = Vec::new();
    for n in [8usize, 12, 16, 20] {
        let spec = BenchmarkSpec::omm(n, 2).unwrap();
        let (times, trials) = coverage_times(&gsemo_config(
            spec,
            AlgorithmKind::Gsemo,
            100,
            3_000 + n as u64,
        ));
        if times.len() != trials {
            return Verdict::new(
                false,
                format!("n={n}: only {}/{trials} covered", times.len()),
            );
        }
        let s = ((n / 2 + 1) as f64).powi(2);
        let nf = n as f64;
        ratios.push((n, mean(&times) / (s * nf * nf.ln())));
    }
    let hi = ratios.iter().map(|r| r.1).fold(f64::MIN, f64::max);
    let lo = ratios.iter().map(|r| r.1).fold(f64::MAX, f64::min);
    let text: Vec<String> = ratios
        .iter()
        .map(|(n, r)| format!("n={n}: {r:.3}"))
        .collect();
    Verdict::new(
        hi / lo <= 3.0,
        format!("mean/(S n ln n) {}; spread {:.2}", text.join(", "), hi / lo),
    )
}

fn gsemo_ojzj() -> Verdict {
    let spec = BenchmarkSpec::ojzj(8, 2, 2).unwrap();
    let cfg = gsemo_config(spec, AlgorithmKind::Gsemo, 100, 4_000);
    let out = run_experiment_with_threads(&cfg, None).unwrap();
    let covered: Vec<_> = out.trials.iter().filter(|t| t.covered).collect();
    if covered.len() != out.trials.len() {
        return Verdict::new(false, format!("{}/100 covered", covered.len()));
    }
    let expectation = ojzj_expectation(8, 2, 2);
    let times: Vec<u64> = covered.iter().map(|t| t.evaluations.unwrap()).collect();
    let avg = mean(&times);
    let jump: Vec<u64> = covered
        .iter()
        .map(|t| t.corners_eval.unwrap() - t.cliffs_eval.unwrap())
        .collect();
    let others: Vec<u64> = covered
        .iter()
        .map(|t| t.cliffs_eval.unwrap() + (t.evaluations.unwrap() - t.corners_eval.unwrap()))
        .collect();
    let (mj, mo) = (median(jump), median(others));
    Verdict::new(
        avg <= expectation && mj > mo,
        format!(
            "mean {avg:.0} <= {expectation:.0}; median jump phase {mj:.0} vs other phases {mo:.0}"
        ),
    )
}

fn semo_ojzj_impossible() -> Verdict {
    let spec = BenchmarkSpec::ojzj(8, 2, 2).unwrap();
    let instance = Arc::new(Instance::new(spec).unwrap());
    let sets = milestone_sets(&spec).unwrap();
    let cliffs: HashSet<ObjectiveVector> = sets.cliffs.clone().unwrap().into_iter().collect();
    let forbidden: HashSet<ObjectiveVector> = sets
        .corners
        .iter()
        .filter(|v| !cliffs.contains(v))
        .cloned()
        .collect();
    // one genome per K value: each block holds k ones or k zeros
    let b = spec.block_width();
    let mut genomes = Vec::new();
    let mut seen = HashSet::new();
    for code in 0..(1u32 << spec.m_prime()) {
        let mut bits = Vec::new();
        for i in 0..spec.m_prime() {
            let ones = if code >> i & 1 == 1 { b - 2 } else { 2 };
            bits.extend((0..b).map(|j| j < ones));
        }
        let g = BitString::from_bits(bits);
        if seen.insert(spec.eval(&g)) {
            genomes.push(g);
        }
    }
    let violations: usize = (0..20u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(5_000, seed));
            let mut state =
                RunState::from_genomes(Algorithm::Semo, Arc::clone(&instance), genomes.clone())
                    .unwrap();
            let mut bad = 0;
            for _ in 0..100_000 {
                state.step(&mut rng).unwrap();
                if state.values().any(|v| forbidden.contains(v)) {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    Verdict::new(
        violations == 0 && !forbidden.is_empty(),
        format!(
            "|K| = {}, |C \\ K| = {}, 20 seeds x 1e5 steps, {violations} violations",
            genomes.len(),
            forbidden.len()
        ),
    )
}

/// Runs `algorithm` to coverage on OMM n=8, m=4 and counts generations at
/// which some earlier non-dominated value is no longer weakly dominated by
/// any member.
fn preservation_run(
    algorithm: Algorithm,
    instance: &Arc<Instance>,
    budget: u64,
    seed: u64,
) -> (usize, bool) {
    let mut present: Vec<ObjectiveVector> = Vec::new();
    let mut violations = 0usize;
    let result = run_trial_observed(algorithm, instance, budget, seed, |state| {
        let members: Vec<&ObjectiveVector> = state.values().collect();
        let lost = present
            .iter()
            .any(|v| !members.iter().any(|m| m.weakly_dominates(v)));
        if lost {
            violations += 1;
        }
        for m in members {
            let dominated = state.values().any(|o| o.strictly_dominates(m));
            if !dominated && !present.contains(m) {
                present.push(m.clone());
            }
        }
    })
    .unwrap();
    (violations, result.covered)
}

fn smsemoa_preservation() -> Verdict {
    let spec = BenchmarkSpec::omm(8, 2).unwrap();
    let instance = Arc::new(Instance::new(spec).unwrap());
    let mu = instance.front().max_incomparable() as usize;
    let budget = (50.0 * omm_bounds(8, 2).1) as u64;
    let runs: Vec<(usize, bool)> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            preservation_run(
                Algorithm::SmsEmoa { mu },
                &instance,
                budget,
                trial_seed(6_000, i),
            )
        })
        .collect();
    let violations: usize = runs.iter().map(|r| r.0).sum();
    let covered = runs.iter().filter(|r| r.1).count();
    Verdict::new(
        violations == 0 && mu == 25,
        format!("mu = {mu}, 50 runs, {violations} violations, {covered}/50 covered"),
    )
}

fn nsga3_preservation() -> Verdict {
    let spec = BenchmarkSpec::omm(8, 2).unwrap();
    let mu = 25;
    // f_max = 4, m = 4: 2 * 4^{3/2} * 4 = 64
    let p = 64;
    let instance = Arc::new(
        Instance::new(spec)
            .unwrap()
            .with_reference_points(p)
            .unwrap(),
    );
    // mu / S = 1, so the transferred bound equals the GSEMO bound
    let budget = (50.0 * omm_bounds(8, 2).1) as u64;
    let runs: Vec<(usize, bool)> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            preservation_run(
                Algorithm::Nsga3 { mu, p },
                &instance,
                budget,
                trial_seed(7_000, i),
            )
        })
        .collect();
    let violations: usize = runs.iter().map(|r| r.0).sum();
    let covered = runs.iter().filter(|r| r.1).count();
    Verdict::new(
        violations == 0 && covered as f64 >= 0.95 * 50.0,
        format!("mu = {mu}, p = {p}, {violations} losses, {covered}/50 covered within {budget}"),
    )
}

fn hypervolume_exact() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8_000);
    let mut mismatches = 0;
    let mut duplicate_members = 0;
    let mut nonzero_duplicates = 0;
    for _ in 0..1_000 {
        let m = rng.random_range(1..=4usize);
        let k = rng.random_range(1..=6usize);
        let mut pts: Vec<Vec<i64>> = (0..k)
            .map(|_| (0..m).map(|_| rng.random_range(0..=10)).collect())
            .collect();
        if k < 6 && rng.random_bool(0.3) {
            let d = pts[rng.random_range(0..k)].clone();
            pts.push(d);
        }
        let values: Vec<ObjectiveVector> = pts.iter().cloned().map(ObjectiveVector::new).collect();
        let r = ObjectiveVector::new(vec![-1; m]);
        let exact = hv_inclusion_exclusion(&pts, -1);
        if hypervolume(&values, &r).unwrap() as i128 != exact {
            mismatches += 1;
        }
        let contribs = contributions(&values, &r).unwrap();
        for i in 0..pts.len() {
            let mut rest = pts.clone();
            rest.remove(i);
            let without = if rest.is_empty() {
                0
            } else {
                hv_inclusion_exclusion(&rest, -1)
            };
            if contribs[i] as i128 != exact - without {
                mismatches += 1;
            }
            if pts.iter().enumerate().any(|(j, q)| j != i && q == &pts[i]) {
                duplicate_members += 1;
                if contribs[i] != 0 {
                    nonzero_duplicates += 1;
                }
            }
        }
    }
    Verdict::new(
        mismatches == 0 && nonzero_duplicates == 0 && duplicate_members > 0,
        format!(
            "1000 fronts, {mismatches} mismatches, {duplicate_members} duplicate members, \
             {nonzero_duplicates} with non-zero contribution"
        ),
    )
}

fn semo_speedup() -> Verdict {
    let spec = BenchmarkSpec::omm(12, 2).unwrap();
    let (t, _) = omm_bounds(12, 2);
    let (times, trials) = coverage_times(&gsemo_config(spec, AlgorithmKind::Semo, 200, 9_000));
    let avg = mean(&times);
    Verdict::new(
        times.len() == trials && avg < t / E,
        format!(
            "mean {avg:.0} < t/e = {:.0} ({}/{trials} covered)",
            t / E,
            times.len()
        ),
    )
}

fn determinism() -> Verdict {
    let configs = [
        gsemo_config(
            BenchmarkSpec::omm(8, 2).unwrap(),
            AlgorithmKind::Gsemo,
            16,
            10,
        ),
        gsemo_config(
            BenchmarkSpec::ojzj(8, 2, 2).unwrap(),
            AlgorithmKind::Smsemoa,
            8,
            11,
        ),
        gsemo_config(
            BenchmarkSpec::lotz(6, 1).unwrap(),
            AlgorithmKind::Semo,
            8,
            12,
        ),
        {
            let mut c = gsemo_config(
                BenchmarkSpec::cocz(16, 2).unwrap(),
                AlgorithmKind::Nsga3,
                4,
                13,
            );
            c.budget = Budget::Evaluations(20_000);
            c
        },
    ];
    let dir = tempfile::tempdir().unwrap();
    let mut identical = 0;
    for (i, cfg) in configs.iter().enumerate() {
        let mut files = Vec::new();
        for (j, threads) in [Some(1), None].into_iter().enumerate() {
            let out = run_experiment_with_threads(cfg, threads).unwrap();
            let path = dir.path().join(format!("{i}-{j}"));
            let (csv, _) = write_results(&out, &path).unwrap();
            files.push(std::fs::read(csv).unwrap());
        }
        if files[0] == files[1] {
            identical += 1;
        }
    }
    Verdict::new(
        identical == configs.len(),
        format!(
            "{identical}/{} configs byte-identical across reruns (1 thread vs pool)",
            configs.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "front oracle equivalence", front_oracle),
        (2, "GSEMO on OMM within bounds", gsemo_omm_bound),
        (3, "OMM scaling shape", scaling_shape),
        (4, "GSEMO on OJZJ, jump phase dominates", gsemo_ojzj),
        (
            5,
            "SEMO cannot leave the cliffs on OJZJ",
            semo_ojzj_impossible,
        ),
        (
            6,
            "SMS-EMOA preserves non-dominated values",
            smsemoa_preservation,
        ),
        (
            7,
            "NSGA-III preserves non-dominated values",
            nsga3_preservation,
        ),
        (8, "hypervolume exactness", hypervolume_exact),
        (9, "SEMO below GSEMO bound / e", semo_speedup),
        (10, "byte-identical trials.csv", determinism),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (id, name, check) in criteria {
        if !filter.is_empty()
            && !filter
                .iter()
                .any(|f| name.contains(f.as_str()) || f == &id.to_string())
        {
            continue;
        }
        let start = Instant::now();
        let v = check();
        let status = if v.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>2} {status}: {name} -- {} [{:.1}s]",
            v.detail,
            start.elapsed().as_secs_f64()
        );
        if !v.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
