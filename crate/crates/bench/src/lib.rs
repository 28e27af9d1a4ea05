//! Input fixtures shared by the criterion benchmarks.

use moea_lab::{BenchmarkSpec, BitString, ObjectiveVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Objective values of `count` uniformly random bitstrings on `spec`, as
/// seen by a selection step in the middle of a run.
pub fn random_values(spec: &BenchmarkSpec, count: usize, seed: u64) -> Vec<ObjectiveVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| spec.eval(&BitString::random(spec.n(), &mut rng)))
        .collect()
}

/// `count` values taken round-robin from the Pareto front of `spec`, so the
/// set is mutually non-dominated and contains duplicates once `count`
/// exceeds the front size.
pub fn front_sample(spec: &BenchmarkSpec, count: usize) -> Vec<ObjectiveVector> {
    let front = moea_lab::pareto_front(spec).expect("benchmark front fits in memory");
    front.values().iter().cycle().take(count).cloned().collect()
}
