//! Slow, independent reference computations used by the verification suites.
//!
//! Nothing here shares code with the production paths it checks.

use rand::Rng;

use crate::objective::ObjectiveVector;

/// Non-domination ranks by repeated peeling: each round takes every
/// remaining index that no remaining value strictly dominates.
pub fn peel_fronts(values: &[ObjectiveVector]) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..values.len()).collect();
    let mut fronts = Vec::new();
    while !remaining.is_empty() {
        let front: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| {
                !remaining
                    .iter()
                    .any(|&j| strictly_better(&values[j], &values[i]))
            })
            .collect();
        remaining.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

fn strictly_better(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    let a = a.values();
    let b = b.values();
    a.iter().zip(b).all(|(x, y)| x >= y) && a != b
}

/// Hypervolume by inclusion–exclusion over all non-empty subsets: the
/// intersection of boxes `[r, v]` is the box up to the componentwise minimum.
/// Exponential in the number of points; meant for at most ~16 points.
pub fn inclusion_exclusion_hv(values: &[ObjectiveVector], r: &ObjectiveVector) -> u128 {
    let n = values.len();
    assert!(
        n <= 20,
        "inclusion-exclusion is exponential in the point count"
    );
    let m = r.len();
    let mut total: i128 = 0;
    for mask in 1u32..(1u32 << n) {
        let mut corner = vec![i64::MAX; m];
        for (i, v) in values.iter().enumerate() {
            if mask & (1 << i) != 0 {
                for (c, &x) in corner.iter_mut().zip(v.values()) {
                    *c = (*c).min(x);
                }
            }
        }
        let vol: i128 = corner
            .iter()
            .zip(r.values())
            .map(|(&c, &rr)| (c - rr).max(0) as i128)
            .product();
        if mask.count_ones() % 2 == 1 {
            total += vol;
        } else {
            total -= vol;
        }
    }
    total as u128
}

/// Monte Carlo hypervolume estimate with its standard error, sampling
/// uniformly in the bounding box `[r, max_i v]`.
pub fn monte_carlo_hv<R: Rng + ?Sized>(
    values: &[ObjectiveVector],
    r: &ObjectiveVector,
    samples: usize,
    rng: &mut R,
) -> (f64, f64) {
    let m = r.len();
    let upper: Vec<f64> = (0..m)
        .map(|d| values.iter().map(|v| v[d]).max().unwrap_or(r[d]) as f64)
        .collect();
    let lower: Vec<f64> = r.values().iter().map(|&x| x as f64).collect();
    let box_volume: f64 = upper.iter().zip(&lower).map(|(u, l)| u - l).product();
    if box_volume <= 0.0 {
        return (0.0, 0.0);
    }
    let mut hits = 0usize;
    let mut point = vec![0.0; m];
    for _ in 0..samples {
        for d in 0..m {
            point[d] = rng.random_range(lower[d]..upper[d]);
        }
        if values
            .iter()
            .any(|v| v.values().iter().zip(&point).all(|(&x, &p)| p <= x as f64))
        {
            hits += 1;
        }
    }
    let frac = hits as f64 / samples as f64;
    let se = (frac * (1.0 - frac) / samples as f64).sqrt() * box_volume;
    (frac * box_volume, se)
}
