use serde::{Deserialize, Serialize};

/// Summary of evaluations-to-cover over the covered trials. Uncovered trials
/// only show up in `trials - covered_count`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: Option<f64>,
    pub median: Option<f64>,
    pub q05: Option<f64>,
    pub q95: Option<f64>,
    pub max: Option<u64>,
    pub covered_count: usize,
    pub trials: usize,
}

impl SummaryStats {
    /// `samples` are the evaluation counts of covered trials.
    pub fn from_samples(samples: &[u64], trials: usize) -> Self {
        let mut sorted = samples.to_vec();
        sorted.sort_unstable();
        let mean = (!sorted.is_empty())
            .then(|| sorted.iter().map(|&x| x as f64).sum::<f64>() / sorted.len() as f64);
        Self {
            mean,
            median: quantile(&sorted, 0.5),
            q05: quantile(&sorted, 0.05),
            q95: quantile(&sorted, 0.95),
            max: sorted.last().copied(),
            covered_count: sorted.len(),
            trials,
        }
    }
}

/// Quantile of sorted data with linear interpolation between order
/// statistics at position `q (N - 1)`.
pub fn quantile(sorted: &[u64], q: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let h = q * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = h - lo as f64;
    Some(sorted[lo] as f64 + frac * (sorted[hi] as f64 - sorted[lo] as f64))
}
