use crate::error::{Error, Result};
use crate::objective::ObjectiveVector;

/// Indices of a population grouped into non-domination ranks `F_1, F_2, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontPartition {
    pub fronts: Vec<Vec<usize>>,
}

impl FrontPartition {
    pub fn len(&self) -> usize {
        self.fronts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fronts.is_empty()
    }

    pub fn last(&self) -> &[usize] {
        self.fronts.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Rank (0-based front number) of each index.
    pub fn ranks(&self) -> Vec<usize> {
        let total = self.fronts.iter().map(Vec::len).sum();
        let mut ranks = vec![0; total];
        for (r, front) in self.fronts.iter().enumerate() {
            for &i in front {
                ranks[i] = r;
            }
        }
        ranks
    }
}

/// Fast non-dominated sorting under strict domination.
///
/// Each front lists its indices in increasing order, so the output depends
/// only on the input order.
pub fn fast_non_dominated_sort(values: &[ObjectiveVector]) -> Result<FrontPartition> {
    let n = values.len();
    if n == 0 {
        return Err(Error::usage("cannot sort an empty population"));
    }
    let m = values[0].len();
    if values.iter().any(|v| v.len() != m) {
        return Err(Error::usage("objective vectors have different lengths"));
    }

    let mut dominated_count = vec![0usize; n];
    let mut dominates: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if values[i].strictly_dominates(&values[j]) {
                dominates[i].push(j);
                dominated_count[j] += 1;
            } else if values[j].strictly_dominates(&values[i]) {
                dominates[j].push(i);
                dominated_count[i] += 1;
            }
        }
    }

    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominates[i] {
                dominated_count[j] -= 1;
                if dominated_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    Ok(FrontPartition { fronts })
}
