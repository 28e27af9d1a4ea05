//! Structured reference points and NSGA-III niche selection.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::objective::ObjectiveVector;

/// Largest reference set that will be materialized.
pub const MAX_REFERENCE_POINTS: u128 = 20_000_000;

/// Simplex lattice: every `m`-vector of non-negative integers summing to `p`,
/// read as the point `a / p` on the unit simplex.
#[derive(Clone, Debug)]
pub struct ReferencePointSet {
    m: usize,
    p: usize,
    compositions: Vec<Vec<u32>>,
    /// `|a|^2` per composition, cached for the distance computation.
    norms_sq: Vec<f64>,
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of points in the lattice with `m` objectives and granularity `p`.
pub fn reference_point_count(m: usize, p: usize) -> u128 {
    binomial((p + m - 1) as u128, (m - 1) as u128)
}

pub fn reference_points(m: usize, p: usize) -> Result<ReferencePointSet> {
    if m < 2 {
        return Err(Error::usage(format!("need at least 2 objectives, got {m}")));
    }
    if p == 0 {
        return Err(Error::usage("granularity p must be positive"));
    }
    let count = reference_point_count(m, p);
    if count > MAX_REFERENCE_POINTS {
        return Err(Error::Capacity {
            what: "reference points",
            required: count,
            cap: MAX_REFERENCE_POINTS,
        });
    }
    let mut compositions = Vec::with_capacity(count as usize);
    let mut current = vec![0u32; m];
    compose(&mut current, 0, p as u32, &mut compositions);
    let norms_sq = compositions
        .iter()
        .map(|a| a.iter().map(|&x| (x as f64) * (x as f64)).sum())
        .collect();
    Ok(ReferencePointSet {
        m,
        p,
        compositions,
        norms_sq,
    })
}

fn compose(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(current.clone());
        return;
    }
    for v in (0..=remaining).rev() {
        current[pos] = v;
        compose(current, pos + 1, remaining - v, out);
    }
}

impl ReferencePointSet {
    pub fn objectives(&self) -> usize {
        self.m
    }

    pub fn granularity(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.compositions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.compositions.is_empty()
    }

    /// Point `i` as coordinates on the unit simplex.
    pub fn point(&self, i: usize) -> Vec<f64> {
        self.compositions[i]
            .iter()
            .map(|&a| a as f64 / self.p as f64)
            .collect()
    }

    /// Integer lattice coordinates of point `i` (summing to `p`).
    pub fn lattice_point(&self, i: usize) -> &[u32] {
        &self.compositions[i]
    }

    /// Nearest reference direction to the normalized point `z` by
    /// perpendicular distance, with that distance. Ties go to the lower index.
    pub fn associate(&self, z: &[f64]) -> (usize, f64) {
        debug_assert_eq!(z.len(), self.m);
        let z_sq: f64 = z.iter().map(|x| x * x).sum();
        let mut best = (0, f64::INFINITY);
        for (i, (a, &norm_sq)) in self.compositions.iter().zip(&self.norms_sq).enumerate() {
            let dot: f64 = a.iter().zip(z).map(|(&w, &x)| w as f64 * x).sum();
            let d_sq = (z_sq - dot * dot / norm_sq).max(0.0);
            if d_sq < best.1 {
                best = (i, d_sq);
            }
        }
        (best.0, best.1.sqrt())
    }
}

/// Niche-based survivor selection with a fixed normalization divisor
/// `f_max`. Associations are cached per objective value, so a single
/// instance should be reused across generations of one run.
#[derive(Clone, Debug)]
pub struct Niching {
    refs: Arc<ReferencePointSet>,
    f_max: f64,
    cache: HashMap<ObjectiveVector, (usize, f64)>,
}

impl Niching {
    pub fn new(refs: Arc<ReferencePointSet>, f_max: i64) -> Result<Self> {
        if f_max <= 0 {
            return Err(Error::usage("f_max must be positive"));
        }
        Ok(Self {
            refs,
            f_max: f_max as f64,
            cache: HashMap::new(),
        })
    }

    pub fn reference_points(&self) -> &ReferencePointSet {
        &self.refs
    }

    /// Reference index and perpendicular distance of `value` after dividing
    /// every objective by `f_max`.
    pub fn associate(&mut self, value: &ObjectiveVector) -> (usize, f64) {
        if let Some(&hit) = self.cache.get(value) {
            return hit;
        }
        let z: Vec<f64> = value
            .values()
            .iter()
            .map(|&v| v as f64 / self.f_max)
            .collect();
        let hit = self.refs.associate(&z);
        self.cache.insert(value.clone(), hit);
        hit
    }

    /// Picks `needed` of `candidates`, returned as indices into `candidates`.
    ///
    /// Niche counts start from the members in `selected` (already accepted
    /// from earlier fronts). Repeatedly a least-occupied reference point that
    /// still has unpicked candidates is chosen uniformly at random; an empty
    /// niche takes its closest candidate, an occupied one a uniformly random
    /// candidate. Ties are broken uniformly at random.
    pub fn select<R: Rng + ?Sized>(
        &mut self,
        selected: &[&ObjectiveVector],
        candidates: &[&ObjectiveVector],
        needed: usize,
        rng: &mut R,
    ) -> Result<Vec<usize>> {
        if needed > candidates.len() {
            return Err(Error::usage(format!(
                "cannot select {needed} survivors from {} candidates",
                candidates.len()
            )));
        }
        if needed == candidates.len() {
            return Ok((0..needed).collect());
        }
        let mut niche_count: HashMap<usize, usize> = HashMap::new();
        for v in selected {
            *niche_count.entry(self.associate(v).0).or_insert(0) += 1;
        }
        let mut members: BTreeMap<usize, Vec<(usize, f64)>> = BTreeMap::new();
        for (i, v) in candidates.iter().enumerate() {
            let (j, d) = self.associate(v);
            members.entry(j).or_default().push((i, d));
        }

        let mut chosen = Vec::with_capacity(needed);
        let mut least: Vec<usize> = Vec::new();
        let mut pool: Vec<usize> = Vec::new();
        while chosen.len() < needed {
            let min_count = members
                .keys()
                .map(|j| niche_count.get(j).copied().unwrap_or(0))
                .min()
                .expect("candidates remain while survivors are missing");
            least.clear();
            least.extend(
                members
                    .keys()
                    .copied()
                    .filter(|j| niche_count.get(j).copied().unwrap_or(0) == min_count),
            );
            let j = *least.choose(rng).expect("non-empty");
            let group = members.get_mut(&j).expect("present");
            pool.clear();
            if min_count == 0 {
                let closest = group.iter().map(|&(_, d)| d).fold(f64::INFINITY, f64::min);
                pool.extend((0..group.len()).filter(|&g| group[g].1 == closest));
            } else {
                pool.extend(0..group.len());
            }
            let pick = *pool.choose(rng).expect("non-empty");
            chosen.push(group.swap_remove(pick).0);
            if group.is_empty() {
                members.remove(&j);
            }
            *niche_count.entry(j).or_insert(0) += 1;
        }
        Ok(chosen)
    }
}

/// One-shot niche selection with no previously accepted members.
pub fn niche_select<R: Rng + ?Sized>(
    candidates: &[ObjectiveVector],
    survivors_needed: usize,
    refs: Arc<ReferencePointSet>,
    f_max: i64,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let mut niching = Niching::new(refs, f_max)?;
    let views: Vec<&ObjectiveVector> = candidates.iter().collect();
    niching.select(&[], &views, survivors_needed, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn ov<const N: usize>(v: [i64; N]) -> ObjectiveVector {
        v.into()
    }

    #[test]
    fn segment_lattice() {
        let refs = reference_points(2, 2).unwrap();
        let pts: Vec<_> = (0..refs.len()).map(|i| refs.point(i)).collect();
        assert_eq!(pts, vec![vec![1.0, 0.0], vec![0.5, 0.5], vec![0.0, 1.0]]);
    }

    #[test]
    fn unit_vectors_for_p_one() {
        let refs = reference_points(3, 1).unwrap();
        assert_eq!(refs.len(), 3);
        for i in 0..3 {
            assert_eq!(refs.point(i).iter().sum::<f64>(), 1.0);
        }
    }

    #[test]
    fn cardinality_matches_stars_and_bars() {
        assert_eq!(reference_points(4, 3).unwrap().len(), 20);
        for m in 2..=8 {
            for p in 1..=6 {
                let refs = reference_points(m, p).unwrap();
                // brute-force count of integer m-vectors in [0, p]^m summing to p
                let mut brute = 0usize;
                let mut digits = vec![0usize; m];
                loop {
                    if digits.iter().sum::<usize>() == p {
                        brute += 1;
                    }
                    let mut carry = true;
                    for d in digits.iter_mut() {
                        *d += 1;
                        if *d <= p {
                            carry = false;
                            break;
                        }
                        *d = 0;
                    }
                    if carry {
                        break;
                    }
                }
                assert_eq!(refs.len(), brute, "m={m} p={p}");
                let distinct: HashSet<_> = (0..refs.len())
                    .map(|i| refs.lattice_point(i).to_vec())
                    .collect();
                assert_eq!(distinct.len(), refs.len());
                assert!(
                    (0..refs.len()).all(|i| refs.lattice_point(i).iter().sum::<u32>() == p as u32)
                );
            }
        }
    }

    #[test]
    fn invalid_lattice_rejected() {
        assert!(reference_points(1, 3).is_err());
        assert!(reference_points(3, 0).is_err());
    }

    #[test]
    fn selecting_everything_returns_all() {
        let refs = Arc::new(reference_points(2, 4).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = [ov([1, 3]), ov([2, 2])];
        assert_eq!(
            niche_select(&c, 2, refs.clone(), 4, &mut rng).unwrap(),
            vec![0, 1]
        );
        assert!(niche_select(&c, 3, refs, 4, &mut rng).is_err());
    }

    #[test]
    fn three_points_three_niches() {
        let refs = Arc::new(reference_points(2, 2).unwrap());
        let mut niching = Niching::new(refs.clone(), 2).unwrap();
        let c = [ov([2, 0]), ov([1, 1]), ov([0, 2])];
        let niches: HashSet<_> = c.iter().map(|v| niching.associate(v).0).collect();
        assert_eq!(niches.len(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut chosen = niche_select(&c, 3, refs, 2, &mut rng).unwrap();
        chosen.sort();
        assert_eq!(chosen, vec![0, 1, 2]);
    }

    #[test]
    fn identical_candidates_are_equally_likely() {
        let refs = Arc::new(reference_points(2, 2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = [ov([1, 1]), ov([1, 1])];
        let trials = 20_000;
        let firsts = (0..trials)
            .filter(|_| niche_select(&c, 1, refs.clone(), 2, &mut rng).unwrap()[0] == 0)
            .count();
        let sd = (trials as f64 * 0.25).sqrt();
        assert!((firsts as f64 - trials as f64 / 2.0).abs() < 4.0 * sd);
    }

    #[test]
    fn empty_niches_are_filled_first() {
        // Two candidates share a niche with an already selected member, one
        // candidate sits alone in an empty niche: it must be picked.
        let refs = Arc::new(reference_points(2, 2).unwrap());
        let mut niching = Niching::new(refs, 2).unwrap();
        let selected = ov([2, 0]);
        let a = ov([2, 0]);
        let b = ov([0, 2]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let got = niching
                .select(&[&selected], &[&a, &a, &b], 1, &mut rng)
                .unwrap();
            assert_eq!(got, vec![2]);
        }
    }
}
