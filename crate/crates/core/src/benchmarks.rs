//! The four block-structured benchmarks `mOMM`, `mCOCZ`, `mLOTZ` and
//! `mOJZJ_k`, their Pareto fronts and the milestone value sets used to
//! timestamp run phases.
//!
//! A bitstring of length `n` is split into `m' = m/2` blocks and each block
//! contributes two objectives. Objective `2i-1` (0-based index `2i-2`) is the
//! "zeros" objective of block `i`, objective `2i` the "ones" objective.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::objective::ObjectiveVector;

/// Default cap on closed-form front enumeration.
pub const DEFAULT_FRONT_CAP: u128 = 10_000_000;

/// Largest `n` accepted by [`brute_force_front`].
pub const BRUTE_FORCE_MAX_N: usize = 24;

/// Exact maximum antichains are only computed up to this many distinct
/// objective values.
pub const EXACT_ANTICHAIN_MAX_VALUES: usize = 4_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchmarkKind {
    Omm,
    Cocz,
    Lotz,
    Ojzj,
}

impl BenchmarkKind {
    pub const ALL: [BenchmarkKind; 4] = [Self::Omm, Self::Cocz, Self::Lotz, Self::Ojzj];

    pub fn name(self) -> &'static str {
        match self {
            Self::Omm => "omm",
            Self::Cocz => "cocz",
            Self::Lotz => "lotz",
            Self::Ojzj => "ojzj",
        }
    }
}

impl fmt::Display for BenchmarkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchmarkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "omm" | "oneminmax" => Ok(Self::Omm),
            "cocz" => Ok(Self::Cocz),
            "lotz" => Ok(Self::Lotz),
            "ojzj" | "onejumpzerojump" => Ok(Self::Ojzj),
            other => Err(Error::usage(format!(
                "unknown benchmark {other:?} (expected omm, cocz, lotz or ojzj)"
            ))),
        }
    }
}

/// A validated benchmark instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct BenchmarkSpec {
    kind: BenchmarkKind,
    n: usize,
    m_prime: usize,
    k: usize,
}

/// Serialized form: objective count `m`, not `m'`.
#[derive(Serialize, Deserialize)]
struct RawSpec {
    benchmark: BenchmarkKind,
    n: usize,
    m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
}

impl TryFrom<RawSpec> for BenchmarkSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        BenchmarkSpec::with_objectives(raw.benchmark, raw.n, raw.m, raw.k)
    }
}

impl From<BenchmarkSpec> for RawSpec {
    fn from(spec: BenchmarkSpec) -> Self {
        RawSpec {
            benchmark: spec.kind,
            n: spec.n,
            m: spec.objectives(),
            k: (spec.kind == BenchmarkKind::Ojzj).then_some(spec.k),
        }
    }
}

impl BenchmarkSpec {
    /// Validates an instance given `m'` (half the objective count). `k` is
    /// required for OJZJ and ignored otherwise.
    pub fn new(kind: BenchmarkKind, n: usize, m_prime: usize, k: Option<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::usage("n must be positive"));
        }
        if m_prime == 0 {
            return Err(Error::usage("m' must be positive"));
        }
        match kind {
            BenchmarkKind::Omm | BenchmarkKind::Lotz | BenchmarkKind::Ojzj => {
                if n % m_prime != 0 {
                    return Err(Error::usage(format!(
                        "{kind}: n = {n} is not divisible by m' = {m_prime}"
                    )));
                }
            }
            BenchmarkKind::Cocz => {
                if n % (2 * m_prime) != 0 || (n / (2 * m_prime)) % 4 != 0 {
                    return Err(Error::usage(format!(
                        "cocz: n = {n} must equal 2*b*m' with m' = {m_prime} and b a multiple of 4"
                    )));
                }
            }
        }
        let k = if kind == BenchmarkKind::Ojzj {
            let k = k.ok_or_else(|| Error::usage("ojzj requires a jump size k"))?;
            let max_k = n / (2 * m_prime);
            if k < 2 || k > max_k {
                return Err(Error::usage(format!(
                    "ojzj: k = {k} outside [2, n/(2m')] = [2, {max_k}]"
                )));
            }
            k
        } else {
            0
        };
        Ok(Self {
            kind,
            n,
            m_prime,
            k,
        })
    }

    /// Validates an instance given the objective count `m` (must be even).
    pub fn with_objectives(
        kind: BenchmarkKind,
        n: usize,
        m: usize,
        k: Option<usize>,
    ) -> Result<Self> {
        if m == 0 || m % 2 != 0 {
            return Err(Error::usage(format!(
                "objective count m = {m} must be even and positive"
            )));
        }
        Self::new(kind, n, m / 2, k)
    }

    pub fn omm(n: usize, m_prime: usize) -> Result<Self> {
        Self::new(BenchmarkKind::Omm, n, m_prime, None)
    }

    pub fn cocz(n: usize, m_prime: usize) -> Result<Self> {
        Self::new(BenchmarkKind::Cocz, n, m_prime, None)
    }

    pub fn lotz(n: usize, m_prime: usize) -> Result<Self> {
        Self::new(BenchmarkKind::Lotz, n, m_prime, None)
    }

    pub fn ojzj(n: usize, m_prime: usize, k: usize) -> Result<Self> {
        Self::new(BenchmarkKind::Ojzj, n, m_prime, Some(k))
    }

    pub fn kind(&self) -> BenchmarkKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m_prime(&self) -> usize {
        self.m_prime
    }

    /// Number of objectives `m = 2m'`.
    pub fn objectives(&self) -> usize {
        2 * self.m_prime
    }

    /// Jump size; `None` unless OJZJ.
    pub fn k(&self) -> Option<usize> {
        (self.kind == BenchmarkKind::Ojzj).then_some(self.k)
    }

    /// Width `b` of the blocks carrying the per-block objective pair. For
    /// COCZ these are the blocks of the second half, `n / (2m')`.
    pub fn block_width(&self) -> usize {
        match self.kind {
            BenchmarkKind::Cocz => self.n / (2 * self.m_prime),
            _ => self.n / self.m_prime,
        }
    }

    /// Largest value any objective can take over all bitstrings.
    pub fn f_max(&self) -> i64 {
        let b = self.block_width() as i64;
        match self.kind {
            BenchmarkKind::Omm | BenchmarkKind::Lotz => b,
            BenchmarkKind::Cocz => (self.n / 2) as i64 + b,
            BenchmarkKind::Ojzj => b + self.k as i64,
        }
    }

    /// `f(x)`; errors on a length mismatch.
    pub fn evaluate(&self, x: &BitString) -> Result<ObjectiveVector> {
        if x.len() != self.n {
            return Err(Error::usage(format!(
                "bitstring length {} does not match n = {}",
                x.len(),
                self.n
            )));
        }
        Ok(self.eval(x))
    }

    /// `f(x)` for a bitstring already known to have length `n`.
    pub fn eval(&self, x: &BitString) -> ObjectiveVector {
        debug_assert_eq!(x.len(), self.n);
        let bits = x.bits();
        let b = self.block_width();
        let mut out = Vec::with_capacity(self.objectives());
        match self.kind {
            BenchmarkKind::Omm | BenchmarkKind::Ojzj => {
                for block in bits.chunks_exact(b) {
                    let ones = block.iter().filter(|&&v| v).count();
                    let (z, o) = self.block_pair(ones);
                    out.push(z);
                    out.push(o);
                }
            }
            BenchmarkKind::Cocz => {
                let (coop, rest) = bits.split_at(self.n / 2);
                let c = coop.iter().filter(|&&v| v).count() as i64;
                for block in rest.chunks_exact(b) {
                    let ones = block.iter().filter(|&&v| v).count();
                    let (z, o) = self.block_pair(ones);
                    out.push(c + z);
                    out.push(c + o);
                }
            }
            BenchmarkKind::Lotz => {
                for block in bits.chunks_exact(b) {
                    let leading_ones = block.iter().take_while(|&&v| v).count() as i64;
                    let trailing_zeros = block.iter().rev().take_while(|&&v| !v).count() as i64;
                    out.push(trailing_zeros);
                    out.push(leading_ones);
                }
            }
        }
        ObjectiveVector::new(out)
    }

    /// (zeros objective, ones objective) of a block with `ones` 1-bits, not
    /// counting the COCZ cooperative term. Undefined for LOTZ, whose value
    /// depends on bit positions.
    fn block_pair(&self, ones: usize) -> (i64, i64) {
        let b = self.block_width();
        let zeros = b - ones;
        match self.kind {
            BenchmarkKind::Omm | BenchmarkKind::Cocz | BenchmarkKind::Lotz => {
                (zeros as i64, ones as i64)
            }
            BenchmarkKind::Ojzj => (jump(zeros, b, self.k), jump(ones, b, self.k)),
        }
    }

    /// Per-block value pairs that occur on the Pareto front, in increasing
    /// order of the block's ones objective.
    fn front_block_pairs(&self) -> Vec<(i64, i64)> {
        let b = self.block_width();
        match self.kind {
            BenchmarkKind::Omm | BenchmarkKind::Lotz => {
                (0..=b).map(|a| self.block_pair(a)).collect()
            }
            BenchmarkKind::Cocz => {
                let c = (self.n / 2) as i64;
                (0..=b)
                    .map(|a| {
                        let (z, o) = self.block_pair(a);
                        (c + z, c + o)
                    })
                    .collect()
            }
            BenchmarkKind::Ojzj => std::iter::once(0)
                .chain(self.k..=b - self.k)
                .chain(std::iter::once(b))
                .map(|a| self.block_pair(a))
                .collect(),
        }
    }

    /// Objective value of a Pareto-optimal string whose blocks carry the
    /// given ones counts. LOTZ blocks are read as `1^a 0^(b-a)`.
    pub fn front_value_for_ones(&self, ones: &[usize]) -> ObjectiveVector {
        assert_eq!(ones.len(), self.m_prime);
        let c = if self.kind == BenchmarkKind::Cocz {
            (self.n / 2) as i64
        } else {
            0
        };
        let mut out = Vec::with_capacity(self.objectives());
        for &a in ones {
            let (z, o) = self.block_pair(a);
            out.push(c + z);
            out.push(c + o);
        }
        ObjectiveVector::new(out)
    }

    /// Closed-form Pareto front size.
    pub fn front_size(&self) -> u128 {
        let b = self.block_width() as u128;
        let per_block = match self.kind {
            BenchmarkKind::Omm | BenchmarkKind::Cocz | BenchmarkKind::Lotz => b + 1,
            BenchmarkKind::Ojzj => b - 2 * self.k as u128 + 3,
        };
        per_block.pow(self.m_prime as u32)
    }

    /// The `S` of the runtime bounds: the front size, except for LOTZ where
    /// it is the bound `(n/m' + 1)^(2m' - 1)` on any set of mutually
    /// incomparable values.
    ///
    /// For OJZJ with `b` close to `2k` an antichain can be larger than the
    /// front; [`FrontDescriptor::max_incomparable`] has the exact figure.
    pub fn max_incomparable(&self) -> u128 {
        match self.kind {
            BenchmarkKind::Lotz => {
                let b = self.block_width() as u128;
                (b + 1).pow(2 * self.m_prime as u32 - 1)
            }
            _ => self.front_size(),
        }
    }
}

impl fmt::Display for BenchmarkSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={} m={}", self.kind, self.n, self.objectives())?;
        if let Some(k) = self.k() {
            write!(f, " k={k}")?;
        }
        Ok(())
    }
}

/// `Jump_k` on a block of width `b` with `count` 1-bits. `ZeroJump_k` is the
/// same function applied to the 0-bit count.
fn jump(count: usize, b: usize, k: usize) -> i64 {
    if count <= b - k || count == b {
        (count + k) as i64
    } else {
        (b - count) as i64
    }
}

/// How [`FrontDescriptor::max_incomparable`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IncomparableSource {
    /// Closed form that is exact for this benchmark.
    ClosedForm,
    /// Closed-form upper bound (LOTZ).
    UpperBound,
    /// Maximum antichain over all distinct attainable values.
    Exact,
    /// Only the non-dominated value count; the antichain was not computed.
    FrontSizeOnly,
}

/// A Pareto front together with an index for O(m) membership tests.
#[derive(Clone, Debug)]
pub struct FrontDescriptor {
    values: Vec<ObjectiveVector>,
    index: HashMap<ObjectiveVector, usize>,
    max_incomparable: u128,
    max_incomparable_source: IncomparableSource,
}

impl FrontDescriptor {
    fn from_values(
        values: Vec<ObjectiveVector>,
        max_incomparable: u128,
        max_incomparable_source: IncomparableSource,
    ) -> Self {
        let index = values
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        Self {
            values,
            index,
            max_incomparable,
            max_incomparable_source,
        }
    }

    pub fn values(&self) -> &[ObjectiveVector] {
        &self.values
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn max_incomparable(&self) -> u128 {
        self.max_incomparable
    }

    pub fn max_incomparable_source(&self) -> IncomparableSource {
        self.max_incomparable_source
    }

    pub fn contains(&self, value: &ObjectiveVector) -> bool {
        self.index.contains_key(value)
    }

    /// Position of `value` in [`Self::values`], if it is on the front.
    pub fn index_of(&self, value: &ObjectiveVector) -> Option<usize> {
        self.index.get(value).copied()
    }

    pub fn value_set(&self) -> HashSet<ObjectiveVector> {
        self.values.iter().cloned().collect()
    }
}

/// Lazily enumerates the Pareto front as the Cartesian product of the
/// per-block front pairs (first block most significant).
pub fn front_values(spec: &BenchmarkSpec) -> impl Iterator<Item = ObjectiveVector> {
    let pairs = spec.front_block_pairs();
    let blocks = spec.m_prime();
    let radix = pairs.len();
    let mut digits = vec![0usize; blocks];
    let mut done = radix == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut out = Vec::with_capacity(2 * blocks);
        for &d in &digits {
            out.push(pairs[d].0);
            out.push(pairs[d].1);
        }
        // advance the mixed-radix counter
        done = true;
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < radix {
                done = false;
                break;
            }
            *d = 0;
        }
        Some(ObjectiveVector::new(out))
    })
}

/// Closed-form Pareto front with the default enumeration cap.
pub fn pareto_front(spec: &BenchmarkSpec) -> Result<FrontDescriptor> {
    pareto_front_with_cap(spec, DEFAULT_FRONT_CAP)
}

pub fn pareto_front_with_cap(spec: &BenchmarkSpec, cap: u128) -> Result<FrontDescriptor> {
    let size = spec.front_size();
    if size > cap {
        return Err(Error::Capacity {
            what: "pareto front",
            required: size,
            cap,
        });
    }
    let values: Vec<_> = front_values(spec).collect();
    debug_assert_eq!(values.len() as u128, size);
    let (max_incomparable, source) = match spec.kind() {
        BenchmarkKind::Lotz => (spec.max_incomparable(), IncomparableSource::UpperBound),
        BenchmarkKind::Ojzj => match ojzj_attainable_values(spec) {
            Some(all) => (max_antichain(&all) as u128, IncomparableSource::Exact),
            None => (size, IncomparableSource::FrontSizeOnly),
        },
        _ => (size, IncomparableSource::ClosedForm),
    };
    Ok(FrontDescriptor::from_values(
        values,
        max_incomparable,
        source,
    ))
}

/// Every attainable OJZJ value (one per tuple of block ones counts), or
/// `None` above [`EXACT_ANTICHAIN_MAX_VALUES`].
///
/// Valley values can be mutually incomparable with front values, so for
/// `b` close to `2k` the largest antichain exceeds the front size.
fn ojzj_attainable_values(spec: &BenchmarkSpec) -> Option<Vec<ObjectiveVector>> {
    let b = spec.block_width();
    let count = (b as u128 + 1).checked_pow(spec.m_prime() as u32)?;
    if count > EXACT_ANTICHAIN_MAX_VALUES as u128 {
        return None;
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut ones = vec![0usize; spec.m_prime()];
    loop {
        out.push(spec.front_value_for_ones(&ones));
        let mut carry = true;
        for d in ones.iter_mut().rev() {
            *d += 1;
            if *d <= b {
                carry = false;
                break;
            }
            *d = 0;
        }
        if carry {
            break;
        }
    }
    Some(out)
}

/// Exhaustive front: evaluates all `2^n` bitstrings and keeps the values not
/// strictly dominated by any other attainable value. When the number of
/// distinct attainable values is at most [`EXACT_ANTICHAIN_MAX_VALUES`], the
/// maximum antichain among them is computed exactly.
pub fn brute_force_front(spec: &BenchmarkSpec) -> Result<FrontDescriptor> {
    let n = spec.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::Capacity {
            what: "brute-force enumeration (bits)",
            required: n as u128,
            cap: BRUTE_FORCE_MAX_N as u128,
        });
    }
    let mut distinct: HashSet<ObjectiveVector> = HashSet::new();
    let mut bits = vec![false; n];
    for code in 0u64..(1u64 << n) {
        for (j, bit) in bits.iter_mut().enumerate() {
            *bit = (code >> j) & 1 == 1;
        }
        distinct.insert(spec.eval(&BitString::from_bits(bits.clone())));
    }
    let mut distinct: Vec<_> = distinct.into_iter().collect();
    distinct.sort();
    let front: Vec<_> = distinct
        .iter()
        .filter(|v| !distinct.iter().any(|w| w.strictly_dominates(v)))
        .cloned()
        .collect();
    let (max_incomparable, source) = if distinct.len() <= EXACT_ANTICHAIN_MAX_VALUES {
        (max_antichain(&distinct) as u128, IncomparableSource::Exact)
    } else {
        (front.len() as u128, IncomparableSource::FrontSizeOnly)
    };
    Ok(FrontDescriptor::from_values(
        front,
        max_incomparable,
        source,
    ))
}

/// Size of a maximum antichain of distinct values under strict domination.
///
/// Strict domination on distinct vectors is a strict partial order, so by
/// Dilworth's theorem the answer is `N` minus a maximum matching in the
/// bipartite comparability graph.
pub fn max_antichain(values: &[ObjectiveVector]) -> usize {
    let n = values.len();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| values[i].strictly_dominates(&values[j]))
                .collect()
        })
        .collect();
    let mut match_right: Vec<Option<usize>> = vec![None; n];
    let mut matched = 0;
    for left in 0..n {
        let mut visited = vec![false; n];
        if augment(left, &succ, &mut match_right, &mut visited) {
            matched += 1;
        }
    }
    n - matched
}

fn augment(
    left: usize,
    succ: &[Vec<usize>],
    match_right: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &right in &succ[left] {
        if visited[right] {
            continue;
        }
        visited[right] = true;
        let free = match match_right[right] {
            None => true,
            Some(other) => augment(other, succ, match_right, visited),
        };
        if free {
            match_right[right] = Some(left);
            return true;
        }
    }
    false
}

/// True iff every front value occurs in `seen`.
pub fn is_covered(front: &FrontDescriptor, seen: &HashSet<ObjectiveVector>) -> bool {
    front.values().iter().all(|v| seen.contains(v))
}

/// Phase milestone value sets.
///
/// For OMM and COCZ, `corners` is `C_m` (every block all-ones or all-zeros)
/// and `cliffs` is `None`. For OJZJ, `cliffs` is `K_{m,k}` (every block with
/// exactly `k` ones or exactly `k` zeros) and `corners` is `C_{m,k}`
/// (`K_{m,k}` plus all-ones and all-zeros blocks). Values are deduplicated,
/// so the sets shrink when `b = 2k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilestoneSets {
    pub corners: Vec<ObjectiveVector>,
    pub cliffs: Option<Vec<ObjectiveVector>>,
}

pub fn milestone_sets(spec: &BenchmarkSpec) -> Result<MilestoneSets> {
    let b = spec.block_width();
    let product = |choices: &[usize]| -> Vec<ObjectiveVector> {
        let mut choices = choices.to_vec();
        choices.sort_unstable();
        choices.dedup();
        let mut out = Vec::new();
        let mut ones = vec![0usize; spec.m_prime()];
        let mut digits = vec![0usize; spec.m_prime()];
        loop {
            for (o, &d) in ones.iter_mut().zip(&digits) {
                *o = choices[d];
            }
            out.push(spec.front_value_for_ones(&ones));
            let mut carry = true;
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < choices.len() {
                    carry = false;
                    break;
                }
                *d = 0;
            }
            if carry {
                break;
            }
        }
        out
    };
    match spec.kind() {
        BenchmarkKind::Omm | BenchmarkKind::Cocz => Ok(MilestoneSets {
            corners: product(&[0, b]),
            cliffs: None,
        }),
        BenchmarkKind::Ojzj => {
            let k = spec.k;
            Ok(MilestoneSets {
                corners: product(&[0, k, b - k, b]),
                cliffs: Some(product(&[k, b - k])),
            })
        }
        BenchmarkKind::Lotz => Err(Error::usage("no phase milestones are defined for lotz")),
    }
}
