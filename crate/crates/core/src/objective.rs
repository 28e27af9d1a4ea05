//! Objective vectors and the (maximization) domination relations.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer objective value `f(x) = (f_1(x), ..., f_m(x))`. All objectives are
/// maximized.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectiveVector(Vec<i64>);

impl ObjectiveVector {
    pub fn new(values: Vec<i64>) -> Self {
        Self(values)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<i64> {
        self.0
    }

    /// Weak domination `self ⪰ other`. Lengths must agree.
    #[inline]
    pub fn weakly_dominates(&self, other: &Self) -> bool {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// Strict domination `self ≻ other`: weak domination plus inequality.
    #[inline]
    pub fn strictly_dominates(&self, other: &Self) -> bool {
        debug_assert_eq!(self.len(), other.len());
        let mut strict = false;
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return false;
            }
            strict |= a > b;
        }
        strict
    }

    /// Neither vector strictly dominates the other.
    #[inline]
    pub fn is_incomparable(&self, other: &Self) -> bool {
        !self.strictly_dominates(other) && !other.strictly_dominates(self)
    }
}

impl From<Vec<i64>> for ObjectiveVector {
    fn from(values: Vec<i64>) -> Self {
        Self(values)
    }
}

impl<const N: usize> From<[i64; N]> for ObjectiveVector {
    fn from(values: [i64; N]) -> Self {
        Self(values.to_vec())
    }
}

impl Index<usize> for ObjectiveVector {
    type Output = i64;

    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl fmt::Debug for ObjectiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for ObjectiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn check_lengths(u: &ObjectiveVector, v: &ObjectiveVector) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::usage(format!(
            "objective vectors have different lengths ({} vs {})",
            u.len(),
            v.len()
        )));
    }
    Ok(())
}

/// `u ⪰ v`: `u_i >= v_i` for every objective.
pub fn dominates(u: &ObjectiveVector, v: &ObjectiveVector) -> Result<bool> {
    check_lengths(u, v)?;
    Ok(u.weakly_dominates(v))
}

/// `u ≻ v`: `u ⪰ v` and `u != v`.
pub fn strictly_dominates(u: &ObjectiveVector, v: &ObjectiveVector) -> Result<bool> {
    check_lengths(u, v)?;
    Ok(u.strictly_dominates(v))
}
