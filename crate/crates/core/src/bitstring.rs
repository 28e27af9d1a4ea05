//! Fixed-length binary genomes.
//!
//! Positions are 0-based in code. Block accessors take a 1-based block index
//! `i` and cover the 0-based positions `(i-1)*b .. i*b`, i.e. the 1-based
//! positions `b(i-1)+1 ..= bi`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn zeros(n: usize) -> Self {
        Self {
            bits: vec![false; n],
        }
    }

    pub fn ones(n: usize) -> Self {
        Self {
            bits: vec![true; n],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Uniformly random string of length `n`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self {
            bits: (0..n).map(|_| rng.random_bool(0.5)).collect(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, pos: usize) -> bool {
        self.bits[pos]
    }

    #[inline]
    pub fn set(&mut self, pos: usize, value: bool) {
        self.bits[pos] = value;
    }

    #[inline]
    pub fn flip(&mut self, pos: usize) {
        self.bits[pos] = !self.bits[pos];
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn hamming_distance(&self, other: &BitString) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Slice of block `i` (1-based) when the string is cut into `m_prime`
    /// equal blocks.
    pub fn block(&self, i: usize, m_prime: usize) -> Result<&[bool]> {
        let n = self.len();
        if m_prime == 0 || n % m_prime != 0 {
            return Err(Error::usage(format!(
                "length {n} is not divisible into {m_prime} blocks"
            )));
        }
        if i == 0 || i > m_prime {
            return Err(Error::usage(format!(
                "block index {i} outside 1..={m_prime}"
            )));
        }
        let b = n / m_prime;
        Ok(&self.bits[(i - 1) * b..i * b])
    }

    /// Number of 1-bits in block `i` (1-based) of width `n / m_prime`.
    pub fn block_ones(&self, i: usize, m_prime: usize) -> Result<usize> {
        Ok(self.block(i, m_prime)?.iter().filter(|&&b| b).count())
    }
}

/// Free-function form of [`BitString::block_ones`].
pub fn block_ones(x: &BitString, i: usize, m_prime: usize) -> Result<usize> {
    x.block_ones(i, m_prime)
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::usage(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_bits)
    }
}
