use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitstring::BitString;
use crate::error::{Error, Result};

/// Mutation operator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mutation {
    /// Flip exactly one uniformly chosen bit (SEMO).
    OneBit,
    /// Flip each bit independently with probability `rate` (GSEMO,
    /// SMS-EMOA, NSGA-III).
    Bitwise { rate: f64 },
}

impl Mutation {
    /// Bitwise mutation at the standard rate `1/n`.
    pub fn standard_bitwise(n: usize) -> Self {
        Mutation::Bitwise {
            rate: 1.0 / n as f64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Mutation::OneBit => Ok(()),
            Mutation::Bitwise { rate } if rate > 0.0 && rate <= 1.0 => Ok(()),
            Mutation::Bitwise { rate } => {
                Err(Error::usage(format!("mutation rate {rate} outside (0, 1]")))
            }
        }
    }
}

/// Offspring of `x` under `op`. Bitwise mutation may return a copy of `x`.
pub fn mutate<R: Rng + ?Sized>(x: &BitString, op: Mutation, rng: &mut R) -> BitString {
    let mut child = x.clone();
    let n = x.len();
    match op {
        Mutation::OneBit => {
            if n > 0 {
                child.flip(rng.random_range(0..n));
            }
        }
        Mutation::Bitwise { rate } => {
            for pos in 0..n {
                if rng.random_bool(rate) {
                    child.flip(pos);
                }
            }
        }
    }
    child
}
