//! Population containers: the unbounded Pareto archive of (G)SEMO and the
//! fixed-size population of SMS-EMOA and NSGA-III.

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::objective::ObjectiveVector;

/// A genome together with its (cached) objective value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Individual {
    pub genome: BitString,
    pub value: ObjectiveVector,
}

impl Individual {
    pub fn new(genome: BitString, value: ObjectiveVector) -> Self {
        Self { genome, value }
    }
}

/// Result of [`ParetoArchive::insert`].
#[derive(Debug, Default)]
pub struct Insertion {
    pub accepted: bool,
    /// Entries removed because the new value weakly dominates them. Includes
    /// the previous holder of an equal value.
    pub evicted: Vec<Individual>,
}

/// The (G)SEMO population. No entry strictly dominates another and no two
/// entries share an objective value.
///
/// Entries live in a vector: both the eviction pass and the acceptance test
/// are linear scans anyway, and archive sizes stay small.
#[derive(Clone, Debug, Default)]
pub struct ParetoArchive {
    entries: Vec<Individual>,
}

impl ParetoArchive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Individual] {
        &self.entries
    }

    pub fn values(&self) -> impl Iterator<Item = &ObjectiveVector> {
        self.entries.iter().map(|e| &e.value)
    }

    pub fn get(&self, value: &ObjectiveVector) -> Option<&BitString> {
        self.entries
            .iter()
            .find(|e| &e.value == value)
            .map(|e| &e.genome)
    }

    /// Uniformly random entry; `None` on an empty archive.
    pub fn choose<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<&Individual> {
        self.entries.choose(rng)
    }

    /// Offers `x` with value `fx` to the archive.
    ///
    /// First every entry weakly dominated by `fx` is removed, then `x` is
    /// added unless a remaining entry strictly dominates `fx`. An entry with
    /// a value equal to `fx` is therefore replaced by the new genome.
    pub fn insert(&mut self, x: BitString, fx: ObjectiveVector) -> Insertion {
        let mut evicted = Vec::new();
        let old = std::mem::take(&mut self.entries);
        self.entries.reserve(old.len() + 1);
        for entry in old {
            if fx.weakly_dominates(&entry.value) {
                evicted.push(entry);
            } else {
                self.entries.push(entry);
            }
        }
        let accepted = !self.entries.iter().any(|e| e.value.strictly_dominates(&fx));
        if accepted {
            self.entries.push(Individual::new(x, fx));
        }
        Insertion { accepted, evicted }
    }

    /// Checks the container invariants. Quadratic; meant for tests.
    pub fn is_consistent(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, a)| {
            self.entries[i + 1..]
                .iter()
                .all(|b| a.value != b.value && a.value.is_incomparable(&b.value))
        })
    }
}

/// Fixed-size population of exactly `mu` members after each completed
/// generation.
#[derive(Clone, Debug)]
pub struct FixedPopulation {
    members: Vec<Individual>,
    mu: usize,
}

impl FixedPopulation {
    pub fn new(members: Vec<Individual>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::usage("population size must be positive"));
        }
        let mu = members.len();
        Ok(Self { members, mu })
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn values(&self) -> impl Iterator<Item = &ObjectiveVector> {
        self.members.iter().map(|m| &m.value)
    }

    pub fn choose<R: Rng + ?Sized>(&self, rng: &mut R) -> &Individual {
        self.members.choose(rng).expect("population is never empty")
    }

    /// Replaces the members. The new generation must have exactly `mu`
    /// members.
    pub fn replace(&mut self, members: Vec<Individual>) {
        assert_eq!(members.len(), self.mu, "generation must keep size mu");
        self.members = members;
    }

    pub(crate) fn members_mut(&mut self) -> &mut Vec<Individual> {
        &mut self.members
    }
}
