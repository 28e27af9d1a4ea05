use std::sync::Arc;

use crate::benchmarks::{self, BenchmarkSpec, FrontDescriptor, MilestoneSets};
use crate::error::Result;
use crate::objective::ObjectiveVector;
use crate::ranking::{reference_points, ReferencePointSet};

/// A benchmark instance with everything a run needs precomputed. Shared
/// read-only between trials.
#[derive(Debug)]
pub struct Instance {
    spec: BenchmarkSpec,
    front: FrontDescriptor,
    milestones: Option<MilestoneSets>,
    refs: Option<Arc<ReferencePointSet>>,
}

impl Instance {
    pub fn new(spec: BenchmarkSpec) -> Result<Self> {
        let front = benchmarks::pareto_front(&spec)?;
        let milestones = benchmarks::milestone_sets(&spec).ok();
        Ok(Self {
            spec,
            front,
            milestones,
            refs: None,
        })
    }

    /// Attaches a simplex-lattice reference set of granularity `p`.
    pub fn with_reference_points(mut self, p: usize) -> Result<Self> {
        self.refs = Some(Arc::new(reference_points(self.spec.objectives(), p)?));
        Ok(self)
    }

    pub fn spec(&self) -> &BenchmarkSpec {
        &self.spec
    }

    pub fn front(&self) -> &FrontDescriptor {
        &self.front
    }

    pub fn milestones(&self) -> Option<&MilestoneSets> {
        self.milestones.as_ref()
    }

    pub fn reference_points(&self) -> Option<&Arc<ReferencePointSet>> {
        self.refs.as_ref()
    }
}

const CORNERS: u8 = 1;
const CLIFFS: u8 = 2;

#[derive(Clone, Debug, Default)]
struct Milestone {
    size: usize,
    present: usize,
    reached_at: Option<u64>,
}

/// Incremental front-coverage bookkeeping.
///
/// Tracks how many population members hold each front value, so both
/// coverage and phase milestones refer to the current population. Each
/// insertion or removal costs one hash lookup.
#[derive(Clone, Debug)]
pub struct Coverage {
    counts: Vec<u32>,
    flags: Vec<u8>,
    covered: usize,
    covered_at: Option<u64>,
    corners: Option<Milestone>,
    cliffs: Option<Milestone>,
}

impl Coverage {
    pub fn new(instance: &Instance) -> Self {
        let front = instance.front();
        let mut flags = vec![0u8; front.size()];
        let mut mark = |values: &[ObjectiveVector], flag: u8| {
            for v in values {
                let i = front
                    .index_of(v)
                    .expect("milestone values lie on the Pareto front");
                flags[i] |= flag;
            }
            Milestone {
                size: values.len(),
                ..Milestone::default()
            }
        };
        let (corners, cliffs) = match instance.milestones() {
            Some(sets) => (
                Some(mark(&sets.corners, CORNERS)),
                sets.cliffs.as_deref().map(|c| mark(c, CLIFFS)),
            ),
            None => (None, None),
        };
        Self {
            counts: vec![0; front.size()],
            flags,
            covered: 0,
            covered_at: None,
            corners,
            cliffs,
        }
    }

    pub(crate) fn add(&mut self, front: &FrontDescriptor, value: &ObjectiveVector) {
        if let Some(i) = front.index_of(value) {
            self.counts[i] += 1;
            if self.counts[i] == 1 {
                self.covered += 1;
                self.bump(i, true);
            }
        }
    }

    pub(crate) fn remove(&mut self, front: &FrontDescriptor, value: &ObjectiveVector) {
        if let Some(i) = front.index_of(value) {
            self.counts[i] -= 1;
            if self.counts[i] == 0 {
                self.covered -= 1;
                self.bump(i, false);
            }
        }
    }

    fn bump(&mut self, i: usize, up: bool) {
        let flags = self.flags[i];
        for (flag, milestone) in [(CORNERS, &mut self.corners), (CLIFFS, &mut self.cliffs)] {
            if flags & flag != 0 {
                if let Some(ms) = milestone {
                    if up {
                        ms.present += 1;
                    } else {
                        ms.present -= 1;
                    }
                }
            }
        }
    }

    /// Records first-reach times after a completed step.
    pub(crate) fn observe(&mut self, evaluations: u64) {
        if self.covered_at.is_none() && self.is_covered() {
            self.covered_at = Some(evaluations);
        }
        for ms in [&mut self.corners, &mut self.cliffs].into_iter().flatten() {
            if ms.reached_at.is_none() && ms.present == ms.size {
                ms.reached_at = Some(evaluations);
            }
        }
    }

    pub fn is_covered(&self) -> bool {
        self.covered == self.counts.len()
    }

    pub fn covered_count(&self) -> usize {
        self.covered
    }

    pub fn fraction(&self) -> f64 {
        self.covered as f64 / self.counts.len() as f64
    }

    /// Evaluation count at which the front was first covered.
    pub fn covered_at(&self) -> Option<u64> {
        self.covered_at
    }

    /// First time the corner set (`C_m` or `C_{m,k}`) was fully present.
    pub fn corners_reached_at(&self) -> Option<u64> {
        self.corners.as_ref().and_then(|m| m.reached_at)
    }

    /// First time `K_{m,k}` was fully present (OJZJ only).
    pub fn cliffs_reached_at(&self) -> Option<u64> {
        self.cliffs.as_ref().and_then(|m| m.reached_at)
    }
}
