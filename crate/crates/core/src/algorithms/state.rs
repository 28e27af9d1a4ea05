use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;

use super::coverage::{Coverage, Instance};
use super::mutation::{mutate, Mutation};
use super::{nsga3_granularity_threshold, Algorithm, AlgorithmKind};
use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::objective::ObjectiveVector;
use crate::population::{FixedPopulation, Individual, ParetoArchive};
use crate::ranking::{fast_non_dominated_sort, min_contributors, Niching};

#[derive(Clone, Debug)]
pub enum Population {
    Archive(ParetoArchive),
    Fixed(FixedPopulation),
}

impl Population {
    pub fn len(&self) -> usize {
        match self {
            Population::Archive(a) => a.len(),
            Population::Fixed(p) => p.members().len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn members(&self) -> &[Individual] {
        match self {
            Population::Archive(a) => a.entries(),
            Population::Fixed(p) => p.members(),
        }
    }
}

/// The complete state of one run.
#[derive(Clone, Debug)]
pub struct RunState {
    instance: Arc<Instance>,
    algorithm: Algorithm,
    mutation: Mutation,
    population: Population,
    evaluations: u64,
    steps: u64,
    coverage: Coverage,
    niching: Option<Niching>,
}

impl RunState {
    /// Random initialization: one uniform string for (G)SEMO, `mu`
    /// independent uniform strings for SMS-EMOA and NSGA-III.
    pub fn initialize<R: Rng + ?Sized>(
        algorithm: Algorithm,
        instance: Arc<Instance>,
        rng: &mut R,
    ) -> Result<Self> {
        algorithm.validate()?;
        let n = instance.spec().n();
        let genomes = (0..algorithm.init_cost())
            .map(|_| BitString::random(n, rng))
            .collect();
        Self::from_genomes(algorithm, instance, genomes)
    }

    /// Starts from the given genomes, each costing one evaluation. (G)SEMO
    /// offers them to the archive in order; population algorithms need
    /// exactly `mu` of them.
    pub fn from_genomes(
        algorithm: Algorithm,
        instance: Arc<Instance>,
        genomes: Vec<BitString>,
    ) -> Result<Self> {
        algorithm.validate()?;
        let spec = *instance.spec();
        if genomes.is_empty() {
            return Err(Error::usage("initial population is empty"));
        }
        let mut coverage = Coverage::new(&instance);
        let mut individuals = Vec::with_capacity(genomes.len());
        for g in genomes {
            let value = spec.evaluate(&g)?;
            individuals.push(Individual::new(g, value));
        }
        let evaluations = individuals.len() as u64;
        let front = instance.front();
        let mut niching = None;
        let population = match algorithm {
            Algorithm::Semo | Algorithm::Gsemo => {
                let mut archive = ParetoArchive::new();
                for ind in individuals {
                    let ins = archive.insert(ind.genome, ind.value.clone());
                    for e in &ins.evicted {
                        coverage.remove(front, &e.value);
                    }
                    if ins.accepted {
                        coverage.add(front, &ind.value);
                    }
                }
                Population::Archive(archive)
            }
            Algorithm::SmsEmoa { mu } | Algorithm::Nsga3 { mu, .. } => {
                if individuals.len() != mu {
                    return Err(Error::usage(format!(
                        "{algorithm} needs {mu} initial members, got {}",
                        individuals.len()
                    )));
                }
                if let Algorithm::Nsga3 { p, .. } = algorithm {
                    niching = Some(Self::niching_for(&instance, p)?);
                }
                for ind in &individuals {
                    coverage.add(front, &ind.value);
                }
                Population::Fixed(FixedPopulation::new(individuals)?)
            }
        };
        coverage.observe(evaluations);
        Ok(Self {
            mutation: algorithm.mutation(spec.n()),
            instance,
            algorithm,
            population,
            evaluations,
            steps: 0,
            coverage,
            niching,
        })
    }

    fn niching_for(instance: &Instance, p: usize) -> Result<Niching> {
        let refs = instance.reference_points().ok_or_else(|| {
            Error::usage("NSGA-III needs an instance with reference points attached")
        })?;
        if refs.granularity() != p {
            return Err(Error::usage(format!(
                "instance reference points have granularity {}, NSGA-III was configured with p = {p}",
                refs.granularity()
            )));
        }
        let spec = instance.spec();
        let threshold = nsga3_granularity_threshold(spec.objectives(), spec.f_max());
        if p < threshold {
            log::warn!("NSGA-III granularity p = {p} is below 2 m^(3/2) f_max = {threshold}");
        }
        Niching::new(Arc::clone(refs), spec.f_max())
    }

    /// Replaces the mutation operator.
    pub fn with_mutation(mut self, mutation: Mutation) -> Result<Self> {
        mutation.validate()?;
        self.mutation = mutation;
        Ok(self)
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn instance(&self) -> &Arc<Instance> {
        &self.instance
    }

    pub fn mutation(&self) -> Mutation {
        self.mutation
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn members(&self) -> &[Individual] {
        self.population.members()
    }

    pub fn values(&self) -> impl Iterator<Item = &ObjectiveVector> {
        self.members().iter().map(|m| &m.value)
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    /// Completed steps (generations for NSGA-III).
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn coverage(&self) -> &Coverage {
        &self.coverage
    }

    /// One step of the configured algorithm.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()> {
        let offspring = match &self.population {
            Population::Archive(a) => {
                let parent = a.choose(rng).expect("archive is never empty");
                vec![mutate(&parent.genome, self.mutation, rng)]
            }
            Population::Fixed(p) => match self.algorithm {
                Algorithm::Nsga3 { .. } => p
                    .members()
                    .iter()
                    .map(|m| mutate(&m.genome, self.mutation, rng))
                    .collect(),
                _ => vec![mutate(&p.choose(rng).genome, self.mutation, rng)],
            },
        };
        self.offer(offspring, rng)
    }

    /// Completes a step with the given offspring instead of mutated parents.
    /// Steady-state algorithms take one offspring, NSGA-III takes `mu`.
    pub fn offer<R: Rng + ?Sized>(&mut self, offspring: Vec<BitString>, rng: &mut R) -> Result<()> {
        let expected = self.algorithm.step_cost() as usize;
        if offspring.len() != expected {
            return Err(Error::usage(format!(
                "{} expects {expected} offspring per step, got {}",
                self.algorithm,
                offspring.len()
            )));
        }
        let spec = *self.instance.spec();
        let mut children = Vec::with_capacity(offspring.len());
        for g in offspring {
            let value = spec.evaluate(&g)?;
            children.push(Individual::new(g, value));
        }
        self.evaluations += children.len() as u64;
        match self.algorithm {
            Algorithm::Semo | Algorithm::Gsemo => {
                let child = children.pop().expect("one offspring");
                self.archive_insert(child);
            }
            Algorithm::SmsEmoa { .. } => {
                let child = children.pop().expect("one offspring");
                self.smsemoa_select(child, rng)?;
            }
            Algorithm::Nsga3 { .. } => self.nsga3_select(children, rng)?,
        }
        self.steps += 1;
        self.coverage.observe(self.evaluations);
        Ok(())
    }

    fn archive_insert(&mut self, child: Individual) {
        let Population::Archive(archive) = &mut self.population else {
            unreachable!("(G)SEMO runs on an archive")
        };
        let front = self.instance.front();
        let value = child.value.clone();
        let ins = archive.insert(child.genome, child.value);
        for e in &ins.evicted {
            self.coverage.remove(front, &e.value);
        }
        if ins.accepted {
            self.coverage.add(front, &value);
        }
    }

    /// Removes one member of the last non-domination front with minimal
    /// hypervolume contribution, ties uniformly at random.
    fn smsemoa_select<R: Rng + ?Sized>(&mut self, child: Individual, rng: &mut R) -> Result<()> {
        let Population::Fixed(pop) = &mut self.population else {
            unreachable!("SMS-EMOA runs on a fixed population")
        };
        let front = self.instance.front();
        self.coverage.add(front, &child.value);
        let pool = pop.members_mut();
        pool.push(child);
        let values: Vec<ObjectiveVector> = pool.iter().map(|m| m.value.clone()).collect();
        let ranks = fast_non_dominated_sort(&values)?;
        let last = ranks.last();
        let victim = if last.len() == 1 {
            last[0]
        } else {
            let last_values: Vec<ObjectiveVector> =
                last.iter().map(|&i| values[i].clone()).collect();
            let r = ObjectiveVector::new(vec![-1; last_values[0].len()]);
            let argmin = min_contributors(&last_values, &r)?;
            last[*argmin.choose(rng).expect("non-empty front")]
        };
        let removed = pool.swap_remove(victim);
        self.coverage.remove(front, &removed.value);
        Ok(())
    }

    /// Keeps whole fronts of the `2 mu` pool while they fit and fills the
    /// rest of the population from the boundary front by niching.
    fn nsga3_select<R: Rng + ?Sized>(
        &mut self,
        children: Vec<Individual>,
        rng: &mut R,
    ) -> Result<()> {
        let Population::Fixed(pop) = &mut self.population else {
            unreachable!("NSGA-III runs on a fixed population")
        };
        let niching = self.niching.as_mut().expect("NSGA-III state has niching");
        let front = self.instance.front();
        let mu = pop.mu();
        for c in &children {
            self.coverage.add(front, &c.value);
        }
        let mut pool: Vec<Option<Individual>> = pop
            .members()
            .iter()
            .cloned()
            .chain(children)
            .map(Some)
            .collect();
        let values: Vec<ObjectiveVector> = pool
            .iter()
            .map(|m| m.as_ref().expect("filled").value.clone())
            .collect();
        let ranks = fast_non_dominated_sort(&values)?;
        let mut keep: Vec<usize> = Vec::with_capacity(mu);
        for f in &ranks.fronts {
            if keep.len() + f.len() <= mu {
                keep.extend_from_slice(f);
                if keep.len() == mu {
                    break;
                }
            } else {
                let needed = mu - keep.len();
                let selected: Vec<&ObjectiveVector> = keep.iter().map(|&i| &values[i]).collect();
                let candidates: Vec<&ObjectiveVector> = f.iter().map(|&i| &values[i]).collect();
                let picks = niching.select(&selected, &candidates, needed, rng)?;
                keep.extend(picks.into_iter().map(|j| f[j]));
                break;
            }
        }
        let mut next = Vec::with_capacity(mu);
        for &i in &keep {
            next.push(pool[i].take().expect("each index kept once"));
        }
        for dropped in pool.into_iter().flatten() {
            self.coverage.remove(front, &dropped.value);
        }
        pop.replace(next);
        Ok(())
    }
}

fn expect_kind(state: &RunState, kind: AlgorithmKind) -> Result<()> {
    if state.algorithm.kind() == kind {
        Ok(())
    } else {
        Err(Error::usage(format!(
            "state runs {}, not {kind}",
            state.algorithm
        )))
    }
}

/// One GSEMO iteration: uniform parent, bitwise mutation, archive update.
pub fn gsemo_step<R: Rng + ?Sized>(state: &mut RunState, rng: &mut R) -> Result<()> {
    expect_kind(state, AlgorithmKind::Gsemo)?;
    state.step(rng)
}

/// One SEMO iteration: as GSEMO with one-bit mutation.
pub fn semo_step<R: Rng + ?Sized>(state: &mut RunState, rng: &mut R) -> Result<()> {
    expect_kind(state, AlgorithmKind::Semo)?;
    state.step(rng)
}

/// One steady-state SMS-EMOA iteration.
pub fn smsemoa_step<R: Rng + ?Sized>(state: &mut RunState, rng: &mut R) -> Result<()> {
    expect_kind(state, AlgorithmKind::Smsemoa)?;
    state.step(rng)
}

/// One NSGA-III generation of `mu` offspring.
pub fn nsga3_generation<R: Rng + ?Sized>(state: &mut RunState, rng: &mut R) -> Result<()> {
    expect_kind(state, AlgorithmKind::Nsga3)?;
    state.step(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::BenchmarkSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::{HashMap, HashSet};

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn ov<const N: usize>(v: [i64; N]) -> ObjectiveVector {
        v.into()
    }

    fn inst(spec: BenchmarkSpec) -> Arc<Instance> {
        Arc::new(Instance::new(spec).unwrap())
    }

    fn value_set(state: &RunState) -> HashSet<ObjectiveVector> {
        state.values().cloned().collect()
    }

    #[test]
    fn gsemo_forced_offspring_accepted() {
        let i = inst(BenchmarkSpec::omm(4, 1).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = RunState::from_genomes(Algorithm::Gsemo, i, vec![bs("1111")]).unwrap();
        s.offer(vec![bs("1110")], &mut rng).unwrap();
        assert_eq!(value_set(&s), HashSet::from([ov([0, 4]), ov([1, 3])]));
        assert_eq!(s.evaluations(), 2);
    }

    #[test]
    fn dominated_offspring_still_costs_an_evaluation() {
        let i = inst(BenchmarkSpec::lotz(4, 1).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = RunState::from_genomes(Algorithm::Gsemo, i, vec![bs("1100")]).unwrap();
        // (TZ, LO) = (2, 2) strictly dominates (0, 0)
        s.offer(vec![bs("0101")], &mut rng).unwrap();
        assert_eq!(value_set(&s), HashSet::from([ov([2, 2])]));
        assert_eq!(s.evaluations(), 2);
    }

    #[test]
    fn equal_value_replaces_entry() {
        let i = inst(BenchmarkSpec::omm(4, 1).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = RunState::from_genomes(Algorithm::Gsemo, i, vec![bs("1100")]).unwrap();
        s.offer(vec![bs("0011")], &mut rng).unwrap();
        assert_eq!(s.members().len(), 1);
        assert_eq!(s.members()[0].genome, bs("0011"));
    }

    #[test]
    fn semo_moves_exactly_one_bit() {
        let i = inst(BenchmarkSpec::omm(6, 1).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut s = RunState::initialize(Algorithm::Semo, i, &mut rng).unwrap();
        for _ in 0..200 {
            let before: Vec<BitString> = s.members().iter().map(|m| m.genome.clone()).collect();
            semo_step(&mut s, &mut rng).unwrap();
            for m in s.members() {
                assert!(before
                    .iter()
                    .any(|b| b == &m.genome || b.hamming_distance(&m.genome) == 1));
            }
        }
    }

    #[test]
    fn semo_on_omm_n2_reaches_each_extreme_half_the_time() {
        let i = inst(BenchmarkSpec::omm(2, 1).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut counts: HashMap<ObjectiveVector, usize> = HashMap::new();
        let trials = 20_000;
        for _ in 0..trials {
            let mut s =
                RunState::from_genomes(Algorithm::Semo, Arc::clone(&i), vec![bs("10")]).unwrap();
            s.step(&mut rng).unwrap();
            let new: Vec<_> = value_set(&s)
                .into_iter()
                .filter(|v| v != &ov([1, 1]))
                .collect();
            assert_eq!(new.len(), 1);
            *counts.entry(new[0].clone()).or_default() += 1;
        }
        let sd = (trials as f64 * 0.25).sqrt();
        for v in [ov([0, 2]), ov([2, 0])] {
            assert!((counts[&v] as f64 - trials as f64 / 2.0).abs() < 4.0 * sd);
        }
    }

    #[test]
    fn step_function_checks_algorithm() {
        let i = inst(BenchmarkSpec::omm(4, 1).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = RunState::initialize(Algorithm::Gsemo, i, &mut rng).unwrap();
        assert!(semo_step(&mut s, &mut rng).is_err());
        assert!(gsemo_step(&mut s, &mut rng).is_ok());
    }

    #[test]
    fn smsemoa_removes_each_of_three_equal_contributors() {
        let i = inst(BenchmarkSpec::omm(2, 1).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut counts: HashMap<ObjectiveVector, usize> = HashMap::new();
        let trials = 30_000;
        for _ in 0..trials {
            let mut s = RunState::from_genomes(
                Algorithm::SmsEmoa { mu: 2 },
                Arc::clone(&i),
                vec![bs("00"), bs("11")],
            )
            .unwrap();
            s.offer(vec![bs("10")], &mut rng).unwrap();
            let kept = value_set(&s);
            assert_eq!(kept.len(), 2);
            let gone = [ov([2, 0]), ov([0, 2]), ov([1, 1])]
                .into_iter()
                .find(|v| !kept.contains(v))
                .unwrap();
            *counts.entry(gone).or_default() += 1;
        }
        let p = 1.0 / 3.0;
        let sd = (trials as f64 * p * (1.0 - p)).sqrt();
        assert_eq!(counts.len(), 3);
        for c in counts.values() {
            assert!((*c as f64 - trials as f64 * p).abs() < 4.0 * sd);
        }
    }

    #[test]
    fn smsemoa_duplicate_offspring_keeps_value_set() {
        let i = inst(BenchmarkSpec::omm(4, 1).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = RunState::from_genomes(
            Algorithm::SmsEmoa { mu: 3 },
            i,
            vec![bs("0000"), bs("1100"), bs("1111")],
        )
        .unwrap();
        let before = value_set(&s);
        s.offer(vec![bs("0110")], &mut rng).unwrap();
        assert_eq!(value_set(&s), before);
        assert_eq!(s.members().len(), 3);
    }

    #[test]
    fn smsemoa_dominated_offspring_is_removed() {
        let i = inst(BenchmarkSpec::lotz(4, 1).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = RunState::from_genomes(
            Algorithm::SmsEmoa { mu: 2 },
            i,
            vec![bs("1100"), bs("1110")],
        )
        .unwrap();
        let before = value_set(&s);
        s.offer(vec![bs("0101")], &mut rng).unwrap();
        assert_eq!(value_set(&s), before);
    }

    #[test]
    fn nsga3_needs_matching_reference_points() {
        let spec = BenchmarkSpec::omm(4, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let bare = inst(spec);
        assert!(RunState::initialize(Algorithm::Nsga3 { mu: 5, p: 12 }, bare, &mut rng).is_err());
        let with = Arc::new(
            Instance::new(spec)
                .unwrap()
                .with_reference_points(12)
                .unwrap(),
        );
        assert!(RunState::initialize(
            Algorithm::Nsga3 { mu: 5, p: 11 },
            Arc::clone(&with),
            &mut rng
        )
        .is_err());
        assert!(RunState::initialize(Algorithm::Nsga3 { mu: 5, p: 12 }, with, &mut rng).is_ok());
    }

    #[test]
    fn nsga3_single_member_keeps_better_of_parent_and_child() {
        let spec = BenchmarkSpec::lotz(4, 1).unwrap();
        let i = Arc::new(
            Instance::new(spec)
                .unwrap()
                .with_reference_points(8)
                .unwrap(),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut s =
            RunState::from_genomes(Algorithm::Nsga3 { mu: 1, p: 8 }, i, vec![bs("0101")]).unwrap();
        s.offer(vec![bs("1100")], &mut rng).unwrap();
        assert_eq!(s.members()[0].genome, bs("1100"));
        assert_eq!(s.evaluations(), 2);
    }

    #[test]
    fn nsga3_keeps_distinct_nondominated_values() {
        // Pool of 2 mu mutually incomparable OMM values: every distinct value
        // must survive when there are at most mu of them.
        let spec = BenchmarkSpec::omm(4, 1).unwrap();
        let i = Arc::new(
            Instance::new(spec)
                .unwrap()
                .with_reference_points(12)
                .unwrap(),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let mut s = RunState::from_genomes(
                Algorithm::Nsga3 { mu: 5, p: 12 },
                Arc::clone(&i),
                vec![bs("0000"), bs("1000"), bs("1100"), bs("1100"), bs("1100")],
            )
            .unwrap();
            s.offer(
                vec![bs("1110"), bs("1111"), bs("0000"), bs("1000"), bs("0110")],
                &mut rng,
            )
            .unwrap();
            assert_eq!(value_set(&s).len(), 5);
            assert!(s.coverage().is_covered());
        }
    }

    #[test]
    fn gsemo_never_loses_pareto_values() {
        let i = inst(BenchmarkSpec::cocz(16, 2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut s = RunState::initialize(Algorithm::Gsemo, Arc::clone(&i), &mut rng).unwrap();
        let mut seen: HashSet<ObjectiveVector> = HashSet::new();
        for _ in 0..20_000 {
            s.step(&mut rng).unwrap();
            let now = value_set(&s);
            assert!(seen.iter().all(|v| now.contains(v)));
            seen.extend(now.into_iter().filter(|v| i.front().contains(v)));
        }
    }

    #[test]
    fn coverage_counter_matches_population() {
        let spec = BenchmarkSpec::ojzj(8, 2, 2).unwrap();
        let i = inst(spec);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut s =
            RunState::initialize(Algorithm::SmsEmoa { mu: 9 }, Arc::clone(&i), &mut rng).unwrap();
        for _ in 0..5_000 {
            s.step(&mut rng).unwrap();
            let on_front = value_set(&s)
                .into_iter()
                .filter(|v| i.front().contains(v))
                .count();
            assert_eq!(s.coverage().covered_count(), on_front);
        }
    }

    #[test]
    fn milestones_precede_coverage() {
        let i = inst(BenchmarkSpec::ojzj(8, 2, 2).unwrap());
        for seed in 0..20 {
            let r = super::super::run_trial(Algorithm::Gsemo, &i, 10_000_000, seed).unwrap();
            assert!(r.covered);
            let t = r.evaluations_to_cover.unwrap();
            assert!(r.cliffs_eval.unwrap() <= r.corners_eval.unwrap());
            assert!(r.corners_eval.unwrap() <= t);
        }
    }
}
