//! Search algorithms: gene-pool optimal mixing (GOMEA), the (1+1) EA and a
//! (mu+1) GA with deterministic crowding.
//!
//! Runtime is measured in full fitness evaluations. Every algorithm runs
//! until the global optimum has been evaluated or the evaluation budget is
//! spent, whichever comes first.

mod ea;
mod ga;
mod gom;

pub use ea::{ea_accepts, one_plus_one_ea_run};
pub use ga::{crowding_replace, mu_plus_one_dc_ga_run, uniform_crossover, GaConfig};
pub use gom::{gom, gom_with, gomea_run, GomStep, GomeaConfig, MixingSource, RandomMixing};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::problems::{EvalCounter, Problem};
use crate::rng::RandomStream;

#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub genome: BitString,
    pub fitness: f64,
}

/// Fixed-size multiset of evaluated individuals.
#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    members: Vec<Individual>,
}

impl Population {
    /// Evaluates `genomes` in order, stopping early if `eval` is done (budget
    /// spent or optimum hit). Returns `None` in that case, since the
    /// population would be incomplete.
    pub fn evaluate<P: Problem + ?Sized>(
        genomes: Vec<BitString>,
        eval: &mut Evaluator<'_, P>,
    ) -> Option<Self> {
        let mut members = Vec::with_capacity(genomes.len());
        for genome in genomes {
            if eval.done() {
                return None;
            }
            let fitness = eval.evaluate(&genome);
            members.push(Individual { genome, fitness });
        }
        Some(Self { members })
    }

    /// Builds a population from already evaluated individuals.
    pub fn from_individuals(members: Vec<Individual>) -> Result<Self> {
        if let Some(first) = members.first() {
            let len = first.genome.len();
            if let Some(bad) = members.iter().find(|i| i.genome.len() != len) {
                return Err(Error::LengthMismatch {
                    expected: len,
                    actual: bad.genome.len(),
                });
            }
        }
        Ok(Self { members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, i: usize) -> &Individual {
        &self.members[i]
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn replace(&mut self, i: usize, ind: Individual) {
        debug_assert_eq!(ind.genome.len(), self.members[i].genome.len());
        self.members[i] = ind;
    }
}

/// Result of one run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub hit: bool,
    /// Evaluation count at the first evaluation of a global optimum.
    pub hitting_time: Option<u64>,
    pub evaluations_used: u64,
}

/// Counts evaluations against a budget and records the first hit of the
/// global optimum.
pub struct Evaluator<'a, P: ?Sized> {
    problem: &'a P,
    counter: EvalCounter,
    budget: u64,
    hit: Option<u64>,
}

impl<'a, P: Problem + ?Sized> Evaluator<'a, P> {
    pub fn new(problem: &'a P, budget: u64) -> Self {
        Self {
            problem,
            counter: EvalCounter::new(),
            budget,
            hit: None,
        }
    }

    pub fn unlimited(problem: &'a P) -> Self {
        Self::new(problem, u64::MAX)
    }

    pub fn problem(&self) -> &'a P {
        self.problem
    }

    pub fn evaluate(&mut self, x: &BitString) -> f64 {
        debug_assert_eq!(x.len(), self.problem.genome_len());
        self.counter.increment();
        if self.hit.is_none() && self.problem.is_optimal(x) {
            self.hit = Some(self.counter.count());
        }
        self.problem.fitness(x)
    }

    pub fn count(&self) -> u64 {
        self.counter.count()
    }

    pub fn hit(&self) -> Option<u64> {
        self.hit
    }

    pub fn exhausted(&self) -> bool {
        self.counter.count() >= self.budget
    }

    /// No further evaluations should be spent.
    pub fn done(&self) -> bool {
        self.hit.is_some() || self.exhausted()
    }

    pub fn outcome(&self) -> RunOutcome {
        RunOutcome {
            hit: self.hit.is_some(),
            hitting_time: self.hit,
            evaluations_used: self.counter.count(),
        }
    }
}

fn check_genome_len(x: &BitString, len: usize) -> Result<()> {
    if x.len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            actual: x.len(),
        });
    }
    Ok(())
}

fn check_mask(mask: &[usize], len: usize) -> Result<()> {
    match mask.iter().find(|&&i| i >= len) {
        Some(&index) => Err(Error::IndexOutOfRange { index, len }),
        None => Ok(()),
    }
}

/// `receiver` with the positions in `mask` taken from `donor`.
pub fn cross_with_mask(
    receiver: &BitString,
    donor: &BitString,
    mask: &[usize],
) -> Result<BitString> {
    check_genome_len(donor, receiver.len())?;
    check_mask(mask, receiver.len())?;
    let mut bits = receiver.as_slice().to_vec();
    let d = donor.as_slice();
    for &i in mask {
        bits[i] = d[i];
    }
    Ok(BitString::from_bits(bits))
}

/// Flips each bit in `mask` independently with probability `rate`.
pub fn local_mutation(
    s: &BitString,
    mask: &[usize],
    rate: f64,
    rng: &mut RandomStream,
) -> Result<BitString> {
    check_mask(mask, s.len())?;
    let mut out = s.clone();
    mutate_mask_in_place(&mut out, mask, rate, rng)?;
    Ok(out)
}

pub(crate) fn mutate_mask_in_place(
    s: &mut BitString,
    mask: &[usize],
    rate: f64,
    rng: &mut RandomStream,
) -> Result<()> {
    for j in rng.bernoulli_positions(mask.len(), rate)? {
        s.flip(mask[j])?;
    }
    Ok(())
}

/// Uniformly random genomes.
pub fn random_genome(len: usize, rng: &mut RandomStream) -> BitString {
    let mut bits = Vec::with_capacity(len);
    while bits.len() < len {
        let w = rng.word();
        let take = (len - bits.len()).min(64);
        bits.extend((0..take).map(|i| (w >> i) & 1 == 1));
    }
    BitString::from_bits(bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn cross_with_mask_examples() {
        assert_eq!(
            cross_with_mask(&bs("111011011"), &bs("000000110"), &[0, 1, 2]).unwrap(),
            bs("000011011")
        );
        assert_eq!(
            cross_with_mask(&bs("111011011"), &bs("101111001"), &[3, 4, 5]).unwrap(),
            bs("111111011")
        );
        let s = bs("101100");
        assert_eq!(cross_with_mask(&s, &bs("010011"), &[]).unwrap(), s);
    }

    #[test]
    fn cross_with_mask_errors() {
        assert!(matches!(
            cross_with_mask(&bs("101"), &bs("1010"), &[0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            cross_with_mask(&bs("101"), &bs("010"), &[3]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn local_mutation_extremes() {
        let mut r = RandomStream::new(1);
        let s = BitString::zeros(9);
        assert_eq!(local_mutation(&s, &[0, 1, 2], 0.0, &mut r).unwrap(), s);
        assert_eq!(
            local_mutation(&s, &[0, 1, 2], 1.0, &mut r).unwrap(),
            bs("111000000")
        );
        assert!(local_mutation(&s, &[0], 1.5, &mut r).is_err());
        assert!(local_mutation(&s, &[9], 0.5, &mut r).is_err());
    }

    #[test]
    fn local_mutation_mean_flips() {
        let mut r = RandomStream::new(2);
        let s = BitString::zeros(12);
        let mask = [4, 5, 6, 7];
        let k = 4.0;
        let trials = 100_000;
        let mut flips = 0usize;
        for _ in 0..trials {
            let out = local_mutation(&s, &mask, 1.0 / k, &mut r).unwrap();
            let changed = out.hamming(&s).unwrap();
            assert!((0..12)
                .filter(|i| !mask.contains(i))
                .all(|i| out.get(i) == Some(false)));
            flips += changed;
        }
        let mean = flips as f64 / trials as f64;
        let expected = mask.len() as f64 / k;
        assert!((mean - expected).abs() < 0.02 * expected, "mean {mean}");
    }

    #[test]
    fn evaluator_records_first_hit() {
        let inst = crate::problems::ProblemInstance::standard(2, 2).unwrap();
        let mut ev = Evaluator::new(&inst, 10);
        ev.evaluate(&bs("0000"));
        assert!(!ev.done());
        ev.evaluate(&bs("1111"));
        ev.evaluate(&bs("1111"));
        let o = ev.outcome();
        assert_eq!(o.hitting_time, Some(2));
        assert_eq!(o.evaluations_used, 3);
        assert!(o.hit);
    }

    #[test]
    fn random_genome_frequency() {
        let mut r = RandomStream::new(3);
        let n = 2000;
        let ones: usize = (0..n).map(|_| random_genome(100, &mut r).unitation()).sum();
        let f = ones as f64 / (n * 100) as f64;
        assert!((f - 0.5).abs() < 0.01);
    }
}
