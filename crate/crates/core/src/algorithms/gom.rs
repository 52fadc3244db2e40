use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::fos::Fos;
use crate::problems::{improves, Problem};
use crate::rng::RandomStream;

use super::{
    check_genome_len, mutate_mask_in_place, Evaluator, Individual, Population, RunOutcome,
};

/// One offspring evaluation inside a GOM call.
#[derive(Clone, Debug, PartialEq)]
pub struct GomStep {
    pub subset: usize,
    pub donor: usize,
    pub offspring: BitString,
    pub fitness: f64,
    pub accepted: bool,
}

/// The choices a GOM call makes: traversal order, donors and (optional)
/// local mutation. [`RandomMixing`] is the stochastic implementation;
/// tests script these choices to replay fixed traces.
pub trait MixingSource {
    /// Order in which the `n` FOS subsets are visited.
    fn traversal(&mut self, n: usize) -> Vec<usize>;
    /// Donor slot in a population of `pop_len`, never `receiver`.
    fn donor(&mut self, pop_len: usize, receiver: usize) -> usize;
    /// Mutation applied to the offspring on the mask bits, before evaluation.
    fn mutate(&mut self, _offspring: &mut BitString, _mask: &[usize]) {}
    fn observe(&mut self, _step: &GomStep) {}
}

/// Fresh uniformly random traversal per call, donors uniform over the other
/// slots and redrawn per subset, optional local mutation on the mask.
pub struct RandomMixing<'r> {
    rng: &'r mut RandomStream,
    mutation_rate: Option<f64>,
}

impl<'r> RandomMixing<'r> {
    pub fn new(rng: &'r mut RandomStream, mutation_rate: Option<f64>) -> Result<Self> {
        if let Some(p) = mutation_rate {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
        }
        Ok(Self { rng, mutation_rate })
    }
}

impl MixingSource for RandomMixing<'_> {
    fn traversal(&mut self, n: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..n).collect();
        self.rng.shuffle(&mut order);
        order
    }

    fn donor(&mut self, pop_len: usize, receiver: usize) -> usize {
        self.rng
            .draw_index_excluding(pop_len, receiver)
            .expect("population size checked by gom")
    }

    fn mutate(&mut self, offspring: &mut BitString, mask: &[usize]) {
        if let Some(rate) = self.mutation_rate {
            mutate_mask_in_place(offspring, mask, rate, self.rng).expect("rate and mask validated");
        }
    }
}

/// Gene-pool optimal mixing of the individual in `slot`.
///
/// For each FOS subset, in the order given by `source`: copy the donor's
/// bits on the subset into the working individual, optionally mutate the
/// subset, evaluate, and keep the offspring only if it is strictly better.
/// Consumes one evaluation per subset, stopping early only if `eval` is
/// done. `pop` is not modified; the caller writes the result back.
pub fn gom_with<P, S>(
    slot: usize,
    pop: &Population,
    fos: &Fos,
    eval: &mut Evaluator<'_, P>,
    source: &mut S,
) -> Result<Individual>
where
    P: Problem + ?Sized,
    S: MixingSource + ?Sized,
{
    if pop.len() < 2 {
        return Err(Error::PopulationTooSmall {
            needed: 2,
            have: pop.len(),
        });
    }
    if slot >= pop.len() {
        return Err(Error::IndexOutOfRange {
            index: slot,
            len: pop.len(),
        });
    }
    let mut working = pop.get(slot).clone();
    check_genome_len(&working.genome, fos.genome_length())?;

    for subset in source.traversal(fos.len()) {
        if eval.done() {
            break;
        }
        let mask = &fos.subsets()[subset];
        let donor = source.donor(pop.len(), slot);
        let donor_bits = pop.get(donor).genome.as_slice();
        let mut bits = working.genome.as_slice().to_vec();
        for &i in mask {
            bits[i] = donor_bits[i];
        }
        let mut offspring = BitString::from_bits(bits);
        source.mutate(&mut offspring, mask);
        let fitness = eval.evaluate(&offspring);
        let accepted = improves(fitness, working.fitness);
        source.observe(&GomStep {
            subset,
            donor,
            offspring: offspring.clone(),
            fitness,
            accepted,
        });
        if accepted {
            working = Individual {
                genome: offspring,
                fitness,
            };
        }
    }
    Ok(working)
}

/// [`gom_with`] driven by a random stream; `mutation_rate` enables local
/// mutation on each mask.
pub fn gom<P: Problem + ?Sized>(
    slot: usize,
    pop: &Population,
    fos: &Fos,
    eval: &mut Evaluator<'_, P>,
    rng: &mut RandomStream,
    mutation_rate: Option<f64>,
) -> Result<Individual> {
    let mut source = RandomMixing::new(rng, mutation_rate)?;
    gom_with(slot, pop, fos, eval, &mut source)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GomeaConfig {
    pub budget: u64,
    /// Local mutation rate on each mask; `None` disables mutation.
    pub mutation_rate: Option<f64>,
}

/// Runs GOMEA from the given initial genomes.
///
/// The initial population is evaluated once (one evaluation per member);
/// afterwards the loop picks a slot uniformly, applies GOM to it and writes
/// the result back, until the optimum is evaluated or the budget is spent.
pub fn gomea_run<P: Problem + ?Sized>(
    problem: &P,
    fos: &Fos,
    init: Vec<BitString>,
    cfg: &GomeaConfig,
    rng: &mut RandomStream,
) -> Result<RunOutcome> {
    let mu = init.len();
    if mu < 2 {
        return Err(Error::PopulationTooSmall {
            needed: 2,
            have: mu,
        });
    }
    if cfg.budget < mu as u64 {
        return Err(Error::BudgetTooSmall {
            budget: cfg.budget,
            needed: mu as u64,
        });
    }
    let len = problem.genome_len();
    if fos.genome_length() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            actual: fos.genome_length(),
        });
    }
    for g in &init {
        check_genome_len(g, len)?;
    }
    // Validates the rate before any evaluation is spent.
    RandomMixing::new(rng, cfg.mutation_rate)?;

    let mut eval = Evaluator::new(problem, cfg.budget);
    let Some(mut pop) = Population::evaluate(init, &mut eval) else {
        return Ok(eval.outcome());
    };
    while !eval.done() {
        let slot = rng.draw_index(mu)?;
        let updated = gom(slot, &pop, fos, &mut eval, rng, cfg.mutation_rate)?;
        pop.replace(slot, updated);
    }
    Ok(eval.outcome())
}
