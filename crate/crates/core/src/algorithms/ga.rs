use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::problems::{improves, Problem};
use crate::rng::RandomStream;

use super::{check_genome_len, Evaluator, Individual, Population, RunOutcome};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaConfig {
    pub budget: u64,
    /// Per-bit mutation rate applied to each offspring; 0 disables mutation.
    pub mutation_rate: f64,
}

/// Each position taken from `first` or `second` with probability 1/2.
pub fn uniform_crossover(
    first: &BitString,
    second: &BitString,
    rng: &mut RandomStream,
) -> Result<BitString> {
    check_genome_len(second, first.len())?;
    let (a, b) = (first.as_slice(), second.as_slice());
    let mut bits = Vec::with_capacity(a.len());
    let mut w = 0u64;
    for i in 0..a.len() {
        if i % 64 == 0 {
            w = rng.word();
        }
        bits.push(if (w >> (i % 64)) & 1 == 1 { b[i] } else { a[i] });
    }
    Ok(BitString::from_bits(bits))
}

/// Deterministic crowding replacement: the offspring competes with the
/// Hamming-closer of its two parents (ties go to `first`) and replaces it
/// only if strictly fitter. Returns the replaced slot.
pub fn crowding_replace(
    pop: &mut Population,
    first: usize,
    second: usize,
    offspring: Individual,
) -> Result<Option<usize>> {
    let d1 = offspring.genome.hamming(&pop.get(first).genome)?;
    let d2 = offspring.genome.hamming(&pop.get(second).genome)?;
    let rival = if d2 < d1 { second } else { first };
    if improves(offspring.fitness, pop.get(rival).fitness) {
        pop.replace(rival, offspring);
        Ok(Some(rival))
    } else {
        Ok(None)
    }
}

/// (mu+1) GA: two distinct parents chosen uniformly, one offspring by
/// uniform crossover (plus optional bit-flip mutation), deterministic
/// crowding replacement.
pub fn mu_plus_one_dc_ga_run<P: Problem + ?Sized>(
    problem: &P,
    init: Vec<BitString>,
    cfg: &GaConfig,
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
    if !(0.0..=1.0).contains(&cfg.mutation_rate) {
        return Err(Error::InvalidProbability(cfg.mutation_rate));
    }
    let len = problem.genome_len();
    for g in &init {
        check_genome_len(g, len)?;
    }
    let mut eval = Evaluator::new(problem, cfg.budget);
    let Some(mut pop) = Population::evaluate(init, &mut eval) else {
        return Ok(eval.outcome());
    };
    while !eval.done() {
        let first = rng.draw_index(mu)?;
        let second = rng.draw_index_excluding(mu, first)?;
        let mut child = uniform_crossover(&pop.get(first).genome, &pop.get(second).genome, rng)?;
        for i in rng.bernoulli_positions(len, cfg.mutation_rate)? {
            child.flip(i)?;
        }
        let fitness = eval.evaluate(&child);
        crowding_replace(
            &mut pop,
            first,
            second,
            Individual {
                genome: child,
                fitness,
            },
        )?;
    }
    Ok(eval.outcome())
}
