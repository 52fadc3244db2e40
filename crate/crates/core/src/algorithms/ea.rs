use crate::error::{Error, Result};
use crate::problems::{not_worse, Problem};
use crate::rng::RandomStream;

use super::{random_genome, Evaluator, RunOutcome};

/// (1+1) EA acceptance: the offspring replaces the parent unless it is worse.
pub fn ea_accepts(offspring: f64, parent: f64) -> bool {
    not_worse(offspring, parent)
}

/// (1+1) EA with standard bit mutation at `rate` from a uniformly random
/// start. One evaluation for the initial genome, one per iteration.
pub fn one_plus_one_ea_run<P: Problem + ?Sized>(
    problem: &P,
    rate: f64,
    budget: u64,
    rng: &mut RandomStream,
) -> Result<RunOutcome> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::InvalidProbability(rate));
    }
    if budget == 0 {
        return Err(Error::BudgetTooSmall { budget, needed: 1 });
    }
    let n = problem.genome_len();
    let mut eval = Evaluator::new(problem, budget);
    let mut x = random_genome(n, rng);
    let mut fx = eval.evaluate(&x);
    while !eval.done() {
        let flips = rng.bernoulli_positions(n, rate)?;
        let mut y = x.clone();
        for i in flips {
            y.flip(i)?;
        }
        let fy = eval.evaluate(&y);
        if ea_accepts(fy, fx) {
            x = y;
            fx = fy;
        }
    }
    Ok(eval.outcome())
}
