//! Replicated experiments: initial populations, budgets, parallel execution
//! with a deterministic join, aggregation and CSV output.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::algorithms::{
    gomea_run, mu_plus_one_dc_ga_run, one_plus_one_ea_run, random_genome, GaConfig, GomeaConfig,
    RunOutcome,
};
use crate::bits::BitString;
use crate::bounds::{
    ea_upper_bound, gomea_bound, lemma1_population, lemma2_population, thm3_bound,
};
use crate::error::{Error, Result};
use crate::fos::{truthful_mp_fos, Fos};
use crate::problems::{floor_tolerant, ProblemInstance, Shape};
use crate::rng::{RandomStream, RNG_ID};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Gomea,
    GomeaMut,
    Ea,
    Ga,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Gomea => "gomea",
            Algorithm::GomeaMut => "gomea-mut",
            Algorithm::Ea => "ea",
            Algorithm::Ga => "ga",
        }
    }

    fn uses_population(self) -> bool {
        self != Algorithm::Ea
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gomea" => Ok(Algorithm::Gomea),
            "gomea-mut" => Ok(Algorithm::GomeaMut),
            "ea" => Ok(Algorithm::Ea),
            "ga" => Ok(Algorithm::Ga),
            other => Err(Error::Parse(format!("unknown algorithm {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InitKind {
    Uniform,
    WorstStandard,
    WorstGeneralized,
}

impl InitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InitKind::Uniform => "uniform",
            InitKind::WorstStandard => "worst-standard",
            InitKind::WorstGeneralized => "worst-generalized",
        }
    }
}

impl fmt::Display for InitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(InitKind::Uniform),
            "worst-standard" => Ok(InitKind::WorstStandard),
            "worst-generalized" => Ok(InitKind::WorstGeneralized),
            other => Err(Error::Parse(format!("unknown init {other:?}"))),
        }
    }
}

/// Population sizing: explicit size, or the constant `c` of
/// `mu = c m / p*` (which is `c m 2^k` on the standard trap).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Sizing {
    Mu(usize),
    C(f64),
}

/// Named budget rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BudgetPreset {
    /// `2 c m^3 2^k`, x10 for the GA.
    Thm2,
    /// `2 c m^3 k^2`, x10 for the GA.
    S42,
    /// `2 (c/p*) m^3`; the GA gets `20 (c/p*) m^3`.
    S632,
}

impl FromStr for BudgetPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm2" => Ok(BudgetPreset::Thm2),
            "s42" => Ok(BudgetPreset::S42),
            "s632" => Ok(BudgetPreset::S632),
            other => Err(Error::Parse(format!("unknown budget preset {other:?}"))),
        }
    }
}

impl BudgetPreset {
    pub fn as_str(self) -> &'static str {
        match self {
            BudgetPreset::Thm2 => "thm2",
            BudgetPreset::S42 => "s42",
            BudgetPreset::S632 => "s632",
        }
    }

    pub fn budget(self, inst: &ProblemInstance, c: f64, alg: Algorithm) -> Result<u64> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParams(format!("c must be positive, got {c}")));
        }
        let m3 = (inst.m() as f64).powi(3);
        let k = inst.k();
        let (base, ga_factor) = match self {
            BudgetPreset::Thm2 => (2.0 * c * m3 * 2f64.powi(k as i32), 10.0),
            BudgetPreset::S42 => (2.0 * c * m3 * (k * k) as f64, 10.0),
            BudgetPreset::S632 => (2.0 * c / inst.p_star() * m3, 10.0),
        };
        let factor = if alg == Algorithm::Ga { ga_factor } else { 1.0 };
        Ok(floor_tolerant(base * factor) as u64)
    }
}

/// Success budget by shape: `2 c m^3 k^2` on the standard trap and
/// `2 (c/p*) m^3` on the generalized and tailed traps. The GA gets ten times
/// as much (`20 c m^3 k^2` and `20 (c/p*) m^3`).
pub fn success_budget(inst: &ProblemInstance, c: f64, alg: Algorithm) -> Result<u64> {
    let preset = match inst.shape() {
        Shape::Standard => BudgetPreset::S42,
        Shape::Generalized | Shape::Tailed => BudgetPreset::S632,
    };
    preset.budget(inst, c, alg)
}

/// `mu` genomes with independent fair bits.
pub fn uniform_population(mu: usize, len: usize, rng: &mut RandomStream) -> Vec<BitString> {
    (0..mu).map(|_| random_genome(len, rng)).collect()
}

/// All-zero population in which, for every block independently, one
/// uniformly chosen member gets that block set to all ones.
pub fn worst_case_standard(
    mu: usize,
    inst: &ProblemInstance,
    rng: &mut RandomStream,
) -> Result<Vec<BitString>> {
    if inst.shape() != Shape::Standard {
        return Err(Error::InvalidExperiment(
            "worst-standard init requires the standard shape".into(),
        ));
    }
    let k = inst.k();
    worst_case_with(mu, inst, rng, |_, _| Ok((0..k).collect()))
}

/// All-zero population in which, for every block independently, one
/// uniformly chosen member gets exactly `z + 1` ones at random positions in
/// that block.
pub fn worst_case_generalized(
    mu: usize,
    inst: &ProblemInstance,
    rng: &mut RandomStream,
) -> Result<Vec<BitString>> {
    if inst.shape() == Shape::Standard {
        return Err(Error::InvalidExperiment(
            "worst-generalized init requires a generalized or tailed shape".into(),
        ));
    }
    let (k, ones) = (inst.k(), inst.params().z() + 1);
    worst_case_with(mu, inst, rng, |rng, _| {
        // partial Fisher-Yates: first `ones` entries are a uniform subset
        let mut pos: Vec<usize> = (0..k).collect();
        for i in 0..ones {
            let j = i + rng.draw_index(k - i)?;
            pos.swap(i, j);
        }
        pos.truncate(ones);
        Ok(pos)
    })
}

fn worst_case_with<F>(
    mu: usize,
    inst: &ProblemInstance,
    rng: &mut RandomStream,
    mut positions: F,
) -> Result<Vec<BitString>>
where
    F: FnMut(&mut RandomStream, usize) -> Result<Vec<usize>>,
{
    if mu == 0 {
        return Err(Error::PopulationTooSmall { needed: 1, have: 0 });
    }
    let k = inst.k();
    let mut pop = vec![BitString::zeros(inst.len()); mu];
    for block in 0..inst.m() {
        let who = rng.draw_index(mu)?;
        for p in positions(rng, block)? {
            pop[who].set(block * k + p, true)?;
        }
    }
    Ok(pop)
}

/// Fraction of `samples` uniform populations of size `mu` in which some
/// block has no member in the optimal region.
pub fn missing_region_fraction(
    inst: &ProblemInstance,
    mu: usize,
    samples: usize,
    rng: &mut RandomStream,
) -> Result<f64> {
    let mut failures = 0usize;
    for _ in 0..samples {
        let pop = uniform_population(mu, inst.len(), rng);
        let mut covered = vec![false; inst.m()];
        for g in &pop {
            for (c, r) in covered.iter_mut().zip(inst.region_membership(g)?) {
                *c |= r;
            }
        }
        if covered.iter().any(|&c| !c) {
            failures += 1;
        }
    }
    Ok(failures as f64 / samples as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub instance: ProblemInstance,
    pub algorithm: Algorithm,
    pub sizing: Sizing,
    pub init: InitKind,
    pub budget: u64,
    pub replications: usize,
    pub base_seed: u64,
    /// Overrides the algorithm's default mutation rate: `1/k` (local) for
    /// gomea-mut, `1/(mk)` for the EA, 0 for the GA. Not allowed for gomea.
    pub mutation_rate: Option<f64>,
    /// Defaults to the truthful marginal-product FOS.
    pub fos: Option<Fos>,
}

impl ExperimentSpec {
    /// Population size; 1 for the EA.
    pub fn mu(&self) -> Result<usize> {
        if !self.algorithm.uses_population() {
            return Ok(1);
        }
        let inst = &self.instance;
        match self.sizing {
            Sizing::Mu(mu) => Ok(mu),
            Sizing::C(c) => match inst.shape() {
                Shape::Standard => lemma1_population(inst.m(), inst.k(), c),
                _ => lemma2_population(inst.m(), inst.p_star(), c),
            },
        }
    }

    /// The sizing constant `c`, derived from `mu` when given explicitly.
    pub fn c(&self) -> f64 {
        match self.sizing {
            Sizing::C(c) => c,
            Sizing::Mu(mu) => mu as f64 * self.instance.p_star() / self.instance.m() as f64,
        }
    }

    pub fn effective_mutation_rate(&self) -> Option<f64> {
        let (m, k) = (self.instance.m() as f64, self.instance.k() as f64);
        match self.algorithm {
            Algorithm::Gomea => None,
            Algorithm::GomeaMut => Some(self.mutation_rate.unwrap_or(1.0 / k)),
            Algorithm::Ea => Some(self.mutation_rate.unwrap_or(1.0 / (m * k))),
            Algorithm::Ga => Some(self.mutation_rate.unwrap_or(0.0)),
        }
    }

    pub fn effective_fos(&self) -> Result<Fos> {
        match &self.fos {
            Some(f) => Ok(f.clone()),
            None => truthful_mp_fos(self.instance.m(), self.instance.k()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidExperiment(msg));
        if self.replications == 0 {
            return bad("replications must be at least 1".into());
        }
        let shape = self.instance.shape();
        match (self.init, shape) {
            (InitKind::WorstStandard, Shape::Generalized | Shape::Tailed) => {
                return bad("worst-standard init requires the standard shape".into())
            }
            (InitKind::WorstGeneralized, Shape::Standard) => {
                return bad("worst-generalized init requires a generalized or tailed shape".into())
            }
            _ => {}
        }
        if self.algorithm == Algorithm::Ea && self.init != InitKind::Uniform {
            return bad("the (1+1) EA starts from a uniform genome; use --init uniform".into());
        }
        if self.algorithm == Algorithm::Gomea && self.mutation_rate.is_some() {
            return bad("gomea has no mutation; use gomea-mut to set a rate".into());
        }
        if let Sizing::C(c) = self.sizing {
            if !(c > 0.0 && c.is_finite()) {
                return bad(format!("c must be positive, got {c}"));
            }
        }
        let mu = self.mu()?;
        if self.algorithm.uses_population() && mu < 2 {
            return Err(Error::PopulationTooSmall {
                needed: 2,
                have: mu,
            });
        }
        if self.budget < mu as u64 || self.budget == 0 {
            return Err(Error::BudgetTooSmall {
                budget: self.budget,
                needed: (mu as u64).max(1),
            });
        }
        if let Some(rate) = self.effective_mutation_rate() {
            let ok = match self.algorithm {
                Algorithm::Ea => rate > 0.0 && rate < 1.0,
                _ => (0.0..=1.0).contains(&rate),
            };
            if !ok {
                return Err(Error::InvalidProbability(rate));
            }
        }
        let fos = self.effective_fos()?;
        if fos.genome_length() != self.instance.len() {
            return Err(Error::LengthMismatch {
                expected: self.instance.len(),
                actual: fos.genome_length(),
            });
        }
        Ok(())
    }

    /// Seed of replication `rep`.
    pub fn replication_seed(&self, rep: usize) -> u64 {
        self.base_seed ^ rep as u64
    }

    /// Bound attached to summaries: the GOMEA bound on the standard trap,
    /// the full level-climbing bound on generalized and tailed traps (for
    /// population algorithms), and the EA bound for the EA.
    pub fn bound_values(&self) -> Result<(f64, Option<f64>)> {
        let inst = &self.instance;
        if self.algorithm == Algorithm::Ea {
            return Ok((ea_upper_bound(inst.m(), inst.k())?, None));
        }
        match inst.shape() {
            Shape::Standard => Ok((gomea_bound(inst.m(), inst.k(), self.c())?, None)),
            shape => {
                if inst.m() < 2 {
                    return Ok((f64::NAN, None));
                }
                let b = thm3_bound(inst.m(), inst.params(), shape, self.c())?;
                Ok((b.full, Some(b.dominant)))
            }
        }
    }

    /// `key=value` echo of everything needed to reproduce the experiment.
    pub fn echo(&self) -> Result<Vec<(&'static str, String)>> {
        let mut kv = self.instance.to_kv();
        kv.push(("algorithm", self.algorithm.to_string()));
        kv.push(("init", self.init.to_string()));
        kv.push(("mu", self.mu()?.to_string()));
        kv.push(("c", self.c().to_string()));
        kv.push(("budget", self.budget.to_string()));
        kv.push(("replications", self.replications.to_string()));
        kv.push(("base_seed", self.base_seed.to_string()));
        kv.push((
            "mutation_rate",
            self.effective_mutation_rate()
                .map_or_else(|| "none".to_string(), |r| r.to_string()),
        ));
        kv.push((
            "fos",
            match &self.fos {
                None => "truthful".to_string(),
                Some(f) => f
                    .subsets()
                    .iter()
                    .map(|s| s.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
                    .collect::<Vec<_>>()
                    .join("|"),
            },
        ));
        kv.push(("rng_id", RNG_ID.to_string()));
        Ok(kv)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunRecord {
    pub rep: usize,
    pub seed: u64,
    pub outcome: RunOutcome,
}

/// Aggregate over replications. Hitting-time statistics cover successful
/// runs only; `censored` counts the runs that exhausted the budget.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub replications: usize,
    pub successes: usize,
    pub censored: usize,
    pub success_rate: f64,
    pub mean_hitting_time: Option<f64>,
    pub std_hitting_time: Option<f64>,
    pub total_evaluations: u64,
    pub bound_value: f64,
    pub dominant_bound: Option<f64>,
}

impl SummaryRow {
    /// Statistics are computed in exact integer arithmetic, so the result
    /// does not depend on the order of `records`.
    pub fn from_records(
        records: &[RunRecord],
        bound_value: f64,
        dominant_bound: Option<f64>,
    ) -> Self {
        let times: Vec<u128> = records
            .iter()
            .filter_map(|r| r.outcome.hitting_time)
            .map(u128::from)
            .collect();
        let n = times.len() as u128;
        let sum: u128 = times.iter().sum();
        let sum_sq: u128 = times.iter().map(|t| t * t).sum();
        let mean = (n > 0).then(|| sum as f64 / n as f64);
        let std = match n {
            0 => None,
            1 => Some(0.0),
            _ => {
                let num = n * sum_sq - sum * sum;
                Some((num as f64 / (n * (n - 1)) as f64).sqrt())
            }
        };
        let replications = records.len();
        let successes = times.len();
        Self {
            replications,
            successes,
            censored: replications - successes,
            success_rate: successes as f64 / replications as f64,
            mean_hitting_time: mean,
            std_hitting_time: std,
            total_evaluations: records.iter().map(|r| r.outcome.evaluations_used).sum(),
            bound_value,
            dominant_bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub records: Vec<RunRecord>,
    pub summary: SummaryRow,
}

/// Executes one replication.
pub fn run_replication(spec: &ExperimentSpec, rep: usize) -> Result<RunRecord> {
    let seed = spec.replication_seed(rep);
    let mut rng = RandomStream::new(seed);
    let inst = &spec.instance;
    let mu = spec.mu()?;
    let outcome = match spec.algorithm {
        Algorithm::Ea => {
            let rate = spec.effective_mutation_rate().expect("ea has a rate");
            one_plus_one_ea_run(inst, rate, spec.budget, &mut rng)?
        }
        alg => {
            let init = match spec.init {
                InitKind::Uniform => uniform_population(mu, inst.len(), &mut rng),
                InitKind::WorstStandard => worst_case_standard(mu, inst, &mut rng)?,
                InitKind::WorstGeneralized => worst_case_generalized(mu, inst, &mut rng)?,
            };
            if alg == Algorithm::Ga {
                let cfg = GaConfig {
                    budget: spec.budget,
                    mutation_rate: spec.effective_mutation_rate().unwrap_or(0.0),
                };
                mu_plus_one_dc_ga_run(inst, init, &cfg, &mut rng)?
            } else {
                let cfg = GomeaConfig {
                    budget: spec.budget,
                    mutation_rate: spec.effective_mutation_rate(),
                };
                gomea_run(inst, &spec.effective_fos()?, init, &cfg, &mut rng)?
            }
        }
    };
    Ok(RunRecord { rep, seed, outcome })
}

/// Runs all replications on the current rayon pool.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let records = (0..spec.replications)
        .into_par_iter()
        .map(|rep| run_replication(spec, rep))
        .collect::<Result<Vec<_>>>()?;
    let (bound, dominant) = spec.bound_values()?;
    let summary = SummaryRow::from_records(&records, bound, dominant);
    Ok(ExperimentResult {
        spec: spec.clone(),
        records,
        summary,
    })
}

/// Runs all replications on a dedicated pool of `threads` workers.
pub fn run_experiment_with_threads(
    spec: &ExperimentSpec,
    threads: usize,
) -> Result<ExperimentResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidExperiment(format!("thread pool: {e}")))?;
    pool.install(|| run_experiment(spec))
}

/// Formats a real with at most 12 significant digits, trailing zeros
/// removed.
pub fn fmt_real(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.11e}");
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{e}")
    }
}

fn opt_real(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

pub const RUN_COLUMNS: &str = "rep,seed,hit,hitting_time,evaluations_used";
pub const SUMMARY_COLUMNS: &str = "replications,successes,censored,success_rate,mean_hitting_time,std_hitting_time,total_evaluations,bound_value,dominant_bound";

impl SummaryRow {
    pub fn csv_fields(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.replications,
            self.successes,
            self.censored,
            fmt_real(self.success_rate),
            opt_real(self.mean_hitting_time),
            opt_real(self.std_hitting_time),
            self.total_evaluations,
            fmt_real(self.bound_value),
            opt_real(self.dominant_bound),
        )
    }
}

/// Writes the experiment as CSV: `#` header lines echoing the spec, one row
/// per replication, then the summary.
pub fn write_csv<W: Write>(result: &ExperimentResult, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "# gomea-trap run")?;
    for (k, v) in result
        .spec
        .echo()
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidInput, e))?
    {
        writeln!(out, "# {k}={v}")?;
    }
    writeln!(out, "{RUN_COLUMNS}")?;
    for r in &result.records {
        let o = &r.outcome;
        writeln!(
            out,
            "{},{},{},{},{}",
            r.rep,
            r.seed,
            u8::from(o.hit),
            o.hitting_time.map(|t| t.to_string()).unwrap_or_default(),
            o.evaluations_used
        )?;
    }
    writeln!(out, "# summary: {SUMMARY_COLUMNS}")?;
    writeln!(out, "summary,{}", result.summary.csv_fields())?;
    Ok(())
}
