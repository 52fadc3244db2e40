//! Command-line front end: `bound`, `run` and `sweep`.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad flags, invalid
//! parameters), 2 for runtime failures (I/O). Errors go to stderr as a
//! single `error[usage]: ...` or `error[runtime]: ...` line.

pub mod presets;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::bounds::{
    ea_drift_lower_bound, ea_upper_bound, gomea_bound, lemma1_failure, lemma1_population,
    lemma2_population, level, logistic_fraction, thm3_bound, BoundReport,
};
use crate::error::Error;
use crate::fos::Fos;
use crate::harness::{
    fmt_real, run_experiment_with_threads, write_csv, Algorithm, BudgetPreset, ExperimentSpec,
    InitKind, Sizing, SUMMARY_COLUMNS,
};
use crate::problems::{p_star, region_start_for, ProblemInstance, Shape};
use crate::rng::RNG_ID;
use presets::{BudgetRule, Preset, TrapFamily, ZRule};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error[usage]: {m}"),
            CliError::Runtime(m) => write!(f, "error[runtime]: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(
    name = "gomea-trap",
    version,
    about = "GOMEA, (1+1) EA and crowding GA on concatenated trap functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a closed-form bound and print CSV rows `formula,params,value`.
    Bound(BoundArgs),
    /// Run one replicated experiment and write per-run records plus a summary.
    Run(RunArgs),
    /// Run a preset grid of experiments, one summary row per grid point.
    Sweep(SweepArgs),
}

/// Flags shared by `bound` and `run`. Every flag can also be given in the
/// `--config` file as `name=value` (flag name without dashes); flags win.
#[derive(Debug, Clone, Default, Args)]
pub struct SharedFlags {
    /// standard | generalized | tailed (default: generalized if any of
    /// a/b/z is given, else standard)
    #[arg(long)]
    pub shape: Option<Shape>,
    /// Number of blocks
    #[arg(long)]
    pub m: Option<usize>,
    /// Block length
    #[arg(long)]
    pub k: Option<usize>,
    /// Local-optimum value
    #[arg(long)]
    pub a: Option<f64>,
    /// Global-optimum value
    #[arg(long)]
    pub b: Option<f64>,
    /// Slope breakpoint
    #[arg(long)]
    pub z: Option<usize>,
    /// gomea | gomea-mut | ea | ga
    #[arg(long)]
    pub alg: Option<Algorithm>,
    /// Population size
    #[arg(long, conflicts_with = "c")]
    pub mu: Option<usize>,
    /// Population constant: mu = c m / p* (c m 2^k on the standard trap)
    #[arg(long)]
    pub c: Option<f64>,
    /// uniform | worst-standard | worst-generalized
    #[arg(long)]
    pub init: Option<InitKind>,
    /// Evaluation budget per run
    #[arg(long, conflicts_with = "budget_preset")]
    pub budget: Option<u64>,
    /// thm2 (2cm^3 2^k) | s42 (2cm^3 k^2) | s632 (2(c/p*)m^3); the GA gets ten times each
    #[arg(long)]
    pub budget_preset: Option<BudgetPreset>,
    /// Mutation rate (local rate for gomea-mut, bitwise for ea and ga)
    #[arg(long)]
    pub rate: Option<f64>,
    /// Replications
    #[arg(long)]
    pub reps: Option<usize>,
    /// Base seed; replication i uses seed ^ i
    #[arg(long)]
    pub seed: Option<u64>,
    /// FOS file: one subset per line, comma-separated 0-based indices
    #[arg(long)]
    pub fos_file: Option<PathBuf>,
    /// Output path (default stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    pub threads: Option<usize>,
    /// key=value config file; explicit flags override it
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// ea | ea-drift | gomea | lemma1 | lemma2 | logistic | thm3 | pstar | region | level
    pub formula: String,
    #[command(flatten)]
    pub shared: SharedFlags,
    /// Non-optimal block count (ea-drift)
    #[arg(long)]
    pub s: Option<usize>,
    /// GOM steps (logistic)
    #[arg(long)]
    pub t: Option<f64>,
    /// Best block unitation (level)
    #[arg(long)]
    pub u: Option<usize>,
    /// Use p* directly instead of deriving it from trap parameters (lemma2)
    #[arg(long)]
    pub p_star: Option<f64>,
    /// Mutation-slowed logistic curve
    #[arg(long)]
    pub mutation: bool,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub shared: SharedFlags,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// fig3 | fig3e | fig4 | fig6 | fig7
    pub preset: String,
    /// Replications per grid point (default: the preset's)
    #[arg(long)]
    pub reps: Option<usize>,
    /// Base seed; grid point i uses seed ^ (i << 32)
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep only grid points with this m
    #[arg(long)]
    pub m: Option<usize>,
    /// Keep only grid points with this k
    #[arg(long)]
    pub k: Option<usize>,
    /// Keep only grid points with this c
    #[arg(long)]
    pub c: Option<f64>,
    /// Output path (default stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key=value", n + 1)))?;
        map.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(map)
}

fn fill<T: FromStr>(slot: &mut Option<T>, key: &str, value: &str) -> Result<(), CliError>
where
    T::Err: fmt::Display,
{
    if slot.is_none() {
        *slot = Some(
            value
                .parse()
                .map_err(|e| usage(format!("config {key}: {e}")))?,
        );
    }
    Ok(())
}

impl SharedFlags {
    /// Fills unset flags from the config file, if one was given.
    pub fn merge_config(&mut self) -> Result<(), CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(());
        };
        let text = fs::read_to_string(&path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_config(&parse_config(&text)?)
    }

    pub fn apply_config(&mut self, cfg: &BTreeMap<String, String>) -> Result<(), CliError> {
        for (key, v) in cfg {
            match key.as_str() {
                "shape" => fill(&mut self.shape, key, v)?,
                "m" => fill(&mut self.m, key, v)?,
                "k" => fill(&mut self.k, key, v)?,
                "a" => fill(&mut self.a, key, v)?,
                "b" => fill(&mut self.b, key, v)?,
                "z" => fill(&mut self.z, key, v)?,
                "alg" => fill(&mut self.alg, key, v)?,
                "mu" => {
                    if self.c.is_none() {
                        fill(&mut self.mu, key, v)?
                    }
                }
                "c" => {
                    if self.mu.is_none() {
                        fill(&mut self.c, key, v)?
                    }
                }
                "init" => fill(&mut self.init, key, v)?,
                "budget" => {
                    if self.budget_preset.is_none() {
                        fill(&mut self.budget, key, v)?
                    }
                }
                "budget-preset" => {
                    if self.budget.is_none() {
                        fill(&mut self.budget_preset, key, v)?
                    }
                }
                "rate" => fill(&mut self.rate, key, v)?,
                "reps" => fill(&mut self.reps, key, v)?,
                "seed" => fill(&mut self.seed, key, v)?,
                "fos-file" => fill(&mut self.fos_file, key, v)?,
                "out" => fill(&mut self.out, key, v)?,
                "threads" => fill(&mut self.threads, key, v)?,
                other => return Err(usage(format!("unknown config key {other:?}"))),
            }
        }
        if self.mu.is_some() && self.c.is_some() {
            return Err(usage("--mu and --c are mutually exclusive"));
        }
        if self.budget.is_some() && self.budget_preset.is_some() {
            return Err(usage("--budget and --budget-preset are mutually exclusive"));
        }
        Ok(())
    }

    fn shape(&self) -> Shape {
        self.shape.unwrap_or(
            if self.a.is_some() || self.b.is_some() || self.z.is_some() {
                Shape::Generalized
            } else {
                Shape::Standard
            },
        )
    }

    /// Builds the problem instance; `m` defaults to `default_m` when given.
    fn instance_with(&self, default_m: Option<usize>) -> Result<ProblemInstance, CliError> {
        let m = self
            .m
            .or(default_m)
            .ok_or_else(|| usage("--m is required"))?;
        let k = self.k.ok_or_else(|| usage("--k is required"))?;
        let mut kv = BTreeMap::new();
        kv.insert("shape".to_string(), self.shape().to_string());
        kv.insert("m".to_string(), m.to_string());
        kv.insert("k".to_string(), k.to_string());
        if let Some(a) = self.a {
            kv.insert("a".to_string(), a.to_string());
        }
        if let Some(b) = self.b {
            kv.insert("b".to_string(), b.to_string());
        }
        if let Some(z) = self.z {
            kv.insert("z".to_string(), z.to_string());
        }
        Ok(ProblemInstance::from_kv(&kv)?)
    }

    fn instance(&self) -> Result<ProblemInstance, CliError> {
        self.instance_with(None)
    }

    fn threads(&self) -> usize {
        self.threads.unwrap_or_else(default_threads)
    }

    /// Resolves the flags into an experiment spec.
    pub fn experiment(&self) -> Result<ExperimentSpec, CliError> {
        let instance = self.instance()?;
        let algorithm = self.alg.unwrap_or(Algorithm::Gomea);
        let sizing = match (self.mu, self.c) {
            (Some(_), Some(_)) => return Err(usage("--mu and --c are mutually exclusive")),
            (Some(mu), None) => Sizing::Mu(mu),
            (None, Some(c)) => Sizing::C(c),
            (None, None) => Sizing::C(1.0),
        };
        let fos = match &self.fos_file {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| usage(format!("cannot read FOS file {}: {e}", path.display())))?;
                Some(Fos::parse(&text, instance.len())?)
            }
            None => None,
        };
        let mut spec = ExperimentSpec {
            instance,
            algorithm,
            sizing,
            init: self.init.unwrap_or(InitKind::Uniform),
            budget: 0,
            replications: self.reps.unwrap_or(100),
            base_seed: self.seed.unwrap_or(0),
            mutation_rate: self.rate,
            fos,
        };
        spec.budget = match (self.budget, self.budget_preset) {
            (Some(_), Some(_)) => {
                return Err(usage("--budget and --budget-preset are mutually exclusive"))
            }
            (Some(b), None) => b,
            (None, Some(p)) => {
                if algorithm == Algorithm::Ea {
                    return Err(usage("budget presets do not apply to the EA; use --budget"));
                }
                p.budget(&spec.instance, spec.c(), algorithm)?
            }
            (None, None) => {
                let inst = &spec.instance;
                let preset = match (algorithm, inst.shape()) {
                    (Algorithm::Ea, _) => return Err(usage("--budget is required for the EA")),
                    (_, Shape::Generalized | Shape::Tailed) => BudgetPreset::S632,
                    (_, Shape::Standard) if inst.k() == 4 => BudgetPreset::S42,
                    (_, Shape::Standard) => {
                        return Err(usage(
                            "for the standard trap with k != 4, choose --budget-preset thm2 or s42 (or --budget)",
                        ))
                    }
                };
                preset.budget(inst, spec.c(), algorithm)?
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn open_out<'a>(
    path: &Option<PathBuf>,
    stdout: &'a mut dyn Write,
) -> Result<Box<dyn Write + 'a>, CliError> {
    match path {
        Some(p) => {
            let f = fs::File::create(p)
                .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", p.display())))?;
            Ok(Box::new(io::BufWriter::new(f)))
        }
        None => Ok(Box::new(stdout)),
    }
}

/// The reports a `bound` invocation prints.
pub fn bound_reports(args: &BoundArgs) -> Result<Vec<BoundReport>, CliError> {
    let f = &args.shared;
    let need =
        |v: Option<usize>, name: &str| v.ok_or_else(|| usage(format!("--{name} is required")));
    let c = f.c.unwrap_or(1.0);
    let reports = match args.formula.as_str() {
        "ea" => {
            let (m, k) = (need(f.m, "m")?, need(f.k, "k")?);
            vec![BoundReport::new(
                "ea",
                &[("m", m as f64), ("k", k as f64)],
                ea_upper_bound(m, k)?,
            )]
        }
        "ea-drift" => {
            let (s, m, k) = (need(args.s, "s")?, need(f.m, "m")?, need(f.k, "k")?);
            let d = ea_drift_lower_bound(s, m, k)?;
            let inputs = [("s", s as f64), ("m", m as f64), ("k", k as f64)];
            vec![
                BoundReport::new("ea-drift-exact", &inputs, d.exact),
                BoundReport::new("ea-drift-floor", &inputs, d.floor),
            ]
        }
        "gomea" => {
            let (m, k) = (need(f.m, "m")?, need(f.k, "k")?);
            vec![BoundReport::new(
                "gomea",
                &[("m", m as f64), ("k", k as f64), ("c", c)],
                gomea_bound(m, k, c)?,
            )]
        }
        "lemma1" => {
            let (m, k) = (need(f.m, "m")?, need(f.k, "k")?);
            let inputs = [("m", m as f64), ("k", k as f64), ("c", c)];
            vec![
                BoundReport::new(
                    "lemma1-population",
                    &inputs,
                    lemma1_population(m, k, c)? as f64,
                ),
                BoundReport::new("lemma1-failure", &inputs, lemma1_failure(m, c)?),
            ]
        }
        "lemma2" => {
            let m = need(f.m, "m")?;
            let ps = match args.p_star {
                Some(p) => p,
                None => {
                    let inst = f.instance()?;
                    inst.p_star()
                }
            };
            vec![BoundReport::new(
                "lemma2-population",
                &[("m", m as f64), ("p_star", ps), ("c", c)],
                lemma2_population(m, ps, c)? as f64,
            )]
        }
        "logistic" => {
            let t = args.t.ok_or_else(|| usage("--t is required"))?;
            let mu = f.mu.ok_or_else(|| usage("--mu is required"))? as f64;
            vec![BoundReport::new(
                if args.mutation {
                    "logistic-mutation"
                } else {
                    "logistic"
                },
                &[("t", t), ("mu", mu)],
                logistic_fraction(t, mu, args.mutation)?,
            )]
        }
        "thm3" => {
            let inst = f.instance()?;
            let b = thm3_bound(inst.m(), inst.params(), inst.shape(), c)?;
            let p = inst.params();
            let inputs = [
                ("m", inst.m() as f64),
                ("k", p.k() as f64),
                ("a", p.a()),
                ("b", p.b()),
                ("z", p.z() as f64),
                ("c", c),
            ];
            vec![
                BoundReport::new("thm3-full", &inputs, b.full),
                BoundReport::new("thm3-dominant", &inputs, b.dominant),
                BoundReport::new("thm3-levels", &inputs, b.levels as f64),
            ]
        }
        "pstar" | "region" | "level" => {
            let inst = f.instance_with(Some(1))?;
            let (p, shape) = (inst.params(), inst.shape());
            let inputs = [
                ("k", p.k() as f64),
                ("a", p.a()),
                ("b", p.b()),
                ("z", p.z() as f64),
            ];
            match args.formula.as_str() {
                "pstar" => vec![BoundReport::new("pstar", &inputs, p_star(p, shape)?)],
                "region" => vec![BoundReport::new(
                    "region-start",
                    &inputs,
                    region_start_for(p, shape) as f64,
                )],
                _ => {
                    let u = need(args.u, "u")?;
                    let mut inputs = inputs.to_vec();
                    inputs.push(("u", u as f64));
                    vec![BoundReport::new(
                        "level",
                        &inputs,
                        level(u, p, shape)? as f64,
                    )]
                }
            }
        }
        other => return Err(usage(format!("unknown formula {other:?}"))),
    };
    Ok(reports)
}

pub fn cmd_bound(mut args: BoundArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    args.shared.merge_config()?;
    let reports = bound_reports(&args)?;
    let mut out = open_out(&args.shared.out, stdout)?;
    writeln!(out, "formula,params,value")?;
    for r in reports {
        writeln!(
            out,
            "{},{},{}",
            r.formula,
            r.params_field(),
            fmt_real(r.value)
        )?;
    }
    out.flush()?;
    Ok(())
}

pub fn cmd_run(mut args: RunArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    args.shared.merge_config()?;
    let spec = args.shared.experiment()?;
    let result = run_experiment_with_threads(&spec, args.shared.threads())?;
    let mut out = open_out(&args.shared.out, stdout)?;
    write_csv(&result, &mut out)?;
    out.flush()?;
    Ok(())
}

/// One grid point of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    pub spec: ExperimentSpec,
}

/// Expands a preset into experiment specs, applying filters and overrides.
pub fn expand_preset(preset: &Preset, args: &SweepArgs) -> Result<Vec<GridPoint>, CliError> {
    let reps = args.reps.unwrap_or(preset.replications);
    let mut points = Vec::new();
    let mut index = 0;
    for family in preset.families {
        for &k in preset.ks {
            let zs: Vec<Option<usize>> = match (family, preset.zs) {
                (TrapFamily::Standard, _) | (_, ZRule::None) => vec![None],
                (_, ZRule::Fixed(zs)) => zs.iter().copied().map(Some).collect(),
                (_, ZRule::AllBelowK) => (1..k).map(Some).collect(),
            };
            for z in zs {
                for &m in preset.ms {
                    for &alg in preset.algorithms {
                        for &c in preset.cs {
                            let this = index;
                            index += 1;
                            if args.m.is_some_and(|x| x != m)
                                || args.k.is_some_and(|x| x != k)
                                || args.c.is_some_and(|x| x != c)
                            {
                                continue;
                            }
                            let instance = match *family {
                                TrapFamily::Standard => ProblemInstance::standard(m, k)?,
                                TrapFamily::UnitLocalOptimum => ProblemInstance::generalized(
                                    m,
                                    crate::TrapParams::new(k, 1.0, k as f64, z.expect("z set"))?,
                                )?,
                                TrapFamily::Fixed { shape, a, b } => ProblemInstance::new(
                                    m,
                                    crate::TrapParams::new(k, a, b, z.expect("z set"))?,
                                    shape,
                                )?,
                            };
                            let init = if alg == Algorithm::Ea {
                                InitKind::Uniform
                            } else {
                                preset.init
                            };
                            let mut spec = ExperimentSpec {
                                instance,
                                algorithm: alg,
                                sizing: Sizing::C(c),
                                init,
                                budget: 0,
                                replications: reps,
                                base_seed: args.seed ^ ((this as u64) << 32),
                                mutation_rate: None,
                                fos: None,
                            };
                            spec.budget = match preset.budget {
                                BudgetRule::Preset(p) => p.budget(&spec.instance, c, alg)?,
                                BudgetRule::BoundMultiple(x) => {
                                    let (bound, _) = spec.bound_values()?;
                                    ((x * bound).floor() as u64).max(spec.mu()? as u64)
                                }
                            };
                            points.push(GridPoint { index: this, spec });
                        }
                    }
                }
            }
        }
    }
    Ok(points)
}

pub const SWEEP_COLUMNS: &str =
    "preset,point,shape,m,k,a,b,z,algorithm,init,mu,c,mutation_rate,budget,base_seed";

pub fn cmd_sweep(args: SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let preset = presets::find(&args.preset).ok_or_else(|| {
        let names: Vec<&str> = presets::PRESETS.iter().map(|p| p.name).collect();
        usage(format!(
            "unknown preset {:?} (available: {})",
            args.preset,
            names.join(", ")
        ))
    })?;
    let points = expand_preset(preset, &args)?;
    let threads = args.threads.unwrap_or_else(default_threads);
    let mut out = open_out(&args.out, stdout)?;
    writeln!(out, "# gomea-trap sweep")?;
    writeln!(out, "# preset={}", preset.name)?;
    writeln!(out, "# description={}", preset.description)?;
    writeln!(out, "# seed={}", args.seed)?;
    writeln!(out, "# rng_id={RNG_ID}")?;
    writeln!(out, "{SWEEP_COLUMNS},{SUMMARY_COLUMNS}")?;
    for p in points {
        let result = run_experiment_with_threads(&p.spec, threads)?;
        let s = &p.spec;
        let params = s.instance.params();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            preset.name,
            p.index,
            s.instance.shape(),
            s.instance.m(),
            params.k(),
            params.a(),
            params.b(),
            params.z(),
            s.algorithm,
            s.init,
            s.mu()?,
            s.c(),
            s.effective_mutation_rate()
                .map_or_else(|| "none".to_string(), |r| r.to_string()),
            s.budget,
            s.base_seed,
            result.summary.csv_fields(),
        )?;
        out.flush()?;
    }
    Ok(())
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Bound(a) => cmd_bound(a, stdout),
        Command::Run(a) => cmd_run(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
            if code == 0 {
                let _ = e.print();
            } else {
                let msg = e.to_string();
                let first = msg.lines().next().unwrap_or("invalid arguments");
                eprintln!("{}", usage(first.trim_start_matches("error: ")));
            }
            return code;
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bound(args: &[&str]) -> Result<String, CliError> {
        let cli = Cli::try_parse_from(["gomea-trap", "bound"].iter().chain(args)).unwrap();
        let mut buf = Vec::new();
        run(cli, &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    fn value_of(csv: &str, formula: &str) -> f64 {
        csv.lines()
            .find(|l| l.starts_with(&format!("{formula},")))
            .and_then(|l| l.rsplit(',').next())
            .unwrap()
            .parse()
            .unwrap()
    }

    #[test]
    fn bound_examples() {
        let out = bound(&["gomea", "--m", "6", "--k", "4", "--c", "1"]).unwrap();
        assert_eq!(out, "formula,params,value\ngomea,m=6;k=4;c=1,3456\n");
        let out = bound(&["pstar", "--k", "6", "--a", "1", "--b", "6", "--z", "4"]).unwrap();
        assert_eq!(value_of(&out, "pstar"), 0.109375);
        let out = bound(&["ea", "--m", "1", "--k", "1"]).unwrap();
        assert!((value_of(&out, "ea") - std::f64::consts::E).abs() < 1e-10);
    }

    #[test]
    fn bound_other_formulas() {
        let out = bound(&[
            "thm3", "--m", "8", "--k", "6", "--a", "1", "--b", "6", "--z", "4",
        ])
        .unwrap();
        assert!((value_of(&out, "thm3-dominant") - 4681.14285714).abs() < 1e-6);
        assert_eq!(value_of(&out, "thm3-levels"), 1.0);
        let out = bound(&["lemma1", "--m", "6", "--k", "4"]).unwrap();
        assert_eq!(value_of(&out, "lemma1-population"), 96.0);
        let out = bound(&[
            "lemma2", "--m", "8", "--k", "6", "--a", "1", "--b", "6", "--z", "4",
        ])
        .unwrap();
        assert_eq!(value_of(&out, "lemma2-population"), 74.0);
        let out = bound(&["region", "--k", "6", "--a", "1", "--b", "6", "--z", "4"]).unwrap();
        assert_eq!(value_of(&out, "region-start"), 5.0);
        let out = bound(&[
            "level", "--k", "6", "--a", "1", "--b", "6", "--z", "4", "--u", "6",
        ])
        .unwrap();
        assert_eq!(value_of(&out, "level"), 1.0);
        let out = bound(&["ea-drift", "--s", "1", "--m", "2", "--k", "3"]).unwrap();
        assert!((value_of(&out, "ea-drift-exact") - 2.67918381344e-3).abs() < 1e-12);
        let out = bound(&["logistic", "--t", "0", "--mu", "10"]).unwrap();
        assert!((value_of(&out, "logistic") - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn bound_errors_are_usage_errors() {
        assert!(matches!(bound(&["nope"]), Err(CliError::Usage(_))));
        assert!(matches!(
            bound(&["gomea", "--m", "6"]),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            bound(&["pstar", "--k", "6", "--a", "7", "--b", "6", "--z", "4"]),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn config_merge_prefers_flags() {
        let mut flags = SharedFlags {
            m: Some(3),
            ..Default::default()
        };
        let cfg = parse_config("# comment\nm = 8\nk=4\nbudget_preset=s42\n\nalg=ga\n").unwrap();
        flags.apply_config(&cfg).unwrap();
        assert_eq!(flags.m, Some(3));
        assert_eq!(flags.k, Some(4));
        assert_eq!(flags.alg, Some(Algorithm::Ga));
        assert_eq!(flags.budget_preset, Some(BudgetPreset::S42));
        assert!(parse_config("novalue").is_err());
        let bad = parse_config("colour=blue").unwrap();
        assert!(SharedFlags::default().apply_config(&bad).is_err());
    }

    #[test]
    fn default_budgets() {
        let flags = SharedFlags {
            m: Some(6),
            k: Some(4),
            ..Default::default()
        };
        assert_eq!(flags.experiment().unwrap().budget, 6912);
        let flags = SharedFlags {
            m: Some(6),
            k: Some(5),
            ..Default::default()
        };
        assert!(matches!(flags.experiment(), Err(CliError::Usage(_))));
        let flags = SharedFlags {
            m: Some(6),
            k: Some(5),
            budget_preset: Some(BudgetPreset::Thm2),
            ..Default::default()
        };
        assert_eq!(flags.experiment().unwrap().budget, 2 * 216 * 32);
        let flags = SharedFlags {
            m: Some(2),
            k: Some(3),
            alg: Some(Algorithm::Ea),
            ..Default::default()
        };
        assert!(flags.experiment().is_err());
    }

    #[test]
    fn presets_expand() {
        for p in presets::PRESETS {
            let args = SweepArgs {
                preset: p.name.into(),
                reps: Some(1),
                seed: 3,
                m: None,
                k: None,
                c: None,
                out: None,
                threads: Some(1),
            };
            let points = expand_preset(p, &args).unwrap();
            assert!(!points.is_empty());
            for pt in &points {
                pt.spec.validate().unwrap();
            }
        }
        let fig3 = presets::find("fig3").unwrap();
        let args = SweepArgs {
            preset: "fig3".into(),
            reps: None,
            seed: 0,
            m: Some(8),
            k: Some(4),
            c: None,
            out: None,
            threads: None,
        };
        let points = expand_preset(fig3, &args).unwrap();
        assert_eq!(points.len(), 2);
        for pt in points {
            assert_eq!(pt.spec.bound_values().unwrap().0, 8.0f64.powi(3) * 16.0);
            assert_eq!(pt.spec.budget, 81920);
        }
    }
}
