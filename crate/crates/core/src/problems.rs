//! Concatenated trap functions and the separable-problem interface the
//! search algorithms run against.
//!
//! All trap shapes are functions of a block's unitation `u`:
//!
//! * generalized: `(a/z)(z - u)` for `u <= z`, `(b/(k - z))(u - z)` otherwise;
//! * standard: the generalized trap with `a = k - 1`, `b = k`, `z = k - 1`;
//! * tailed: same left slope, but the right slope starts at `a` and climbs to
//!   `b`, so the local optimum can be close to `b` while the optimal region
//!   stays `[z + 1, k]`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::bits::{unitation, BitString};
use crate::error::{Error, Result};

/// Relative tolerance for fitness comparisons.
pub const FITNESS_REL_TOL: f64 = 1e-12;

/// `new` is strictly better than `old`.
pub fn improves(new: f64, old: f64) -> bool {
    new - old > FITNESS_REL_TOL * new.abs().max(old.abs())
}

/// `new` is at least as good as `old` (the complement of `old` improving on `new`).
pub fn not_worse(new: f64, old: f64) -> bool {
    !improves(old, new)
}

/// Ceiling of a ratio that is tolerant to representation error when the
/// ratio is (mathematically) an integer.
pub(crate) fn ceil_tolerant(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

pub(crate) fn floor_tolerant(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        x.floor()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Standard,
    Generalized,
    Tailed,
}

impl Shape {
    pub fn as_str(self) -> &'static str {
        match self {
            Shape::Standard => "standard",
            Shape::Generalized => "generalized",
            Shape::Tailed => "tailed",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Shape::Standard),
            "generalized" => Ok(Shape::Generalized),
            "tailed" => Ok(Shape::Tailed),
            other => Err(Error::Parse(format!("unknown shape {other:?}"))),
        }
    }
}

/// Parameters of a single `k`-bit trap: local optimum `a` (at `u = 0`),
/// global optimum `b` (at `u = k`) and slope breakpoint `z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrapParams {
    k: usize,
    a: f64,
    b: f64,
    z: usize,
}

impl TrapParams {
    /// Requires `0 < a < b` and `1 <= z <= k - 1`.
    pub fn new(k: usize, a: f64, b: f64, z: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a <= 0.0 || b <= a {
            return Err(Error::InvalidParams(format!(
                "need 0 < a < b, got a={a}, b={b}"
            )));
        }
        if z < 1 || z + 1 > k {
            return Err(Error::InvalidParams(format!(
                "need 1 <= z <= k-1, got z={z}, k={k}"
            )));
        }
        Ok(Self { k, a, b, z })
    }

    /// `(a, b, z) = (k - 1, k, k - 1)`. For `k = 1` this degenerates to a
    /// single OneMax bit (`a = 0`, `z = 0`), which the general constructor
    /// does not admit.
    pub fn standard(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams("k must be at least 1".into()));
        }
        Ok(Self {
            k,
            a: (k - 1) as f64,
            b: k as f64,
            z: k - 1,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn z(&self) -> usize {
        self.z
    }

    pub fn is_standard(&self) -> bool {
        self.a == (self.k - 1) as f64 && self.b == self.k as f64 && self.z == self.k - 1
    }
}

/// Value of one trap block with unitation `u`.
pub fn trap_value(u: usize, p: &TrapParams, shape: Shape) -> Result<f64> {
    if u > p.k {
        return Err(Error::UnitationOutOfRange { u, k: p.k });
    }
    Ok(trap_value_unchecked(u, p, shape))
}

fn trap_value_unchecked(u: usize, p: &TrapParams, shape: Shape) -> f64 {
    let (k, z) = (p.k as f64, p.z as f64);
    let uf = u as f64;
    if u <= p.z {
        if p.z == 0 {
            p.a
        } else {
            p.a / z * (z - uf)
        }
    } else {
        match shape {
            Shape::Standard | Shape::Generalized => p.b / (k - z) * (uf - z),
            Shape::Tailed => p.a + (p.b - p.a) * (uf - z) / (k - z),
        }
    }
}

/// First unitation whose generalized-trap value exceeds `a`.
///
/// This is the smallest `u` with `(b/(k-z))(u-z) > a`, i.e.
/// `z + floor(a(k-z)/b) + 1`, which equals `z + ceil(a(k-z)/b)` whenever
/// `a(k-z)/b` is not an integer.
pub fn region_start(p: &TrapParams) -> usize {
    let q = p.a * (p.k - p.z) as f64 / p.b;
    p.z + floor_tolerant(q) as usize + 1
}

/// First unitation of the optimal region for the given shape.
pub fn region_start_for(p: &TrapParams, shape: Shape) -> usize {
    match shape {
        Shape::Tailed => p.z + 1,
        Shape::Standard | Shape::Generalized => region_start(p),
    }
}

pub fn in_optimal_region(u: usize, p: &TrapParams, shape: Shape) -> Result<bool> {
    if u > p.k {
        return Err(Error::UnitationOutOfRange { u, k: p.k });
    }
    Ok(u >= region_start_for(p, shape))
}

fn binomial(n: u32, r: u32) -> u128 {
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `p*` as an exact ratio `numerator / 2^k`.
pub fn p_star_exact(p: &TrapParams, shape: Shape) -> Result<(u128, u32)> {
    if p.k > 120 {
        return Err(Error::Overflow("p_star"));
    }
    let k = p.k as u32;
    let start = region_start_for(p, shape) as u32;
    let num = (start..=k).map(|j| binomial(k, j)).sum();
    Ok((num, k))
}

/// Probability that a uniformly random block lies in the optimal region.
pub fn p_star(p: &TrapParams, shape: Shape) -> Result<f64> {
    let (num, k) = p_star_exact(p, shape)?;
    Ok(num as f64 / 2f64.powi(k as i32))
}

/// Counts full-genome fitness evaluations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalCounter {
    count: u64,
}

impl EvalCounter {
    pub fn new() -> Self {
        Self::default()
    }
    pub fn count(&self) -> u64 {
        self.count
    }
    pub fn increment(&mut self) {
        self.count += 1;
    }
}

/// An objective the search algorithms can run against: a maximization
/// problem over fixed-length bitstrings with a recognizable optimum.
///
/// Implementations may assume `x.len() == self.genome_len()`; callers
/// validate lengths once at the run boundary.
pub trait Problem: Sync {
    fn genome_len(&self) -> usize;
    fn fitness(&self, x: &BitString) -> f64;
    fn is_optimal(&self, x: &BitString) -> bool;
}

/// `m` concatenated `k`-bit traps of one shape.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    m: usize,
    params: TrapParams,
    shape: Shape,
}

impl ProblemInstance {
    pub fn new(m: usize, params: TrapParams, shape: Shape) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParams("m must be at least 1".into()));
        }
        if shape == Shape::Standard && !params.is_standard() {
            return Err(Error::InvalidParams(
                "standard shape requires a = k-1, b = k, z = k-1".into(),
            ));
        }
        if shape != Shape::Standard && params.z == 0 {
            return Err(Error::InvalidParams("z must be at least 1".into()));
        }
        Ok(Self { m, params, shape })
    }

    pub fn standard(m: usize, k: usize) -> Result<Self> {
        Self::new(m, TrapParams::standard(k)?, Shape::Standard)
    }

    pub fn generalized(m: usize, params: TrapParams) -> Result<Self> {
        Self::new(m, params, Shape::Generalized)
    }

    pub fn tailed(m: usize, params: TrapParams) -> Result<Self> {
        Self::new(m, params, Shape::Tailed)
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn k(&self) -> usize {
        self.params.k
    }
    pub fn params(&self) -> &TrapParams {
        &self.params
    }
    pub fn shape(&self) -> Shape {
        self.shape
    }
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.m * self.params.k
    }

    /// Global optimum value `m * b`.
    pub fn optimum_value(&self) -> f64 {
        self.m as f64 * self.params.b
    }

    pub fn p_star(&self) -> f64 {
        p_star(&self.params, self.shape).expect("k validated at construction")
    }

    pub fn region_start(&self) -> usize {
        region_start_for(&self.params, self.shape)
    }

    fn check_len(&self, x: &BitString) -> Result<()> {
        if x.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: x.len(),
            });
        }
        Ok(())
    }

    fn blocks<'a>(&self, x: &'a BitString) -> impl Iterator<Item = &'a [bool]> {
        x.as_slice().chunks_exact(self.params.k)
    }

    pub fn block_unitations(&self, x: &BitString) -> Result<Vec<usize>> {
        self.check_len(x)?;
        Ok(self.blocks(x).map(unitation).collect())
    }

    /// Per-block optimal-region membership.
    pub fn region_membership(&self, x: &BitString) -> Result<Vec<bool>> {
        let start = self.region_start();
        Ok(self
            .block_unitations(x)?
            .into_iter()
            .map(|u| u >= start)
            .collect())
    }

    /// Key/value description, in the order it is echoed into output headers.
    pub fn to_kv(&self) -> Vec<(&'static str, String)> {
        vec![
            ("shape", self.shape.to_string()),
            ("m", self.m.to_string()),
            ("k", self.params.k.to_string()),
            ("a", self.params.a.to_string()),
            ("b", self.params.b.to_string()),
            ("z", self.params.z.to_string()),
        ]
    }

    /// Builds an instance from `shape`, `m`, `k` and (for non-standard
    /// shapes) `a`, `b`, `z`. For the standard shape, `a`/`b`/`z` may be
    /// omitted but must match if given.
    pub fn from_kv(kv: &BTreeMap<String, String>) -> Result<Self> {
        fn get<T: FromStr>(kv: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
            kv.get(key)
                .map(|v| {
                    v.trim()
                        .parse::<T>()
                        .map_err(|_| Error::Parse(format!("bad value for {key}: {v:?}")))
                })
                .transpose()
        }
        let shape: Shape = get(kv, "shape")?.unwrap_or(Shape::Standard);
        let m: usize = get(kv, "m")?.ok_or_else(|| Error::Parse("missing m".into()))?;
        let k: usize = get(kv, "k")?.ok_or_else(|| Error::Parse("missing k".into()))?;
        let a: Option<f64> = get(kv, "a")?;
        let b: Option<f64> = get(kv, "b")?;
        let z: Option<usize> = get(kv, "z")?;
        let params = match shape {
            Shape::Standard => {
                let p = TrapParams::standard(k)?;
                if a.is_some_and(|a| a != p.a)
                    || b.is_some_and(|b| b != p.b)
                    || z.is_some_and(|z| z != p.z)
                {
                    return Err(Error::InvalidParams(
                        "standard shape requires a = k-1, b = k, z = k-1".into(),
                    ));
                }
                p
            }
            _ => {
                let missing = |n: &str| Error::Parse(format!("missing {n} for shape {shape}"));
                TrapParams::new(
                    k,
                    a.ok_or_else(|| missing("a"))?,
                    b.ok_or_else(|| missing("b"))?,
                    z.ok_or_else(|| missing("z"))?,
                )?
            }
        };
        Self::new(m, params, shape)
    }
}

impl Problem for ProblemInstance {
    fn genome_len(&self) -> usize {
        self.len()
    }

    fn fitness(&self, x: &BitString) -> f64 {
        self.blocks(x)
            .map(|b| trap_value_unchecked(unitation(b), &self.params, self.shape))
            .sum()
    }

    fn is_optimal(&self, x: &BitString) -> bool {
        x.as_slice().iter().all(|&b| b)
    }
}

/// Sum of block trap values; increments `ctr` by one.
pub fn concatenated_fitness(
    x: &BitString,
    inst: &ProblemInstance,
    ctr: &mut EvalCounter,
) -> Result<f64> {
    inst.check_len(x)?;
    ctr.increment();
    Ok(inst.fitness(x))
}

/// Every block is all ones.
pub fn is_global_optimum(x: &BitString, inst: &ProblemInstance) -> Result<bool> {
    inst.check_len(x)?;
    Ok(inst.is_optimal(x))
}

/// Number of blocks that are all ones.
pub fn count_optimal_blocks(x: &BitString, inst: &ProblemInstance) -> Result<usize> {
    let k = inst.k();
    Ok(inst
        .block_unitations(x)?
        .into_iter()
        .filter(|&u| u == k)
        .count())
}

/// Number of blocks whose unitation lies in the optimal region.
pub fn count_region_blocks(x: &BitString, inst: &ProblemInstance) -> Result<usize> {
    Ok(inst
        .region_membership(x)?
        .into_iter()
        .filter(|&r| r)
        .count())
}

/// A subfunction of a separable problem, defined on a contiguous block.
#[allow(clippy::len_without_is_empty)]
pub trait Subfunction: Sync {
    fn len(&self) -> usize;
    fn value(&self, bits: &[bool]) -> f64;
    fn is_optimal(&self, bits: &[bool]) -> bool;
}

impl Subfunction for (TrapParams, Shape) {
    fn len(&self) -> usize {
        self.0.k
    }
    fn value(&self, bits: &[bool]) -> f64 {
        trap_value_unchecked(unitation(bits), &self.0, self.1)
    }
    fn is_optimal(&self, bits: &[bool]) -> bool {
        bits.iter().all(|&b| b)
    }
}

/// Sum of arbitrary subfunctions over consecutive blocks. Blocks may have
/// different lengths.
pub struct Separable<S> {
    parts: Vec<S>,
    len: usize,
}

impl<S: Subfunction> Separable<S> {
    pub fn new(parts: Vec<S>) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(|p| p.len() == 0) {
            return Err(Error::InvalidParams(
                "separable problem needs nonempty blocks".into(),
            ));
        }
        let len = parts.iter().map(Subfunction::len).sum();
        Ok(Self { parts, len })
    }

    /// Index ranges of the blocks, in order.
    pub fn block_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.parts
            .iter()
            .map(|p| {
                let r = start..start + p.len();
                start = r.end;
                r
            })
            .collect()
    }

    fn split<'a>(&'a self, x: &'a BitString) -> impl Iterator<Item = (&'a S, &'a [bool])> {
        self.parts
            .iter()
            .zip(self.block_ranges())
            .map(move |(p, r)| (p, &x.as_slice()[r]))
    }
}

impl<S: Subfunction> Problem for Separable<S> {
    fn genome_len(&self) -> usize {
        self.len
    }
    fn fitness(&self, x: &BitString) -> f64 {
        self.split(x).map(|(p, bits)| p.value(bits)).sum()
    }
    fn is_optimal(&self, x: &BitString) -> bool {
        self.split(x).all(|(p, bits)| p.is_optimal(bits))
    }
}
