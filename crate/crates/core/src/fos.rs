//! Family-of-subsets linkage models.
//!
//! A FOS is an ordered list of nonempty index sets over genome positions.
//! Each subset is a crossover mask for gene-pool optimal mixing. Subsets
//! are kept in construction order; traversal order is chosen per call by
//! the mixing operator.

use std::fmt;

use crate::error::{Error, Result};
use crate::problems::ProblemInstance;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fos {
    subsets: Vec<Vec<usize>>,
    genome_length: usize,
}

impl Fos {
    /// Validates that every subset is nonempty, duplicate-free and within
    /// `[0, genome_length)`. Indices inside each subset are sorted.
    pub fn new(subsets: Vec<Vec<usize>>, genome_length: usize) -> Result<Self> {
        if genome_length == 0 {
            return Err(Error::InvalidFos("genome length must be positive".into()));
        }
        let mut out = Vec::with_capacity(subsets.len());
        for (i, mut s) in subsets.into_iter().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidFos(format!("subset {i} is empty")));
            }
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidFos(format!("subset {i} repeats an index")));
            }
            if let Some(&bad) = s.iter().find(|&&x| x >= genome_length) {
                return Err(Error::IndexOutOfRange {
                    index: bad,
                    len: genome_length,
                });
            }
            out.push(s);
        }
        Ok(Self {
            subsets: out,
            genome_length,
        })
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn genome_length(&self) -> usize {
        self.genome_length
    }

    /// Univariate FOS: one singleton per position.
    pub fn univariate(genome_length: usize) -> Result<Self> {
        Self::new((0..genome_length).map(|i| vec![i]).collect(), genome_length)
    }

    /// Subsets are pairwise disjoint.
    pub fn is_marginal_product(&self) -> bool {
        let mut seen = vec![false; self.genome_length];
        for &i in self.subsets.iter().flatten() {
            if seen[i] {
                return false;
            }
            seen[i] = true;
        }
        true
    }

    /// Marginal-product, and every subset lies within one block of `inst`.
    pub fn is_truthful(&self, inst: &ProblemInstance) -> Result<bool> {
        self.is_truthful_for_blocks(inst.len(), inst.k())
    }

    pub(crate) fn is_truthful_for_blocks(&self, len: usize, k: usize) -> Result<bool> {
        if self.genome_length != len {
            return Err(Error::LengthMismatch {
                expected: len,
                actual: self.genome_length,
            });
        }
        let within_block = self.subsets.iter().all(|s| {
            let first = s[0] / k;
            s.iter().all(|&i| i / k == first)
        });
        Ok(within_block && self.is_marginal_product())
    }

    /// Parses one subset per line, comma-separated 0-based indices. Blank
    /// lines and lines starting with `#` are skipped.
    pub fn parse(text: &str, genome_length: usize) -> Result<Self> {
        let mut subsets = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let subset = line
                .split(',')
                .map(|t| {
                    t.trim().parse::<usize>().map_err(|_| {
                        Error::Parse(format!("line {}: bad index {:?}", n + 1, t.trim()))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            subsets.push(subset);
        }
        Self::new(subsets, genome_length)
    }
}

impl fmt::Display for Fos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.subsets {
            let line: Vec<String> = s.iter().map(usize::to_string).collect();
            writeln!(f, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// The truthful marginal-product FOS for `m` blocks of `k` bits: subset `i`
/// is `{i*k, ..., i*k + k - 1}`.
pub fn truthful_mp_fos(m: usize, k: usize) -> Result<Fos> {
    if m == 0 || k == 0 {
        return Err(Error::InvalidFos("m and k must be positive".into()));
    }
    Fos::new(
        (0..m).map(|i| (i * k..i * k + k).collect()).collect(),
        m * k,
    )
}
