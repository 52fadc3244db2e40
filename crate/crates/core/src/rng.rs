//! Seeded random streams.
//!
//! Every stochastic operation in the crate draws from a [`RandomStream`].
//! Streams are ChaCha8 keyed by a 64-bit seed; child streams reuse the key
//! and select a distinct ChaCha stream id, so replications and workers get
//! independent sequences that are identical on every platform.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Identifier of the generator, echoed into experiment output.
pub const RNG_ID: &str = "chacha8-rand_chacha-0.3";

#[derive(Clone, Debug)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent stream derived from this stream's seed and `label`.
    /// Label 0 is the root stream itself, so labels start at 1 in practice.
    pub fn child(&self, label: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(label);
        Self {
            seed: self.seed,
            rng,
        }
    }

    /// Uniform index in `[0, n)`.
    pub fn draw_index(&mut self, n: usize) -> Result<usize> {
        if n == 0 {
            return Err(Error::EmptyRange);
        }
        // Sampled as u64 so the sequence does not depend on pointer width.
        Ok(self.rng.gen_range(0..n as u64) as usize)
    }

    /// `true` with probability `p`.
    pub fn flip_with_probability(&mut self, p: f64) -> Result<bool> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(self.rng.gen_bool(p))
    }

    /// Fair coin.
    pub fn coin(&mut self) -> bool {
        self.rng.next_u32() & 1 == 1
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.rng.gen_range(0..=i as u64) as usize;
            items.swap(i, j);
        }
    }

    /// 64 fair random bits.
    pub fn word(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Positions in `[0, n)` selected independently with probability `p`,
    /// in increasing order. Gaps between selected positions are drawn from
    /// the geometric distribution, so the cost is proportional to the
    /// number of selected positions rather than `n`.
    pub fn bernoulli_positions(&mut self, n: usize, p: f64) -> Result<Vec<usize>> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        if p == 0.0 || n == 0 {
            return Ok(Vec::new());
        }
        if p == 1.0 {
            return Ok((0..n).collect());
        }
        let log_q = (-p).ln_1p();
        let mut out = Vec::new();
        let mut pos = 0usize;
        loop {
            // 1 - U lies in (0, 1], so the log is finite.
            let u = 1.0 - self.rng.gen::<f64>();
            let gap = (u.ln() / log_q).floor();
            if gap >= (n - pos) as f64 {
                break;
            }
            pos += gap as usize;
            out.push(pos);
            pos += 1;
            if pos >= n {
                break;
            }
        }
        Ok(out)
    }

    /// Uniform index in `[0, n)` excluding `skip`. Requires `n >= 2`.
    pub fn draw_index_excluding(&mut self, n: usize, skip: usize) -> Result<usize> {
        if n < 2 {
            return Err(Error::EmptyRange);
        }
        let i = self.draw_index(n - 1)?;
        Ok(if i >= skip { i + 1 } else { i })
    }
}
