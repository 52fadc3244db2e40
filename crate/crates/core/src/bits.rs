//! Fixed-length binary genomes.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A fixed-length string of bits. Positions are 0-indexed.
///
/// Values are never aliased: every variation operator builds a new string.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn ones(len: usize) -> Self {
        Self {
            bits: vec![true; len],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn set(&mut self, i: usize, value: bool) -> Result<()> {
        let len = self.len();
        let slot = self
            .bits
            .get_mut(i)
            .ok_or(Error::IndexOutOfRange { index: i, len })?;
        *slot = value;
        Ok(())
    }

    pub fn flip(&mut self, i: usize) -> Result<()> {
        let len = self.len();
        let slot = self
            .bits
            .get_mut(i)
            .ok_or(Error::IndexOutOfRange { index: i, len })?;
        *slot = !*slot;
        Ok(())
    }

    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// Number of one-bits.
    pub fn unitation(&self) -> usize {
        unitation(&self.bits)
    }

    /// The `i`-th block of `k` bits as a new string.
    pub fn block(&self, i: usize, k: usize) -> Result<BitString> {
        self.block_slice(i, k)
            .map(|s| BitString::from_bits(s.to_vec()))
    }

    /// Borrowing variant of [`BitString::block`].
    pub fn block_slice(&self, i: usize, k: usize) -> Result<&[bool]> {
        let len = self.len();
        if k == 0 || !len.is_multiple_of(k) {
            return Err(Error::NotDivisible { len, k });
        }
        let blocks = len / k;
        if i >= blocks {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: blocks,
            });
        }
        Ok(&self.bits[i * k..i * k + k])
    }

    pub fn hamming(&self, other: &BitString) -> Result<usize> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count())
    }

    /// Parses a string of `0`/`1` characters, ignoring ASCII whitespace so
    /// that grouped forms like `"111 011 011"` are accepted.
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_ascii_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidBit(other)),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_bits)
    }
}

/// Number of one-bits in a slice.
pub fn unitation(bits: &[bool]) -> usize {
    bits.iter().filter(|&&b| b).count()
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn unitation_examples() {
        assert_eq!(bs("111").unitation(), 3);
        assert_eq!(bs("000").unitation(), 0);
        assert_eq!(bs("011").unitation(), 2);
    }

    #[test]
    fn block_examples() {
        let x = bs("111011011");
        assert_eq!(x.block(1, 3).unwrap(), bs("011"));
        assert_eq!(x.block(0, 3).unwrap(), bs("111"));
        assert_eq!(bs("0").block(0, 1).unwrap(), bs("0"));
    }

    #[test]
    fn block_errors() {
        let x = bs("111011011");
        assert!(matches!(x.block(3, 3), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(x.block(0, 4), Err(Error::NotDivisible { .. })));
        assert!(matches!(x.block(0, 0), Err(Error::NotDivisible { .. })));
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(bs("000").hamming(&bs("000")).unwrap(), 0);
        assert_eq!(bs("111").hamming(&bs("000")).unwrap(), 3);
        assert_eq!(bs("1010").hamming(&bs("1001")).unwrap(), 2);
        assert!(matches!(
            bs("10").hamming(&bs("100")),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert_eq!(BitString::parse("10x"), Err(Error::InvalidBit('x')));
        assert_eq!(bs("111 011 011").len(), 9);
    }

    fn bitstring(len: usize) -> impl Strategy<Value = BitString> {
        prop::collection::vec(any::<bool>(), len).prop_map(BitString::from_bits)
    }

    proptest! {
        #[test]
        fn unitation_plus_complement_is_length(s in (0usize..64).prop_flat_map(bitstring)) {
            prop_assert_eq!(s.unitation() + s.complement().unitation(), s.len());
        }

        #[test]
        fn hamming_is_a_metric(
            (a, b, c) in (1usize..48).prop_flat_map(|n| (bitstring(n), bitstring(n), bitstring(n)))
        ) {
            let ab = a.hamming(&b).unwrap();
            prop_assert_eq!(ab, b.hamming(&a).unwrap());
            prop_assert_eq!(a.hamming(&a).unwrap(), 0);
            prop_assert_eq!(ab == 0, a == b);
            prop_assert!(ab <= a.hamming(&c).unwrap() + c.hamming(&b).unwrap());
        }

        #[test]
        fn display_parse_round_trip(s in (0usize..40).prop_flat_map(bitstring)) {
            prop_assert_eq!(BitString::parse(&s.to_string()).unwrap(), s);
        }
    }
}
