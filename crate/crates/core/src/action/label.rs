use std::fmt;

use crate::error::{Error, Result};

/// Finite bit prefix of a point of `{0,1}^ℕ`, i.e. the cylinder it lies in.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LabelWord {
    bits: Vec<bool>,
}

impl LabelWord {
    pub fn new(bits: Vec<bool>) -> Self {
        LabelWord { bits }
    }

    pub fn zeros(k: usize) -> Self {
        LabelWord {
            bits: vec![false; k],
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, j: usize) -> bool {
        self.bits[j]
    }

    /// First `n` bits packed big-endian (bit 0 is the most significant), so
    /// integer order matches lexicographic order among equal lengths.
    pub fn prefix(&self, n: usize) -> u64 {
        debug_assert!(n <= 64 && n <= self.bits.len());
        self.bits[..n]
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
    }

    /// Padded or truncated to `k` bits; padding is zeros.
    pub fn resized(&self, k: usize) -> LabelWord {
        let mut bits = self.bits.clone();
        bits.resize(k, false);
        LabelWord { bits }
    }

    pub fn from_prefix(packed: u64, n: usize) -> LabelWord {
        LabelWord {
            bits: (0..n).map(|j| (packed >> (n - 1 - j)) & 1 == 1).collect(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::input(format!("label '{s}' is not a bit string"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(LabelWord::new)
    }
}

impl fmt::Display for LabelWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Formats the low `n` bits of a packed prefix.
pub(crate) fn packed_to_string(packed: u64, n: usize) -> String {
    LabelWord::from_prefix(packed, n).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_packing() {
        let w = LabelWord::parse("1011").unwrap();
        assert_eq!(w.prefix(0), 0);
        assert_eq!(w.prefix(2), 0b10);
        assert_eq!(w.prefix(4), 0b1011);
        assert_eq!(LabelWord::from_prefix(0b101, 3).to_string(), "101");
        assert_eq!(w.resized(6).to_string(), "101100");
        assert!(LabelWord::parse("102").is_err());
    }
}
