use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A 0/1 value per variable. Index `i` is qubit `i`; in the canonical
/// counting order qubit 0 is the most significant bit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Assignment { bits: vec![false; n] }
    }

    /// Assignment number `index` in canonical counting order over `n` qubits.
    pub fn from_index(index: u64, n: usize) -> Self {
        Assignment {
            bits: (0..n).map(|i| bit_of(index, n, i)).collect(),
        }
    }

    pub fn index(&self) -> u64 {
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn flipped(&self, i: usize) -> Self {
        let mut bits = self.bits.clone();
        bits[i] = !bits[i];
        Assignment { bits }
    }
}

/// Value of qubit `i` within canonical index `index` over `n` qubits.
#[inline]
pub fn bit_of(index: u64, n: usize, i: usize) -> bool {
    (index >> (n - 1 - i)) & 1 == 1
}

/// `n`-character ket label of `index`, e.g. `011`.
pub fn ket_label(index: u64, n: usize) -> String {
    (0..n).map(|i| if bit_of(index, n, i) { '1' } else { '0' }).collect()
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Assignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Domain(format!("`{other}` is not a bit"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Assignment::new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip_msb_first() {
        let a: Assignment = "011".parse().unwrap();
        assert_eq!(a.index(), 3);
        assert_eq!(Assignment::from_index(6, 3).to_string(), "110");
        assert_eq!(ket_label(1, 3), "001");
        for idx in 0..16 {
            assert_eq!(Assignment::from_index(idx, 4).index(), idx);
        }
    }

    #[test]
    fn rejects_non_bits() {
        assert!("012".parse::<Assignment>().is_err());
    }
}
