use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `⊗_k X^{x_k} Z^{z_k}` up to global phase. Composition is XOR of the bit
/// vectors, which is exact because phases are not tracked.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    x: Vec<bool>,
    z: Vec<bool>,
}

impl PauliString {
    pub fn new(x: Vec<bool>, z: Vec<bool>) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: z.len(),
            });
        }
        Ok(Self { x, z })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            x: vec![false; n],
            z: vec![false; n],
        }
    }

    pub fn x_string(bits: &[bool]) -> Self {
        Self {
            x: bits.to_vec(),
            z: vec![false; bits.len()],
        }
    }

    pub fn z_string(bits: &[bool]) -> Self {
        Self {
            x: vec![false; bits.len()],
            z: bits.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x_bits(&self) -> &[bool] {
        &self.x
    }

    pub fn z_bits(&self) -> &[bool] {
        &self.z
    }

    pub fn is_identity(&self) -> bool {
        !self.x.iter().chain(&self.z).any(|&b| b)
    }

    /// Product of two strings of equal length, up to phase.
    pub fn compose(&self, other: &PauliString) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        let xor = |a: &[bool], b: &[bool]| a.iter().zip(b).map(|(p, q)| p ^ q).collect();
        Ok(Self {
            x: xor(&self.x, &other.x),
            z: xor(&self.z, &other.z),
        })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (&x, &z) in self.x.iter().zip(&self.z) {
            let c = match (x, z) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
