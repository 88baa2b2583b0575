//! Exact algebra of dyadic diagonal gates.
//!
//! A gate on `m` qubits at level `L` is `exp(i Σ_j θ_j Z^{j_0} ⊗ … ⊗ Z^{j_{m-1}})`
//! with `θ_j = r_j·π/2^L`. The integer numerators `r_j` are stored in a table
//! indexed by the Z-string pattern `j ∈ {0,1}^m`, using the crate-wide bit
//! order (qubit 0 is the most significant bit of `j`).
//!
//! Two representations are used:
//!
//! * the θ-table `r_j mod 2^L`, with the global-phase entry `r_0` pinned to 0
//!   (shifting any `θ_j` by `π` only multiplies the gate by `-1`);
//! * the phase vector `φ(b) = Σ_j r_j (-1)^{j·b} mod 2^{L+1}`, the diagonal
//!   entry on `|b⟩` in units of `π/2^L`.
//!
//! The θ-table is what the protocols manipulate and serialise. Note that the
//! table-to-operator map is not injective for `m ≥ 2` (for example
//! `Z_0·Z_1·(Z_0Z_1) = I`), so "same table" is stronger than "same operator";
//! [`DiagonalGate::same_operator`] compares phase vectors instead.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::MAX_QUBITS;

/// Highest supported level; phase vectors live in `u128` arithmetic mod `2^{L+1}`.
pub const MAX_LEVEL: u32 = 120;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "GateRecord", into = "GateRecord")]
pub struct DiagonalGate {
    m: usize,
    level: u32,
    numerators: Vec<u128>,
}

/// Wire form of a gate: `numerators` has `2^m` entries indexed by Z-string
/// pattern, first qubit most significant. Entry 0 is the global phase term
/// and is discarded on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateRecord {
    pub m: usize,
    pub level: u32,
    pub numerators: Vec<u128>,
}

fn mask(bits: u32) -> u128 {
    if bits >= 128 {
        u128::MAX
    } else {
        (1u128 << bits) - 1
    }
}

fn parity(v: usize) -> bool {
    v.count_ones() % 2 == 1
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 || m > MAX_QUBITS {
        return Err(Error::QubitCap {
            requested: m,
            cap: MAX_QUBITS,
        });
    }
    Ok(())
}

fn check_level(level: u32) -> Result<()> {
    if level > MAX_LEVEL {
        return Err(Error::LevelCap {
            level,
            max: MAX_LEVEL,
        });
    }
    Ok(())
}

fn bits_mask(bits: &[bool]) -> usize {
    crate::statevec::bits_to_index(bits)
}

impl DiagonalGate {
    /// Builds a gate from a full `2^m` numerator table. Entries must lie in
    /// `0..2^level`; entry 0 is dropped.
    pub fn new(m: usize, level: u32, numerators: Vec<u128>) -> Result<Self> {
        check_m(m)?;
        check_level(level)?;
        if numerators.len() != 1 << m {
            return Err(Error::DimensionMismatch {
                expected: 1 << m,
                found: numerators.len(),
            });
        }
        if let Some(&bad) = numerators.iter().find(|&&r| r > mask(level)) {
            return Err(Error::Domain(format!(
                "numerator {bad} outside 0..2^{level}"
            )));
        }
        let mut numerators = numerators;
        numerators[0] = 0;
        Ok(Self {
            m,
            level,
            numerators,
        })
    }

    /// Builds a gate from arbitrary integers, reducing them mod `2^level`.
    pub fn from_reduced(m: usize, level: u32, numerators: Vec<u128>) -> Result<Self> {
        let reduced = numerators.into_iter().map(|r| r & mask(level)).collect();
        Self::new(m, level, reduced)
    }

    pub fn identity(m: usize) -> Self {
        assert!((1..=MAX_QUBITS).contains(&m), "identity gate on {m} qubits");
        Self {
            m,
            level: 0,
            numerators: vec![0; 1 << m],
        }
    }

    /// Uniformly random table at the given level.
    pub fn random<R: Rng + ?Sized>(m: usize, level: u32, rng: &mut R) -> Result<Self> {
        check_m(m)?;
        check_level(level)?;
        let numerators = (0..1usize << m)
            .map(|j| {
                if j == 0 {
                    0
                } else {
                    rng.random::<u128>() & mask(level)
                }
            })
            .collect();
        Ok(Self {
            m,
            level,
            numerators,
        })
    }

    /// Every canonical table at `(m, level)`, in lexicographic order.
    pub fn enumerate(m: usize, level: u32) -> Result<Vec<Self>> {
        check_m(m)?;
        let terms = (1u32 << m) - 1;
        let total_bits = terms as u64 * level as u64;
        if total_bits > 20 {
            return Err(Error::EnumerationCap {
                required: 1u128 << total_bits.min(127),
                cap: 1 << 20,
            });
        }
        let count = 1usize << total_bits;
        Ok((0..count)
            .map(|code| {
                let mut numerators = vec![0u128; 1 << m];
                for (j, r) in numerators.iter_mut().enumerate().skip(1) {
                    *r = ((code >> ((j - 1) as u32 * level)) as u128) & mask(level);
                }
                Self {
                    m,
                    level,
                    numerators,
                }
            })
            .collect())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Full numerator table (entry 0 is always 0).
    pub fn numerators(&self) -> &[u128] {
        &self.numerators
    }

    pub fn is_identity(&self) -> bool {
        self.numerators.iter().all(|&r| r == 0)
    }

    /// Diagonal entry on `|b⟩` as a numerator of `π/2^L`, reduced mod `2^{L+1}`.
    pub fn phase_numerator(&self, b: usize) -> u128 {
        let sum = self
            .numerators
            .iter()
            .enumerate()
            .fold(0u128, |acc, (j, &r)| {
                if parity(j & b) {
                    acc.wrapping_sub(r)
                } else {
                    acc.wrapping_add(r)
                }
            });
        sum & mask(self.level + 1)
    }

    /// `φ(b)` for every basis state.
    pub fn phase_vector(&self) -> Vec<u128> {
        (0..1usize << self.m)
            .map(|b| self.phase_numerator(b))
            .collect()
    }

    /// Recovers a θ-table from a phase vector given mod `2^{level+1}` in units
    /// of `π/2^level`. The inverse Walsh transform is exact at level
    /// `level + m`; the result is then normalised. Additive constants in the
    /// phases are global phase and are lost.
    pub fn from_phase_vector(m: usize, level: u32, phases: &[u128]) -> Result<Self> {
        check_m(m)?;
        let lifted = level + m as u32;
        check_level(lifted)?;
        if phases.len() != 1 << m {
            return Err(Error::DimensionMismatch {
                expected: 1 << m,
                found: phases.len(),
            });
        }
        let numerators = (0..1usize << m)
            .map(|j| {
                let r = phases.iter().enumerate().fold(0u128, |acc, (b, &p)| {
                    let p = p & mask(level + 1);
                    if parity(j & b) {
                        acc.wrapping_sub(p)
                    } else {
                        acc.wrapping_add(p)
                    }
                });
                if j == 0 {
                    0
                } else {
                    r & mask(lifted)
                }
            })
            .collect();
        Ok(Self {
            m,
            level: lifted,
            numerators,
        }
        .normalized())
    }

    /// `exp(iπ φ(b)/2^L)` for every `b`.
    pub fn to_unitary_diag(&self) -> Vec<Complex64> {
        let scale = std::f64::consts::PI / 2f64.powi(self.level as i32);
        self.phase_vector()
            .into_iter()
            .map(|p| Complex64::from_polar(1.0, p as f64 * scale))
            .collect()
    }

    /// Smallest level at which this table is exactly representable.
    pub fn normalized(&self) -> Self {
        let mut out = self.clone();
        while out.level > 0 && out.numerators.iter().all(|r| r % 2 == 0) {
            out.numerators.iter_mut().for_each(|r| *r >>= 1);
            out.level -= 1;
        }
        out
    }

    /// Whether the table belongs to `𝒟_{m,t}`.
    pub fn is_member(&self, t: u32) -> bool {
        t >= self.level
            || self
                .numerators
                .iter()
                .all(|&r| r & mask(self.level - t) == 0)
    }

    /// Re-expresses the same table at level `t`.
    pub fn with_level(&self, t: u32) -> Result<Self> {
        check_level(t)?;
        if t >= self.level {
            let shift = t - self.level;
            let numerators = self.numerators.iter().map(|&r| r << shift).collect();
            return Ok(Self {
                m: self.m,
                level: t,
                numerators,
            });
        }
        if !self.is_member(t) {
            return Err(Error::LevelOverflow {
                level: self.normalized().level,
                target: t,
            });
        }
        let shift = self.level - t;
        let numerators = self.numerators.iter().map(|&r| r >> shift).collect();
        Ok(Self {
            m: self.m,
            level: t,
            numerators,
        })
    }

    fn check_bits(&self, bits: &[bool]) -> Result<usize> {
        if bits.len() != self.m {
            return Err(Error::GateSize {
                expected: self.m,
                found: bits.len(),
            });
        }
        Ok(bits_mask(bits))
    }

    fn check_same_m(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::GateSize {
                expected: self.m,
                found: other.m,
            });
        }
        Ok(())
    }

    /// `X̄_a D X̄_a D†`, exactly one level lower.
    ///
    /// Conjugating by `X̄_a` negates `θ_j` when `j·a` is odd, so the product
    /// keeps only those terms with angle `-2θ_j = -r_j·π/2^{L-1}`.
    pub fn conjugate_update(&self, a: &[bool]) -> Result<Self> {
        let a = self.check_bits(a)?;
        if self.level == 0 {
            return Ok(Self::identity(self.m));
        }
        let level = self.level - 1;
        let numerators = self
            .numerators
            .iter()
            .enumerate()
            .map(|(j, &r)| {
                if parity(j & a) {
                    r.wrapping_neg() & mask(level)
                } else {
                    0
                }
            })
            .collect();
        Ok(Self {
            m: self.m,
            level,
            numerators,
        })
    }

    /// `(⊗X^{χ}) D (⊗Z^{ζ}X^{χ})`, which is again diagonal:
    /// `φ'(b) = φ(b⊕χ) + π ζ·(b⊕χ)`.
    pub fn apply_correction_frame(&self, chi: &[bool], zeta: &[bool]) -> Result<Self> {
        let chi = self.check_bits(chi)?;
        let zeta = self.check_bits(zeta)?;
        let level = if zeta != 0 {
            self.level.max(1)
        } else {
            self.level
        };
        let mut out = self.with_level(level)?;
        for (j, r) in out.numerators.iter_mut().enumerate() {
            if parity(j & chi) {
                *r = r.wrapping_neg() & mask(level);
            }
        }
        if zeta != 0 {
            // Z^ζ = exp(iπ/2 Z^ζ) up to phase
            let r = &mut out.numerators[zeta];
            *r = r.wrapping_add(1u128 << (level - 1)) & mask(level);
        }
        Ok(out)
    }

    /// Operator product; levels are promoted to the larger one.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_same_m(other)?;
        let level = self.level.max(other.level);
        let (a, b) = (self.with_level(level)?, other.with_level(level)?);
        let numerators = a
            .numerators
            .iter()
            .zip(&b.numerators)
            .map(|(x, y)| x.wrapping_add(*y) & mask(level))
            .collect();
        Ok(Self {
            m: self.m,
            level,
            numerators,
        })
    }

    pub fn dagger(&self) -> Self {
        let numerators = self
            .numerators
            .iter()
            .map(|r| r.wrapping_neg() & mask(self.level))
            .collect();
        Self {
            m: self.m,
            level: self.level,
            numerators,
        }
    }

    /// Equality as operators up to global phase.
    pub fn same_operator(&self, other: &Self) -> bool {
        if self.m != other.m {
            return false;
        }
        let level = self.level.max(other.level);
        let (Ok(a), Ok(b)) = (self.with_level(level), other.with_level(level)) else {
            return false;
        };
        let (pa, pb) = (a.phase_vector(), b.phase_vector());
        let offset = pa[0].wrapping_sub(pb[0]);
        pa.iter()
            .zip(&pb)
            .all(|(x, y)| x.wrapping_sub(*y) & mask(level + 1) == offset & mask(level + 1))
    }
}

/// Table equality after lifting both sides to a common level.
impl PartialEq for DiagonalGate {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        a.m == b.m && a.level == b.level && a.numerators == b.numerators
    }
}

impl Eq for DiagonalGate {}

impl fmt::Display for DiagonalGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D[m={}, L={}](", self.m, self.level)?;
        let mut first = true;
        for (j, &r) in self.numerators.iter().enumerate().filter(|(_, &r)| r != 0) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(
                f,
                "{r}·Z{}",
                crate::statevec::bit_string(&crate::statevec::index_to_bits(j, self.m))
            )?;
        }
        if first {
            write!(f, "I")?;
        }
        write!(f, ")")
    }
}

impl TryFrom<GateRecord> for DiagonalGate {
    type Error = Error;

    fn try_from(rec: GateRecord) -> Result<Self> {
        DiagonalGate::new(rec.m, rec.level, rec.numerators)
    }
}

impl From<DiagonalGate> for GateRecord {
    fn from(g: DiagonalGate) -> Self {
        GateRecord {
            m: g.m,
            level: g.level,
            numerators: g.numerators,
        }
    }
}
