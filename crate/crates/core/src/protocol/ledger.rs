//! Alice's private key material and the per-phase correction frames.
//!
//! Phases are numbered from 1 as in the protocol description; qubits use the
//! crate-wide 0-based index. Bits of phases before 1 and of qubits outside
//! the register read as 0, which makes qubit 0 and qubit `n-1` the chain
//! ends with a single CZ neighbour.

use serde::Serialize;

use crate::diagonal::DiagonalGate;
use crate::error::{Error, Result};
use crate::statevec::PauliString;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeyLedger {
    n: usize,
    /// `x[j-1][k]`: teleportation byproduct bits of phase `j`.
    x: Vec<Vec<bool>>,
    /// `z[j-1][k]`: pad bits left on qubit `k` after phase `j`.
    z: Vec<Vec<bool>>,
}

impl KeyLedger {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            x: Vec::new(),
            z: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of phases recorded so far.
    pub fn phases(&self) -> usize {
        self.x.len()
    }

    /// Grows the ledger to cover phase `j`, filling with zeros.
    fn ensure(&mut self, j: usize) {
        while self.x.len() < j {
            self.x.push(vec![false; self.n]);
            self.z.push(vec![false; self.n]);
        }
    }

    /// Records the byproduct and pad bits of qubit `k` in phase `j ≥ 1`.
    pub fn record(&mut self, j: usize, k: usize, x: bool, z: bool) -> Result<()> {
        if j == 0 || k >= self.n {
            return Err(Error::QubitRange {
                index: k,
                num_qubits: self.n,
            });
        }
        self.ensure(j);
        self.x[j - 1][k] = x;
        self.z[j - 1][k] = z;
        Ok(())
    }

    /// Records a whole phase at once.
    pub fn record_phase(&mut self, j: usize, x: &[bool], z: &[bool]) -> Result<()> {
        if x.len() != self.n || z.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len().min(z.len()),
            });
        }
        for k in 0..self.n {
            self.record(j, k, x[k], z[k])?;
        }
        Ok(())
    }

    fn bit(table: &[Vec<bool>], n: usize, j: i64, k: i64) -> bool {
        if j < 1 || k < 0 || k >= n as i64 {
            return false;
        }
        table.get(j as usize - 1).is_some_and(|row| row[k as usize])
    }

    /// `x_{j,k}`, zero outside the recorded range.
    pub fn x(&self, j: i64, k: i64) -> bool {
        Self::bit(&self.x, self.n, j, k)
    }

    /// `z_{j,k}`, zero outside the recorded range.
    pub fn z(&self, j: i64, k: i64) -> bool {
        Self::bit(&self.z, self.n, j, k)
    }

    /// `X̄_j = ⊗_k X^{x_{j,k}}`.
    pub fn x_string(&self, j: i64) -> PauliString {
        PauliString::x_string(&(0..self.n as i64).map(|k| self.x(j, k)).collect::<Vec<_>>())
    }

    /// `Z̄_j = ⊗_k Z^{z_{j,k}}`.
    pub fn z_string(&self, j: i64) -> PauliString {
        PauliString::z_string(&(0..self.n as i64).map(|k| self.z(j, k)).collect::<Vec<_>>())
    }

    /// Bits `z_{j,·}`.
    pub fn z_bits(&self, j: usize) -> Vec<bool> {
        (0..self.n as i64).map(|k| self.z(j as i64, k)).collect()
    }

    /// The correction frame `(χ_{j,k}, ζ_{j,k})` for qubit `k` in phase `j`
    /// of the protocol with CZ layers before odd phases.
    ///
    /// Even `j`: `χ = z_{j-1,k}`,
    /// `ζ = z_{j-2,k} + x_{j-1,k} + Σ_{t=±1} (z_{j-3,k+t} + x_{j-2,k+t})`.
    /// Odd `j`: `χ = z_{j-1,k} + Σ_{t=±1} (z_{j-2,k+t} + x_{j-1,k+t})`,
    /// `ζ = z_{j-2,k} + x_{j-1,k}`. All sums are mod 2.
    pub fn frame_bits(&self, j: usize, k: usize) -> (bool, bool) {
        let (j, k) = (j as i64, k as i64);
        let neighbours = |f: &dyn Fn(i64) -> bool| f(k - 1) ^ f(k + 1);
        if j % 2 == 0 {
            let chi = self.z(j - 1, k);
            let zeta = self.z(j - 2, k)
                ^ self.x(j - 1, k)
                ^ neighbours(&|q| self.z(j - 3, q) ^ self.x(j - 2, q));
            (chi, zeta)
        } else {
            let chi = self.z(j - 1, k) ^ neighbours(&|q| self.z(j - 2, q) ^ self.x(j - 1, q));
            let zeta = self.z(j - 2, k) ^ self.x(j - 1, k);
            (chi, zeta)
        }
    }

    /// `(χ, ζ)` for the qubits `first..first + m` of phase `j`.
    pub fn frame(&self, j: usize, first: usize, m: usize) -> (Vec<bool>, Vec<bool>) {
        (first..first + m).map(|k| self.frame_bits(j, k)).unzip()
    }

    /// The correction `f_{j,p}(D)` for the block starting at `first`.
    pub fn correct(&self, j: usize, first: usize, gate: &DiagonalGate) -> Result<DiagonalGate> {
        let (chi, zeta) = self.frame(j, first, gate.m());
        gate.apply_correction_frame(&chi, &zeta)
    }

    /// Correction for the variant with `m = n` and no CZ layers:
    /// `f_j(D) = H̄Z̄_{j-1}H̄ · D · Z̄_{j-2} H̄X̄_{j-1}Z̄_{j-1}H̄`, which is the
    /// frame `χ = z_{j-1}`, `ζ = z_{j-2} + x_{j-1}`.
    pub fn simplified_correct(&self, j: usize, gate: &DiagonalGate) -> Result<DiagonalGate> {
        if gate.m() != self.n {
            return Err(Error::GateSize {
                expected: self.n,
                found: gate.m(),
            });
        }
        let j = j as i64;
        let chi: Vec<bool> = (0..self.n as i64).map(|k| self.z(j - 1, k)).collect();
        let zeta: Vec<bool> = (0..self.n as i64)
            .map(|k| self.z(j - 2, k) ^ self.x(j - 1, k))
            .collect();
        gate.apply_correction_frame(&chi, &zeta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_ledger_gives_trivial_frames() {
        let ledger = KeyLedger::new(4);
        for j in 2..8 {
            for k in 0..4 {
                assert_eq!(ledger.frame_bits(j, k), (false, false));
            }
        }
    }

    #[test]
    fn even_phase_chi_from_previous_pad() {
        let mut ledger = KeyLedger::new(3);
        ledger.record(1, 1, false, true).unwrap();
        assert_eq!(ledger.frame_bits(2, 1), (true, false));
        assert_eq!(ledger.frame_bits(2, 0), (false, false));
    }

    #[test]
    fn odd_phase_neighbour_term() {
        let mut ledger = KeyLedger::new(3);
        ledger.record(1, 0, false, false).unwrap();
        ledger.record(2, 2, true, false).unwrap();
        // x_{2,k+1} with k = 1
        assert_eq!(ledger.frame_bits(3, 1), (true, false));
        // the same bit is the on-site ζ term for k = 2
        assert_eq!(ledger.frame_bits(3, 2), (false, true));
        assert_eq!(ledger.frame_bits(3, 0), (false, false));
    }

    #[test]
    fn even_phase_second_neighbour_terms() {
        let mut ledger = KeyLedger::new(3);
        ledger.record(1, 0, false, true).unwrap(); // z_{1,0}
        ledger.record(2, 2, true, false).unwrap(); // x_{2,2}

        // j = 4: ζ_k includes z_{1,k±1} and x_{2,k±1}
        assert_eq!(ledger.frame_bits(4, 1), (false, false));
        let mut only_z = KeyLedger::new(3);
        only_z.record(1, 0, false, true).unwrap();
        assert_eq!(only_z.frame_bits(4, 1), (false, true));
        assert_eq!(only_z.frame_bits(4, 2), (false, false));
    }

    #[test]
    fn out_of_range_reads_zero() {
        let mut ledger = KeyLedger::new(2);
        ledger
            .record_phase(1, &[true, true], &[true, true])
            .unwrap();
        assert!(!ledger.x(0, 0));
        assert!(!ledger.z(-1, 0));
        assert!(!ledger.z(1, 2));
        assert!(!ledger.z(1, -1));
        assert!(!ledger.z(5, 0));
        assert!(ledger.record(0, 0, true, true).is_err());
        assert!(ledger.record(1, 2, true, true).is_err());
    }

    #[test]
    fn simplified_frame_examples() {
        let d = DiagonalGate::new(2, 2, vec![0, 1, 3, 2]).unwrap();
        let ledger = KeyLedger::new(2);
        assert_eq!(ledger.simplified_correct(3, &d).unwrap(), d);

        let mut ledger = KeyLedger::new(2);
        ledger.record(1, 1, false, true).unwrap();
        let z = ledger
            .simplified_correct(3, &DiagonalGate::identity(2))
            .unwrap();
        assert_eq!(z, DiagonalGate::new(2, 1, vec![0, 1, 0, 0]).unwrap());
    }
}
