//! Bob's view averaged over Alice's keys and his own outcomes.
//!
//! Every leaf of the choice tree contributes the tensor product of all
//! quantum messages Alice sent, weighted by its probability. Pads are
//! uniform, so the weighted sum is exactly the density matrix Bob holds
//! without the key. A blind protocol makes it `I/d` whatever the gate.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::diagonal::DiagonalGate;
use crate::error::{Error, Result};
use crate::explore::{explore, explore_steps, PadMode};
use crate::protocol::{blind_teleport_gate, branch_bits, Program, Session, Transcript};
use crate::statevec::StateVector;

/// Largest joint view, in qubits, that will be accumulated.
pub const MAX_VIEW_QUBITS: usize = 10;
/// Largest number of leaves that will be enumerated for one view.
pub const MAX_VIEW_LEAVES: u64 = 1 << 20;
/// Convergence tolerance handed to the Hermitian eigensolver.
pub const EIGEN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct ViewDensity {
    pub matrix: DMatrix<Complex64>,
    pub qubits: usize,
    pub leaves: u64,
}

pub fn maximally_mixed(qubits: usize) -> DMatrix<Complex64> {
    let dim = 1usize << qubits;
    DMatrix::identity(dim, dim) / Complex64::from(dim as f64)
}

/// Half the sum of the absolute eigenvalues of `a − b`, both Hermitian.
pub fn trace_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Result<f64> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    let eigen = SymmetricEigen::try_new(a - b, EIGEN_TOLERANCE, 0)
        .ok_or_else(|| Error::Domain("eigensolver did not converge".into()))?;
    Ok(0.5 * eigen.eigenvalues.iter().map(|v| v.abs()).sum::<f64>())
}

/// Tensor product of every quantum message in the transcript, in order.
fn joint_messages(transcript: &Transcript) -> DVector<Complex64> {
    transcript
        .quantum_payloads()
        .fold(DVector::from_element(1, Complex64::from(1.0)), |acc, s| {
            acc.kronecker(&DVector::from_column_slice(s.amplitudes()))
        })
}

struct Accumulator {
    matrix: Option<DMatrix<Complex64>>,
    error: Option<Error>,
}

impl Accumulator {
    fn new() -> Self {
        Self {
            matrix: None,
            error: None,
        }
    }

    fn add(&mut self, weight: f64, transcript: &Transcript) {
        let phi = joint_messages(transcript);
        let dim = phi.len();
        let rho = self.matrix.get_or_insert_with(|| DMatrix::zeros(dim, dim));
        if rho.nrows() != dim {
            self.error.get_or_insert(Error::DimensionMismatch {
                expected: rho.nrows(),
                found: dim,
            });
            return;
        }
        rho.gerc(Complex64::from(weight), &phi, &phi, Complex64::from(1.0));
    }

    fn finish(self, leaves: u64) -> Result<ViewDensity> {
        if let Some(e) = self.error {
            return Err(e);
        }
        let matrix = self
            .matrix
            .ok_or_else(|| Error::Protocol("no leaves".into()))?;
        Ok(ViewDensity {
            qubits: matrix.nrows().trailing_zeros() as usize,
            matrix,
            leaves,
        })
    }
}

/// Bob's averaged view of blind iterated teleportation of `gate` over
/// `rounds` rounds into the register `psi`.
pub fn iterated_view_density(
    gate: &DiagonalGate,
    rounds: u32,
    psi: &StateVector,
) -> Result<ViewDensity> {
    let qubits = gate.m() * rounds as usize;
    if qubits > MAX_VIEW_QUBITS {
        return Err(Error::QubitCap {
            requested: qubits,
            cap: MAX_VIEW_QUBITS,
        });
    }
    let mut acc = Accumulator::new();
    let leaves = explore(
        PadMode::Enumerate,
        MAX_VIEW_LEAVES,
        |tape| blind_teleport_gate(gate, rounds, psi, tape),
        |w, run| acc.add(w, &run.transcript),
    )?;
    acc.finish(leaves)
}

/// Trace distance between Bob's averaged view of blind iterated
/// teleportation of `gate` and the maximally mixed state, with Bob's
/// register starting in `|0⟩`.
pub fn blindness_distance(gate: &DiagonalGate, rounds: u32) -> Result<f64> {
    let view = iterated_view_density(gate, rounds, &StateVector::zero(gate.m())?)?;
    trace_distance(&view.matrix, &maximally_mixed(view.qubits))
}

/// Bob's averaged view of every quantum message of a blind program run,
/// enumerating all pads and all teleportation outcomes.
pub fn program_view_density(program: &Program) -> Result<ViewDensity> {
    let (pads, outcomes) = branch_bits(program);
    let qubits = pads as usize;
    if qubits > MAX_VIEW_QUBITS {
        return Err(Error::QubitCap {
            requested: qubits,
            cap: MAX_VIEW_QUBITS,
        });
    }
    if pads + outcomes > 20 {
        return Err(Error::EnumerationCap {
            required: 1 << (pads + outcomes),
            cap: MAX_VIEW_LEAVES as u128,
        });
    }
    let mut acc = Accumulator::new();
    let leaves = explore_steps(
        PadMode::Enumerate,
        MAX_VIEW_LEAVES,
        Session::new(program.clone(), false),
        |s, tape| s.step(tape),
        |w, s| acc.add(w, s.transcript()),
    )?;
    acc.finish(leaves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trace_distance_of_orthogonal_pure_states() {
        let zero = StateVector::zero(1).unwrap();
        let one = StateVector::basis(1, 1).unwrap();
        let proj = |s: &StateVector| {
            let v = DVector::from_column_slice(s.amplitudes());
            &v * v.adjoint()
        };
        assert!((trace_distance(&proj(&zero), &proj(&one)).unwrap() - 1.0).abs() < 1e-12);
        assert!((trace_distance(&proj(&zero), &maximally_mixed(1)).unwrap() - 0.5).abs() < 1e-12);
        assert!(trace_distance(&proj(&zero), &maximally_mixed(2)).is_err());
    }

    #[test]
    fn single_round_view_is_mixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let gate = DiagonalGate::random(1, 1, &mut rng).unwrap();
            assert!(blindness_distance(&gate, 1).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn unpadded_messages_would_be_distinguishable() {
        // The plain protocol's first message is D|+⟩ itself, a pure state.
        let gate = DiagonalGate::new(1, 2, vec![0, 1]).unwrap();
        let psi = StateVector::zero(1).unwrap();
        let mut acc = Accumulator::new();
        let leaves = explore(
            PadMode::Enumerate,
            64,
            |tape| crate::protocol::teleport_gate(&gate, 2, &psi, tape, false),
            |w, run| acc.add(w, &run.transcript),
        )
        .unwrap();
        let view = acc.finish(leaves).unwrap();
        assert!(trace_distance(&view.matrix, &maximally_mixed(2)).unwrap() > 0.1);
    }

    #[test]
    fn view_size_cap() {
        let gate = DiagonalGate::identity(3);
        assert!(matches!(
            blindness_distance(&gate, 4),
            Err(Error::QubitCap { .. })
        ));
    }
}
