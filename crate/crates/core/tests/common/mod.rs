//! Dense-matrix reference implementations, written independently of the
//! library's bit-level routines.
#![allow(dead_code)]

use std::path::PathBuf;

use iterblind::protocol::Program;
use iterblind::{DiagonalGate, StateVector};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type Mat = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(dim: usize) -> Mat {
    Mat::identity(dim, dim)
}

pub fn pauli_x() -> Mat {
    Mat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
}

pub fn pauli_z() -> Mat {
    Mat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)])
}

pub fn hadamard() -> Mat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Mat::from_row_slice(2, 2, &[c(h), c(h), c(h), c(-h)])
}

/// Kronecker product of single-qubit factors, qubit 0 first.
pub fn kron_all(factors: impl IntoIterator<Item = Mat>) -> Mat {
    factors
        .into_iter()
        .fold(identity(1), |acc, f| acc.kronecker(&f))
}

pub fn x_string(bits: &[bool]) -> Mat {
    kron_all(
        bits.iter()
            .map(|&b| if b { pauli_x() } else { identity(2) }),
    )
}

pub fn z_string(bits: &[bool]) -> Mat {
    kron_all(
        bits.iter()
            .map(|&b| if b { pauli_z() } else { identity(2) }),
    )
}

pub fn hadamard_all(n: usize) -> Mat {
    kron_all((0..n).map(|_| hadamard()))
}

/// Product of CZ on every neighbouring pair.
pub fn cz_ladder(n: usize) -> Mat {
    let dim = 1 << n;
    let mut out = identity(dim);
    for i in 0..n.saturating_sub(1) {
        let mut cz = identity(dim);
        for b in 0..dim {
            let bit = |q: usize| (b >> (n - 1 - q)) & 1;
            if bit(i) == 1 && bit(i + 1) == 1 {
                cz[(b, b)] = c(-1.0);
            }
        }
        out = cz * out;
    }
    out
}

/// Bits of `j` over `m` qubits, qubit 0 most significant.
pub fn bits(j: usize, m: usize) -> Vec<bool> {
    (0..m).map(|q| (j >> (m - 1 - q)) & 1 == 1).collect()
}

/// `exp(i Σ_j θ_j Z-string(j))` via the matrix exponential.
pub fn gate_matrix(gate: &DiagonalGate) -> Mat {
    let m = gate.m();
    let scale = std::f64::consts::PI / 2f64.powi(gate.level() as i32);
    let generator = gate
        .numerators()
        .iter()
        .enumerate()
        .fold(Mat::zeros(1 << m, 1 << m), |acc, (j, &r)| {
            acc + z_string(&bits(j, m)) * c(r as f64 * scale)
        });
    (generator * Complex64::i()).exp()
}

/// `gate` on qubits `first..first+m` of an `n`-qubit register.
pub fn embed(gate: &Mat, first: usize, n: usize) -> Mat {
    let m = gate.nrows().trailing_zeros() as usize;
    identity(1 << first)
        .kronecker(gate)
        .kronecker(&identity(1 << (n - first - m)))
}

pub fn vector(state: &StateVector) -> DVector<Complex64> {
    DVector::from_column_slice(state.amplitudes())
}

/// `|⟨a|b⟩|²` for normalised vectors.
pub fn overlap(a: &DVector<Complex64>, b: &DVector<Complex64>) -> f64 {
    a.dotc(b).norm_sqr()
}

/// Whether `a = e^{iα} b` for some `α`, entrywise within `tol`.
pub fn equal_up_to_phase(a: &Mat, b: &Mat, tol: f64) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    let Some((idx, _)) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
    else {
        return true;
    };
    let phase = a.as_slice()[idx] / b.as_slice()[idx];
    if (phase.norm() - 1.0).abs() > tol {
        return false;
    }
    a.iter()
        .zip(b.iter())
        .all(|(x, y)| (x - y * phase).norm() <= tol)
}

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> Program {
    let text = std::fs::read_to_string(fixtures_dir().join(name)).expect("fixture exists");
    Program::from_json(&text).expect("fixture parses")
}

/// The acceptance fixtures: n ∈ {1,2,3}, m ∈ {1,n}, x = 2, J ∈ {2,4}.
pub fn acceptance_fixtures() -> Vec<(String, Program)> {
    let mut out = Vec::new();
    for n in 1..=3 {
        let mut ms = vec![1, n];
        ms.dedup();
        for m in ms {
            for j in [2, 4] {
                let name = format!("n{n}_m{m}_j{j}.json");
                out.push((name.clone(), fixture(&name)));
            }
        }
    }
    out
}
