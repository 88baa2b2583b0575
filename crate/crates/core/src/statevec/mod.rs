//! Dense statevector backend.
//!
//! Qubits are addressed by 0-based index and qubit 0 is the most significant
//! bit of the basis index, so `|b_0 b_1 … b_{q-1}⟩` has index
//! `b_0·2^{q-1} + … + b_{q-1}`. The same convention is used for measurement
//! outcomes, Pauli strings, diagonal gate tables and the CZ ladder.
//!
//! Every operation takes `&self` and returns a new state. Global phase is
//! never tracked; compare states with [`fidelity_up_to_phase`].

mod pauli;

pub use pauli::PauliString;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Largest register the backend will allocate (4096 amplitudes).
pub const MAX_QUBITS: usize = 12;

/// Branches whose probability does not exceed this are treated as impossible.
const ZERO_PROBABILITY: f64 = 1e-20;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// One outcome of a projective measurement together with its Born weight and
/// the renormalised post-measurement state on the unmeasured qubits.
#[derive(Debug, Clone)]
pub struct MeasurementBranch {
    pub bits: Vec<bool>,
    pub probability: f64,
    pub state: StateVector,
}

/// Packs bits into an integer, first bit most significant.
pub fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Inverse of [`bits_to_index`] for a fixed width.
pub fn index_to_bits(index: usize, width: usize) -> Vec<bool> {
    (0..width)
        .map(|k| (index >> (width - 1 - k)) & 1 == 1)
        .collect()
}

/// Renders bits as a `0`/`1` string.
pub fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn check_cap(q: usize) -> Result<()> {
    if q == 0 || q > MAX_QUBITS {
        return Err(Error::QubitCap {
            requested: q,
            cap: MAX_QUBITS,
        });
    }
    Ok(())
}

impl StateVector {
    /// `|0…0⟩` on `q` qubits.
    pub fn zero(q: usize) -> Result<Self> {
        Self::basis(q, 0)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(q: usize, index: usize) -> Result<Self> {
        check_cap(q)?;
        let dim = 1usize << q;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits: q,
            amplitudes,
        })
    }

    /// Uniform superposition `|+⟩^{⊗q}`.
    pub fn init_plus(q: usize) -> Result<Self> {
        check_cap(q)?;
        let dim = 1usize << q;
        let amp = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(Self {
            num_qubits: q,
            amplitudes: vec![amp; dim],
        })
    }

    /// Builds a state from raw amplitudes, rescaling to unit norm.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two().max(2),
                found: dim,
            });
        }
        let q = dim.trailing_zeros() as usize;
        check_cap(q)?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm <= ZERO_PROBABILITY {
            return Err(Error::Domain("cannot normalise the zero vector".into()));
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(Self {
            num_qubits: q,
            amplitudes,
        })
    }

    /// Haar-ish random state: independent complex Gaussian amplitudes, normalised.
    pub fn random<R: Rng + ?Sized>(q: usize, rng: &mut R) -> Result<Self> {
        check_cap(q)?;
        let amplitudes = (0..1usize << q)
            .map(|_| {
                // Box-Muller
                let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
                let u2: f64 = rng.random();
                let r = (-2.0 * u1.ln()).sqrt();
                let t = std::f64::consts::TAU * u2;
                Complex64::new(r * t.cos(), r * t.sin())
            })
            .collect();
        Self::from_amplitudes(amplitudes)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitRange {
                index: qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Bit mask selecting `qubit` inside a basis index.
    fn mask(&self, qubit: usize) -> usize {
        1 << (self.num_qubits - 1 - qubit)
    }

    /// Applies `⊗_k X^{x_k} Z^{z_k}` to qubits `offset..offset + pauli.len()`.
    pub fn apply_pauli(&self, pauli: &PauliString, offset: usize) -> Result<Self> {
        let len = pauli.len();
        if offset + len > self.num_qubits {
            return Err(Error::QubitRange {
                index: offset + len.max(1) - 1,
                num_qubits: self.num_qubits,
            });
        }
        let shift = self.num_qubits - offset - len;
        let flip = bits_to_index(pauli.x_bits()) << shift;
        let phase = bits_to_index(pauli.z_bits()) << shift;
        // Z acts first, then X: amplitude of |b⟩ moves to |b ⊕ x⟩ with sign (-1)^{z·b}.
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (b, &amp) in self.amplitudes.iter().enumerate() {
            let sign = if (b & phase).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            out[b ^ flip] = amp * sign;
        }
        Ok(Self {
            num_qubits: self.num_qubits,
            amplitudes: out,
        })
    }

    /// `H^{⊗q}` via the in-place fast Walsh–Hadamard transform.
    pub fn apply_hadamard_all(&self) -> Self {
        let mut a = self.amplitudes.clone();
        let mut h = 1;
        while h < a.len() {
            for i in (0..a.len()).step_by(2 * h) {
                for j in i..i + h {
                    let (u, v) = (a[j], a[j + h]);
                    a[j] = u + v;
                    a[j + h] = u - v;
                }
            }
            h *= 2;
        }
        let scale = (a.len() as f64).sqrt().recip();
        a.iter_mut().for_each(|x| *x *= scale);
        Self {
            num_qubits: self.num_qubits,
            amplitudes: a,
        }
    }

    /// `∏_{i} CZ(i, i+1)` over nearest neighbours of the open chain.
    pub fn apply_cz_ladder(&self) -> Self {
        let q = self.num_qubits;
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(b, &amp)| {
                // bit i of (b & b >> 1) is set iff qubits at positions i and i+1 (LSB order) are both 1
                let pairs = (b & (b >> 1)).count_ones();
                if pairs % 2 == 1 {
                    -amp
                } else {
                    amp
                }
            })
            .collect();
        Self {
            num_qubits: q,
            amplitudes,
        }
    }

    pub fn apply_cnot(&self, control: usize, target: usize) -> Result<Self> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::Domain("CNOT control and target coincide".into()));
        }
        let (cm, tm) = (self.mask(control), self.mask(target));
        let mut out = self.amplitudes.clone();
        for b in 0..self.dim() {
            if b & cm != 0 && b & tm == 0 {
                out.swap(b, b | tm);
            }
        }
        Ok(Self {
            num_qubits: self.num_qubits,
            amplitudes: out,
        })
    }

    /// Multiplies amplitudes by a diagonal acting on the contiguous block of
    /// qubits starting at `first`; `diagonal.len()` fixes the block width.
    pub fn apply_diagonal(&self, diagonal: &[Complex64], first: usize) -> Result<Self> {
        let width = diagonal.len().trailing_zeros() as usize;
        if !diagonal.len().is_power_of_two() || first + width > self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << (self.num_qubits - first.min(self.num_qubits)),
                found: diagonal.len(),
            });
        }
        let shift = self.num_qubits - first - width;
        let block = (1usize << width) - 1;
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(b, &amp)| amp * diagonal[(b >> shift) & block])
            .collect();
        Ok(Self {
            num_qubits: self.num_qubits,
            amplitudes,
        })
    }

    /// `self ⊗ other`, with `other`'s qubits appended after `self`'s.
    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        let q = self.num_qubits + other.num_qubits;
        check_cap(q)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|&a| other.amplitudes.iter().map(move |&b| a * b))
            .collect();
        Ok(Self {
            num_qubits: q,
            amplitudes,
        })
    }

    /// Reorders qubits: new qubit `i` is old qubit `order[i]`.
    pub fn permute_qubits(&self, order: &[usize]) -> Result<Self> {
        let q = self.num_qubits;
        if order.len() != q {
            return Err(Error::DimensionMismatch {
                expected: q,
                found: order.len(),
            });
        }
        let mut seen = vec![false; q];
        for &o in order {
            self.check_qubit(o)?;
            if std::mem::replace(&mut seen[o], true) {
                return Err(Error::Domain(format!("qubit {o} repeated in permutation")));
            }
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (b, &amp) in self.amplitudes.iter().enumerate() {
            let nb = order.iter().enumerate().fold(0, |acc, (i, &o)| {
                if b & self.mask(o) != 0 {
                    acc | (1 << (q - 1 - i))
                } else {
                    acc
                }
            });
            out[nb] = amp;
        }
        Ok(Self {
            num_qubits: q,
            amplitudes: out,
        })
    }

    fn check_measured(&self, qubits: &[usize]) -> Result<()> {
        if qubits.is_empty() {
            return Err(Error::Domain("empty qubit set".into()));
        }
        let mut seen = vec![false; self.num_qubits];
        for &k in qubits {
            self.check_qubit(k)?;
            if std::mem::replace(&mut seen[k], true) {
                return Err(Error::Domain(format!("qubit {k} measured twice")));
            }
        }
        Ok(())
    }

    /// Extracts the measured bits of basis index `b` as an outcome index.
    fn outcome_of(&self, b: usize, qubits: &[usize]) -> usize {
        qubits
            .iter()
            .fold(0, |acc, &k| (acc << 1) | usize::from(b & self.mask(k) != 0))
    }

    /// Born probabilities of every outcome on `qubits`, indexed by
    /// [`bits_to_index`] of the outcome (first listed qubit most significant).
    pub fn outcome_probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        self.check_measured(qubits)?;
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (b, amp) in self.amplitudes.iter().enumerate() {
            probs[self.outcome_of(b, qubits)] += amp.norm_sqr();
        }
        Ok(probs)
    }

    fn project(&self, qubits: &[usize], outcome: usize, probability: f64) -> StateVector {
        let kept: Vec<usize> = (0..self.num_qubits)
            .filter(|k| !qubits.contains(k))
            .collect();
        let scale = probability.sqrt().recip();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << kept.len()];
        for (b, &amp) in self.amplitudes.iter().enumerate() {
            if self.outcome_of(b, qubits) == outcome {
                amplitudes[self.outcome_of(b, &kept)] = amp * scale;
            }
        }
        StateVector {
            num_qubits: kept.len(),
            amplitudes,
        }
    }

    /// Deterministic measurement with a prescribed outcome. Fails if the
    /// outcome has zero probability.
    pub fn measure_forced(&self, qubits: &[usize], outcome: &[bool]) -> Result<MeasurementBranch> {
        self.check_measured(qubits)?;
        if outcome.len() != qubits.len() {
            return Err(Error::DimensionMismatch {
                expected: qubits.len(),
                found: outcome.len(),
            });
        }
        let index = bits_to_index(outcome);
        let probability = self.outcome_probabilities(qubits)?[index];
        if probability <= ZERO_PROBABILITY {
            return Err(Error::ImpossibleOutcome {
                outcome: outcome.to_vec(),
            });
        }
        Ok(MeasurementBranch {
            bits: outcome.to_vec(),
            probability,
            state: self.project(qubits, index, probability),
        })
    }

    /// Every outcome with nonzero probability, in increasing outcome order.
    pub fn measure_branches(&self, qubits: &[usize]) -> Result<Vec<MeasurementBranch>> {
        let probs = self.outcome_probabilities(qubits)?;
        Ok(probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > ZERO_PROBABILITY)
            .map(|(i, &p)| MeasurementBranch {
                bits: index_to_bits(i, qubits.len()),
                probability: p,
                state: self.project(qubits, i, p),
            })
            .collect())
    }

    /// Samples a computational-basis measurement of `qubits`; the measured
    /// qubits are removed from the returned state.
    pub fn measure_computational<R: Rng + ?Sized>(
        &self,
        qubits: &[usize],
        rng: &mut R,
    ) -> Result<(Vec<bool>, StateVector)> {
        let probs = self.outcome_probabilities(qubits)?;
        let index = sample_index(&probs, rng);
        let bits = index_to_bits(index, qubits.len());
        let state = self.project(qubits, index, probs[index]);
        Ok((bits, state))
    }

    /// Measures every qubit in the X basis.
    pub fn measure_x_all<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<bool> {
        let probs = self.x_basis_probabilities();
        index_to_bits(sample_index(&probs, rng), self.num_qubits)
    }

    /// Distribution of an all-qubit X-basis measurement, indexed by outcome.
    pub fn x_basis_probabilities(&self) -> Vec<f64> {
        self.apply_hadamard_all()
            .amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .collect()
    }
}

/// Draws an index according to `probs`, skipping zero-weight entries.
pub fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let total: f64 = probs.iter().sum();
    let mut u = rng.random::<f64>() * total;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p <= ZERO_PROBABILITY {
            continue;
        }
        last = i;
        if u < p {
            return i;
        }
        u -= p;
    }
    last
}

/// `|⟨a|b⟩|²`.
pub fn fidelity_up_to_phase(a: &StateVector, b: &StateVector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let overlap: Complex64 = a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(overlap.norm_sqr().min(1.0))
}
