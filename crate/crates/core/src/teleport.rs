//! One round of diagonal-gate teleportation.
//!
//! Bob holds a register and receives a resource `D|+⟩^{⊗m}` in a scratch
//! register. For every `k` he applies a CNOT with resource qubit `k` as
//! control and register qubit `first + k` as target, measures the targets in
//! the computational basis to obtain `s`, and relabels the resource qubits as
//! the measured ones. The register ends in `D X̄_s |ψ⟩` and every `s` occurs
//! with probability `2^{-m}`.

use crate::error::{Error, Result};
use crate::source::RandomSource;
use crate::statevec::{MeasurementBranch, StateVector};

#[derive(Debug, Clone)]
pub struct TeleportOutcome {
    /// Measurement results `s`, one per teleported qubit.
    pub outcome: Vec<bool>,
    pub probability: f64,
    /// The register after the round, with the resource swapped into place.
    pub state: StateVector,
}

struct Prepared {
    joint: StateVector,
    targets: Vec<usize>,
    order: Vec<usize>,
}

fn prepare(register: &StateVector, first: usize, resource: &StateVector) -> Result<Prepared> {
    let q = register.num_qubits();
    let m = resource.num_qubits();
    if m == 0 || first + m > q {
        return Err(Error::DimensionMismatch {
            expected: q.saturating_sub(first),
            found: m,
        });
    }
    let mut joint = register.tensor(resource)?;
    for k in 0..m {
        joint = joint.apply_cnot(q + k, first + k)?;
    }
    let targets = (first..first + m).collect();
    // After measurement the survivors are the untouched register qubits
    // followed by the resource; put the resource back at `first..first+m`.
    let order = (0..q)
        .map(|i| {
            if i < first {
                i
            } else if i < first + m {
                q - m + (i - first)
            } else {
                i - m
            }
        })
        .collect();
    Ok(Prepared {
        joint,
        targets,
        order,
    })
}

fn finish(branch: MeasurementBranch, order: &[usize]) -> Result<TeleportOutcome> {
    Ok(TeleportOutcome {
        state: branch.state.permute_qubits(order)?,
        outcome: branch.bits,
        probability: branch.probability,
    })
}

/// Every outcome of a round with its probability.
pub fn teleport_branches(
    register: &StateVector,
    first: usize,
    resource: &StateVector,
) -> Result<Vec<TeleportOutcome>> {
    let prep = prepare(register, first, resource)?;
    prep.joint
        .measure_branches(&prep.targets)?
        .into_iter()
        .map(|b| finish(b, &prep.order))
        .collect()
}

/// Teleports `resource` into qubits `first..first + m` of `register`,
/// drawing the outcome from `source`.
pub fn teleport_round(
    register: &StateVector,
    first: usize,
    resource: &StateVector,
    source: &mut dyn RandomSource,
) -> Result<TeleportOutcome> {
    let prep = prepare(register, first, resource)?;
    let probabilities = prep.joint.outcome_probabilities(&prep.targets)?;
    let index = source.outcome(&probabilities)?;
    let bits = crate::statevec::index_to_bits(index, prep.targets.len());
    finish(
        prep.joint.measure_forced(&prep.targets, &bits)?,
        &prep.order,
    )
}
