use crate::error::Result;
use crate::statevec::StateVector;

use super::program::Program;

/// The computation a program asks for, simulated directly: `D̄_1|+⟩^{⊗n}`,
/// then for each later phase a CZ ladder (odd phases only), `H̄` and `D̄_j`,
/// then an X-basis measurement. Returns the exact distribution over the `n`
/// output bits, indexed with qubit 0 as the most significant bit.
pub fn oracle_simulate(program: &Program) -> Result<Vec<f64>> {
    let mut state = program.apply_layer(1, &StateVector::init_plus(program.n())?)?;
    for j in 2..=program.phases() {
        if j % 2 == 1 {
            state = state.apply_cz_ladder();
        }
        state = program.apply_layer(j, &state.apply_hadamard_all())?;
    }
    Ok(state.x_basis_probabilities())
}

/// Total-variation distance between two distributions on the same support.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
