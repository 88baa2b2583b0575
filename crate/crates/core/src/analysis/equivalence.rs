//! Exhaustive comparison of the blind protocol with the oracle.
//!
//! When pads and outcomes together branch at most `2^FULL_ENUMERATION_BITS`
//! ways every leaf is visited. Beyond that, a handful of seeded keys are
//! fixed and each key's outcome tree is enumerated in full; the protocol must
//! reproduce the oracle for every key, so this is a check per key rather
//! than of the key average.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::explore::PadMode;
use crate::protocol::{branch_bits, oracle_simulate, program_output_distribution, Program};

pub const FULL_ENUMERATION_BITS: u64 = 20;
/// Keys tried when pads cannot be enumerated.
pub const SAMPLED_KEYS: u64 = 4;
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Coverage {
    /// Every pad and every outcome.
    Exhaustive,
    /// Every outcome for each of several fixed keys.
    PerKey,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub coverage: Coverage,
    pub keys: u64,
    pub leaves: u64,
    pub oracle: Vec<f64>,
    pub protocol: Vec<f64>,
    /// Largest per-entry deviation over all keys checked.
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn max_deviation(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Runs the comparison, choosing coverage from the program's size. `seed`
/// picks the keys when they are sampled.
pub fn verify_program(program: &Program, seed: u64) -> Result<EquivalenceReport> {
    let (pads, outcomes) = branch_bits(program);
    let oracle = oracle_simulate(program)?;
    let cap = 1u64 << FULL_ENUMERATION_BITS;
    let (coverage, modes): (Coverage, Vec<PadMode>) = if pads + outcomes <= FULL_ENUMERATION_BITS {
        (Coverage::Exhaustive, vec![PadMode::Enumerate])
    } else if outcomes <= FULL_ENUMERATION_BITS {
        (
            Coverage::PerKey,
            (0..SAMPLED_KEYS)
                .map(|k| PadMode::Seeded(seed.wrapping_add(k)))
                .collect(),
        )
    } else {
        return Err(Error::EnumerationCap {
            required: 1u128 << outcomes.min(127),
            cap: cap as u128,
        });
    };
    let mut leaves = 0;
    let mut worst = 0.0f64;
    let mut average = vec![0.0; oracle.len()];
    for &mode in &modes {
        let (dist, visited) = program_output_distribution(program, mode, cap)?;
        leaves += visited;
        worst = worst.max(max_deviation(&dist, &oracle));
        average
            .iter_mut()
            .zip(&dist)
            .for_each(|(a, p)| *a += p / modes.len() as f64);
    }
    Ok(EquivalenceReport {
        coverage,
        keys: if coverage == Coverage::Exhaustive {
            1 << pads
        } else {
            modes.len() as u64
        },
        leaves,
        oracle,
        protocol: average,
        max_deviation: worst,
        tolerance: DISTRIBUTION_TOLERANCE,
        pass: worst <= DISTRIBUTION_TOLERANCE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn coverage_follows_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let small = Program::random(2, 2, 2, 2, &mut rng).unwrap();
        let report = verify_program(&small, 0).unwrap();
        assert_eq!(report.coverage, Coverage::Exhaustive);
        assert_eq!(report.keys, 1 << 6);
        assert!(report.pass, "{report:?}");

        let larger = Program::random(2, 1, 2, 4, &mut rng).unwrap();
        let report = verify_program(&larger, 0).unwrap();
        assert_eq!(report.coverage, Coverage::PerKey);
        assert_eq!(report.keys, SAMPLED_KEYS);
        assert_eq!(report.leaves, SAMPLED_KEYS << 12);
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn too_many_outcomes() {
        let program = Program::identity(3, 3, 4, 4).unwrap();
        assert!(matches!(
            verify_program(&program, 0),
            Err(Error::EnumerationCap { .. })
        ));
    }
}
