//! Randomness consumed by the protocols.
//!
//! Alice draws one-time-pad bits and Bob draws measurement outcomes. Both go
//! through [`RandomSource`] so that the same protocol code can be sampled,
//! replayed with forced choices, or enumerated branch by branch.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::statevec::sample_index;

pub trait RandomSource {
    /// A uniformly random pad bit for Alice.
    fn pad_bit(&mut self) -> bool;

    /// Selects a measurement outcome for Bob given the Born weights of every
    /// outcome (indexed by outcome value).
    fn outcome(&mut self, probabilities: &[f64]) -> Result<usize>;
}

/// Stream label for Alice's pads.
pub const ALICE_STREAM: u64 = 0xA11CE;
/// Stream label for Bob's measurement outcomes.
pub const BOB_STREAM: u64 = 0xB0B;

/// Seeded source with independent per-party substreams: both parties share a
/// seed but read disjoint ChaCha streams, so Alice's pads do not depend on how
/// many outcomes Bob has drawn and vice versa.
#[derive(Debug, Clone)]
pub struct SeededSource {
    alice: ChaCha8Rng,
    bob: ChaCha8Rng,
}

impl SeededSource {
    pub fn new(seed: u64) -> Self {
        Self {
            alice: substream(seed, ALICE_STREAM),
            bob: substream(seed, BOB_STREAM),
        }
    }
}

/// Labelled substream of a seed.
pub fn substream(seed: u64, label: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(label);
    rng
}

impl RandomSource for SeededSource {
    fn pad_bit(&mut self) -> bool {
        self.alice.random()
    }

    fn outcome(&mut self, probabilities: &[f64]) -> Result<usize> {
        Ok(sample_index(probabilities, &mut self.bob))
    }
}

/// Forced choices. Once a script runs out, pads default to 0 and outcomes to
/// the all-zero pattern.
#[derive(Debug, Clone, Default)]
pub struct ScriptedSource {
    pads: VecDeque<bool>,
    outcomes: VecDeque<usize>,
}

impl ScriptedSource {
    pub fn new(
        pads: impl IntoIterator<Item = bool>,
        outcomes: impl IntoIterator<Item = usize>,
    ) -> Self {
        Self {
            pads: pads.into_iter().collect(),
            outcomes: outcomes.into_iter().collect(),
        }
    }

    /// Outcomes given as bit patterns, most significant bit first.
    pub fn with_outcome_bits<'a>(
        pads: impl IntoIterator<Item = bool>,
        outcomes: impl IntoIterator<Item = &'a [bool]>,
    ) -> Self {
        Self::new(
            pads,
            outcomes.into_iter().map(crate::statevec::bits_to_index),
        )
    }

    pub fn remaining_outcomes(&self) -> usize {
        self.outcomes.len()
    }
}

impl RandomSource for ScriptedSource {
    fn pad_bit(&mut self) -> bool {
        self.pads.pop_front().unwrap_or(false)
    }

    fn outcome(&mut self, probabilities: &[f64]) -> Result<usize> {
        let index = self.outcomes.pop_front().unwrap_or(0);
        match probabilities.get(index) {
            Some(&p) if p > 1e-20 => Ok(index),
            _ => Err(Error::ImpossibleOutcome {
                outcome: crate::statevec::index_to_bits(
                    index,
                    probabilities.len().trailing_zeros() as usize,
                ),
            }),
        }
    }
}
