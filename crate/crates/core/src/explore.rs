//! Exhaustive enumeration of every random branch of a protocol run.
//!
//! A run is any closure that draws its randomness from a [`RandomSource`].
//! The explorer replays it once per leaf of the choice tree: choices already
//! on the tape are replayed, new choice points start at their first option,
//! and after each run the tape advances like an odometer. Each leaf carries
//! the product of the probabilities of the choices that led to it.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::source::{substream, RandomSource, ALICE_STREAM};

/// How Alice's pad bits are treated during enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadMode {
    /// Every pad bit is a branch point of weight 1/2.
    Enumerate,
    /// Pads come from a seeded stream restarted on every replay, so all
    /// leaves share one key; only Bob's outcomes branch.
    Seeded(u64),
}

impl PadMode {
    fn initial_pads(self) -> Option<ChaCha8Rng> {
        match self {
            PadMode::Enumerate => None,
            PadMode::Seeded(seed) => Some(substream(seed, ALICE_STREAM)),
        }
    }
}

#[derive(Debug, Clone)]
struct Decision {
    choice: usize,
    arity: usize,
}

/// The [`RandomSource`] handed to a run during exploration.
#[derive(Debug)]
pub struct BranchTape {
    mode: PadMode,
    pads: Option<ChaCha8Rng>,
    decisions: Vec<Decision>,
    cursor: usize,
    weight: f64,
    error: Option<Error>,
}

impl BranchTape {
    fn new(mode: PadMode) -> Self {
        Self {
            mode,
            pads: None,
            decisions: Vec::new(),
            cursor: 0,
            weight: 1.0,
            error: None,
        }
    }

    fn rewind(&mut self) {
        self.restart(self.mode.initial_pads());
    }

    fn restart(&mut self, pads: Option<ChaCha8Rng>) {
        self.cursor = 0;
        self.weight = 1.0;
        self.pads = pads;
    }

    /// Chooses among `options` (outcome value, probability) pairs.
    fn decide(&mut self, options: &[(usize, f64)]) -> usize {
        if self.cursor == self.decisions.len() {
            self.decisions.push(Decision {
                choice: 0,
                arity: options.len(),
            });
        }
        let decision = &self.decisions[self.cursor];
        if decision.arity != options.len() && self.error.is_none() {
            self.error = Some(Error::Protocol(
                "run is not deterministic under replay".into(),
            ));
        }
        let (value, p) = options[decision.choice.min(options.len() - 1)];
        self.cursor += 1;
        self.weight *= p;
        value
    }

    /// Moves to the next leaf; false once the tree is exhausted.
    fn advance(&mut self) -> bool {
        self.decisions.truncate(self.cursor);
        while let Some(last) = self.decisions.last_mut() {
            if last.choice + 1 < last.arity {
                last.choice += 1;
                return true;
            }
            self.decisions.pop();
        }
        false
    }

    /// Product of the probabilities of the choices made so far in this run.
    pub fn weight(&self) -> f64 {
        self.weight
    }
}

impl RandomSource for BranchTape {
    fn pad_bit(&mut self) -> bool {
        match self.pads.as_mut() {
            Some(rng) => rng.random(),
            None => self.decide(&[(0, 0.5), (1, 0.5)]) == 1,
        }
    }

    fn outcome(&mut self, probabilities: &[f64]) -> Result<usize> {
        let options: Vec<(usize, f64)> = probabilities
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, p)| p > 1e-20)
            .collect();
        if options.is_empty() {
            return Err(Error::Domain("no outcome has positive probability".into()));
        }
        Ok(self.decide(&options))
    }
}

/// Runs `run` once for every leaf of its choice tree and hands each result to
/// `visit` with the leaf's weight. Returns the number of leaves visited.
pub fn explore<T, R, V>(mode: PadMode, max_leaves: u64, mut run: R, mut visit: V) -> Result<u64>
where
    R: FnMut(&mut BranchTape) -> Result<T>,
    V: FnMut(f64, T),
{
    let mut tape = BranchTape::new(mode);
    let mut leaves = 0u64;
    loop {
        tape.rewind();
        let value = run(&mut tape)?;
        if let Some(err) = tape.error.take() {
            return Err(err);
        }
        leaves += 1;
        if leaves > max_leaves {
            return Err(Error::EnumerationCap {
                required: leaves as u128,
                cap: max_leaves as u128,
            });
        }
        visit(tape.weight, value);
        if !tape.advance() {
            return Ok(leaves);
        }
    }
}

/// Like [`explore`], but for runs that can be split into steps over a
/// cloneable state. Each step's choices are enumerated once and every
/// resulting state is continued independently, so a leaf costs one step
/// rather than a replay of the whole run. `step` returns true once the state
/// is final. In [`PadMode::Seeded`] the pad stream carries over from step to
/// step along each branch.
pub fn explore_steps<S, F, V>(
    mode: PadMode,
    max_leaves: u64,
    init: S,
    mut step: F,
    mut visit: V,
) -> Result<u64>
where
    S: Clone,
    F: FnMut(&mut S, &mut BranchTape) -> Result<bool>,
    V: FnMut(f64, S),
{
    let mut walk = StepWalk {
        mode,
        max_leaves,
        leaves: 0,
        step: &mut step,
        visit: &mut visit,
    };
    walk.descend(init, 1.0, mode.initial_pads())?;
    Ok(walk.leaves)
}

struct StepWalk<'a, F, V> {
    mode: PadMode,
    max_leaves: u64,
    leaves: u64,
    step: &'a mut F,
    visit: &'a mut V,
}

impl<F, V> StepWalk<'_, F, V> {
    fn descend<S>(&mut self, state: S, weight: f64, pads: Option<ChaCha8Rng>) -> Result<()>
    where
        S: Clone,
        F: FnMut(&mut S, &mut BranchTape) -> Result<bool>,
        V: FnMut(f64, S),
    {
        let mut tape = BranchTape::new(self.mode);
        loop {
            tape.restart(pads.clone());
            let mut next = state.clone();
            let done = (self.step)(&mut next, &mut tape)?;
            if let Some(err) = tape.error.take() {
                return Err(err);
            }
            let w = weight * tape.weight;
            if done {
                self.leaves += 1;
                if self.leaves > self.max_leaves {
                    return Err(Error::EnumerationCap {
                        required: self.leaves as u128,
                        cap: self.max_leaves as u128,
                    });
                }
                (self.visit)(w, next);
            } else {
                self.descend(next, w, tape.pads.clone())?;
            }
            if !tape.advance() {
                return Ok(());
            }
        }
    }
}
