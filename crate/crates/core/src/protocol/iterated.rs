//! Iterated teleportation of a single diagonal gate, plain and blind.
//!
//! Each round Alice sends `Z̄_ℓ Z̄_{ℓ-1} D_ℓ |+⟩^{⊗m}` (no pads in the plain
//! variant), Bob teleports it into his register and returns the outcomes
//! `s`, and Alice updates `D_{ℓ+1} = X̄_s D_ℓ X̄_s D_ℓ†`. The level drops by
//! one every round, so after `l` rounds Bob holds `Z̄_l X̄ D |ψ⟩` with
//! `X̄ = ∏ X̄_{s^{(ℓ)}}`.

use crate::diagonal::DiagonalGate;
use crate::error::{Error, Result};
use crate::source::RandomSource;
use crate::statevec::{PauliString, StateVector};
use crate::teleport::teleport_round;

use super::channel::{run_lockstep, Channel, Party};
use super::message::{Message, Params, Transcript};

/// Alice's bookkeeping for one gate.
#[derive(Debug, Clone)]
pub struct IteratedSender {
    gate: DiagonalGate,
    rounds: u32,
    completed: u32,
    blind: bool,
    early_halt: bool,
    halted: bool,
    awaiting_outcomes: bool,
    previous_pad: Vec<bool>,
    current_pad: Vec<bool>,
    byproduct: Vec<bool>,
}

impl IteratedSender {
    /// `gate` must lie in `𝒟_{m,rounds}`.
    pub fn new(gate: &DiagonalGate, rounds: u32, blind: bool, early_halt: bool) -> Result<Self> {
        if rounds == 0 {
            return Err(Error::Domain("at least one round is required".into()));
        }
        let m = gate.m();
        Ok(Self {
            gate: gate.with_level(rounds)?,
            rounds,
            completed: 0,
            blind,
            early_halt,
            halted: false,
            awaiting_outcomes: false,
            previous_pad: vec![false; m],
            current_pad: vec![false; m],
            byproduct: vec![false; m],
        })
    }

    pub fn m(&self) -> usize {
        self.gate.m()
    }

    pub fn is_finished(&self) -> bool {
        self.halted || self.completed == self.rounds
    }

    pub fn rounds_completed(&self) -> u32 {
        self.completed
    }

    /// The gate still to be teleported, `D_ℓ`.
    pub fn pending_gate(&self) -> &DiagonalGate {
        &self.gate
    }

    /// Prepares the next resource state, drawing fresh pads in the blind variant.
    pub fn next_resource(&mut self, source: &mut dyn RandomSource) -> Result<StateVector> {
        if self.is_finished() || self.awaiting_outcomes {
            return Err(Error::Protocol("no resource is due".into()));
        }
        let m = self.m();
        let fresh: Vec<bool> = if self.blind {
            (0..m).map(|_| source.pad_bit()).collect()
        } else {
            vec![false; m]
        };
        self.previous_pad = std::mem::replace(&mut self.current_pad, fresh);
        let pad: Vec<bool> = self
            .current_pad
            .iter()
            .zip(&self.previous_pad)
            .map(|(a, b)| a ^ b)
            .collect();
        self.awaiting_outcomes = true;
        StateVector::init_plus(m)?
            .apply_diagonal(&self.gate.to_unitary_diag(), 0)?
            .apply_pauli(&PauliString::z_string(&pad), 0)
    }

    pub fn receive_outcomes(&mut self, outcome: &[bool]) -> Result<()> {
        if !self.awaiting_outcomes {
            return Err(Error::Protocol("unexpected measurement outcomes".into()));
        }
        if outcome.len() != self.m() {
            return Err(Error::DimensionMismatch {
                expected: self.m(),
                found: outcome.len(),
            });
        }
        self.awaiting_outcomes = false;
        self.completed += 1;
        self.byproduct
            .iter_mut()
            .zip(outcome)
            .for_each(|(x, s)| *x ^= s);
        self.gate = self.gate.conjugate_update(outcome)?;
        if self.early_halt && outcome.iter().all(|&s| !s) {
            self.halted = true;
        }
        Ok(())
    }

    /// `X̄`, the accumulated byproduct.
    pub fn byproduct(&self) -> PauliString {
        PauliString::x_string(&self.byproduct)
    }

    /// Pad bits of the last round sent, i.e. the key `Z̄ = Z̄_l` once finished.
    pub fn key_bits(&self) -> &[bool] {
        &self.current_pad
    }
}

/// Alice as a party in a stand-alone run.
#[derive(Debug, Clone)]
pub struct IteratedAlice {
    sender: IteratedSender,
}

impl IteratedAlice {
    pub fn new(sender: IteratedSender) -> Self {
        Self { sender }
    }

    pub fn sender(&self) -> &IteratedSender {
        &self.sender
    }
}

impl Party for IteratedAlice {
    fn start(&mut self, source: &mut dyn RandomSource) -> Result<Vec<Message>> {
        let m = self.sender.m();
        let params = Params {
            phases: 1,
            n: m,
            m,
            x: self.sender.rounds,
        };
        Ok(vec![
            Message::Params(params),
            Message::Quantum(self.sender.next_resource(source)?),
        ])
    }

    fn handle(&mut self, message: Message, source: &mut dyn RandomSource) -> Result<Vec<Message>> {
        let Message::Classical(bits) = message else {
            return Err(Error::Protocol(format!(
                "Alice cannot accept a {} message",
                message.kind()
            )));
        };
        self.sender.receive_outcomes(&bits)?;
        if self.sender.is_finished() {
            return Ok(Vec::new());
        }
        Ok(vec![Message::Quantum(self.sender.next_resource(source)?)])
    }
}

/// Bob in a stand-alone run: teleports every resource he receives into his
/// register and reports the outcomes. He never learns the gate.
#[derive(Debug, Clone)]
pub struct TeleportingBob {
    register: StateVector,
    params: Option<Params>,
}

impl TeleportingBob {
    pub fn new(register: StateVector) -> Self {
        Self {
            register,
            params: None,
        }
    }

    pub fn register(&self) -> &StateVector {
        &self.register
    }
}

impl Party for TeleportingBob {
    fn handle(&mut self, message: Message, source: &mut dyn RandomSource) -> Result<Vec<Message>> {
        match message {
            Message::Params(p) => {
                if p.m != self.register.num_qubits() {
                    return Err(Error::DimensionMismatch {
                        expected: self.register.num_qubits(),
                        found: p.m,
                    });
                }
                self.params = Some(p);
                Ok(Vec::new())
            }
            Message::Quantum(resource) => {
                let round = teleport_round(&self.register, 0, &resource, source)?;
                self.register = round.state;
                Ok(vec![Message::Classical(round.outcome)])
            }
            Message::Classical(_) => Err(Error::Protocol(
                "Bob cannot accept classical messages".into(),
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IteratedRun {
    /// `X̄`, known to both parties.
    pub byproduct: PauliString,
    /// `Z̄`, known only to Alice (identity for the plain variant).
    pub key: PauliString,
    /// Bob's register at the end.
    pub state: StateVector,
    pub rounds: u32,
    pub transcript: Transcript,
}

fn run(
    gate: &DiagonalGate,
    rounds: u32,
    psi: &StateVector,
    source: &mut dyn RandomSource,
    blind: bool,
    early_halt: bool,
) -> Result<IteratedRun> {
    if psi.num_qubits() != gate.m() {
        return Err(Error::GateSize {
            expected: psi.num_qubits(),
            found: gate.m(),
        });
    }
    let mut alice = IteratedAlice::new(IteratedSender::new(gate, rounds, blind, early_halt)?);
    let mut bob = TeleportingBob::new(psi.clone());
    let mut channel = Channel::new();
    run_lockstep(&mut alice, &mut bob, &mut channel, source)?;
    let sender = alice.sender();
    if !sender.is_finished() {
        return Err(Error::Protocol(
            "iterated teleportation stopped early".into(),
        ));
    }
    Ok(IteratedRun {
        byproduct: sender.byproduct(),
        key: PauliString::z_string(sender.key_bits()),
        state: bob.register,
        rounds: sender.rounds_completed(),
        transcript: channel.into_transcript(),
    })
}

/// Plain iterated teleportation of `gate ∈ 𝒟_{m,rounds}`; Bob ends with
/// `X̄ D |ψ⟩`. With `early_halt` both parties stop after the first all-zero
/// outcome, at which point the remaining gate is the identity.
pub fn teleport_gate(
    gate: &DiagonalGate,
    rounds: u32,
    psi: &StateVector,
    source: &mut dyn RandomSource,
    early_halt: bool,
) -> Result<IteratedRun> {
    run(gate, rounds, psi, source, false, early_halt)
}

/// Blind iterated teleportation; Bob ends with `Z̄ X̄ D |ψ⟩` where `Z̄` is the
/// last round's pad.
pub fn blind_teleport_gate(
    gate: &DiagonalGate,
    rounds: u32,
    psi: &StateVector,
    source: &mut dyn RandomSource,
) -> Result<IteratedRun> {
    run(gate, rounds, psi, source, true, false)
}

/// What Bob's register should be, from the run's reported byproduct and key.
pub fn expected_output(
    gate: &DiagonalGate,
    psi: &StateVector,
    run: &IteratedRun,
) -> Result<StateVector> {
    psi.apply_diagonal(&gate.to_unitary_diag(), 0)?
        .apply_pauli(&run.byproduct, 0)?
        .apply_pauli(&run.key, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::{ScriptedSource, SeededSource};
    use crate::statevec::fidelity_up_to_phase;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fidelity(a: &StateVector, b: &StateVector) -> f64 {
        fidelity_up_to_phase(a, b).unwrap()
    }

    #[test]
    fn identity_gate_with_zero_outcomes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = StateVector::random(2, &mut rng).unwrap();
        let run = teleport_gate(
            &DiagonalGate::identity(2),
            3,
            &psi,
            &mut ScriptedSource::default(),
            false,
        )
        .unwrap();
        assert!(run.byproduct.is_identity());
        assert!(fidelity(&run.state, &psi) > 1.0 - 1e-10);
        assert_eq!(run.rounds, 3);
    }

    /// Hand trace at m=1, l=2, D = exp(iπ/4 Z), ψ = |+⟩, s = (1, 0):
    /// round 1 gives D X|+⟩ = D|+⟩, D_2 = X D X D† = exp(-iπ/2 Z) ∝ Z,
    /// round 2 gives Z D|+⟩ up to phase, and X̄ = X.
    #[test]
    fn two_round_hand_trace() {
        let d = DiagonalGate::new(1, 2, vec![0, 1]).unwrap();
        let plus = StateVector::init_plus(1).unwrap();
        let run = teleport_gate(&d, 2, &plus, &mut ScriptedSource::new([], [1, 0]), false).unwrap();
        assert_eq!(run.byproduct, PauliString::x_string(&[true]));
        let d_plus = plus.apply_diagonal(&d.to_unitary_diag(), 0).unwrap();
        let hand = d_plus
            .apply_pauli(&PauliString::z_string(&[true]), 0)
            .unwrap();
        assert!(fidelity(&run.state, &hand) > 1.0 - 1e-10);
        let target = d_plus
            .apply_pauli(&PauliString::x_string(&[true]), 0)
            .unwrap();
        assert!(fidelity(&run.state, &target) > 1.0 - 1e-10);
        assert_eq!(
            (run.transcript.qubits_a2b(), run.transcript.bits_b2a()),
            (2, 2)
        );
    }

    #[test]
    fn early_halt_after_first_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let d = DiagonalGate::random(1, 100, &mut rng).unwrap();
        let psi = StateVector::random(1, &mut rng).unwrap();
        let run = teleport_gate(&d, 100, &psi, &mut ScriptedSource::new([], [0]), true).unwrap();
        assert_eq!(run.rounds, 1);
        assert_eq!(run.transcript.qubits_a2b(), 1);
        assert!(fidelity(&run.state, &expected_output(&d, &psi, &run).unwrap()) > 1.0 - 1e-10);
    }

    #[test]
    fn level_overflow_is_rejected() {
        let d = DiagonalGate::new(1, 3, vec![0, 1]).unwrap();
        let psi = StateVector::zero(1).unwrap();
        assert!(matches!(
            teleport_gate(&d, 2, &psi, &mut ScriptedSource::default(), false),
            Err(Error::LevelOverflow { .. })
        ));
    }

    #[test]
    fn zero_pads_reduce_to_plain_protocol() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = DiagonalGate::random(2, 3, &mut rng).unwrap();
        let psi = StateVector::random(2, &mut rng).unwrap();
        let outcomes = [2usize, 1, 3];
        let plain =
            teleport_gate(&d, 3, &psi, &mut ScriptedSource::new([], outcomes), false).unwrap();
        let blind =
            blind_teleport_gate(&d, 3, &psi, &mut ScriptedSource::new([false; 6], outcomes))
                .unwrap();
        assert!(blind.key.is_identity());
        assert_eq!(blind.byproduct, plain.byproduct);
        assert!(fidelity(&blind.state, &plain.state) > 1.0 - 1e-10);
    }

    /// m=1, l=2, pads r1=1, r2=0, s=(0,0): the second message is
    /// Z̄₂Z̄₁D₂|+⟩ = Z D₂|+⟩ and the final state is D|ψ⟩ with no key.
    #[test]
    fn blind_hand_trace() {
        let d = DiagonalGate::new(1, 2, vec![0, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let psi = StateVector::random(1, &mut rng).unwrap();
        let run = blind_teleport_gate(&d, 2, &psi, &mut ScriptedSource::new([true, false], [0, 0]))
            .unwrap();
        assert!(run.key.is_identity());
        let d_psi = psi.apply_diagonal(&d.to_unitary_diag(), 0).unwrap();
        assert!(fidelity(&run.state, &d_psi) > 1.0 - 1e-10);

        let messages: Vec<&StateVector> = run.transcript.quantum_payloads().collect();
        // s = 0 leaves D₂ = identity, so message 2 is Z|+⟩
        let z_plus = StateVector::init_plus(1)
            .unwrap()
            .apply_pauli(&PauliString::z_string(&[true]), 0)
            .unwrap();
        assert!(fidelity(messages[1], &z_plus) > 1.0 - 1e-10);
    }

    #[test]
    fn seeded_runs_satisfy_postconditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for seed in 0..30 {
            let m = 1 + seed as usize % 3;
            let d = DiagonalGate::random(m, 3, &mut rng).unwrap();
            let psi = StateVector::random(m, &mut rng).unwrap();
            let run = blind_teleport_gate(&d, 3, &psi, &mut SeededSource::new(seed)).unwrap();
            assert!(fidelity(&run.state, &expected_output(&d, &psi, &run).unwrap()) > 1.0 - 1e-10);
            assert_eq!(
                (run.transcript.qubits_a2b(), run.transcript.bits_b2a()),
                (3 * m, 3 * m)
            );
            run.transcript.validate().unwrap();
        }
    }
}
