//! Blind computation of a whole program.
//!
//! Alice sends the padded first layer `Z̄_1 D̄_1 |+⟩^{⊗n}`. For every later
//! phase Bob applies the CZ ladder (odd phases) and `H̄`, then each block's
//! gate arrives by blind iterated teleportation after Alice has folded the
//! current Pauli frame into it. Bob finally measures in the X basis and Alice
//! removes the last pad from his bits.
//!
//! Bob's state machine is driven only by the announced [`Params`] and the
//! messages he receives; the program and key ledger never leave [`Client`].

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::explore::{explore_steps, PadMode};
use crate::source::RandomSource;
use crate::statevec::{bits_to_index, index_to_bits, PauliString, StateVector};
use crate::teleport::teleport_round;

use super::channel::{Channel, Party};
use super::iterated::IteratedSender;
use super::ledger::KeyLedger;
use super::message::{Direction, Message, Params, Transcript};
use super::program::Program;

/// Alice: owns the program and the key ledger.
#[derive(Debug, Clone)]
pub struct Client {
    program: Arc<Program>,
    ledger: KeyLedger,
    phase: usize,
    block: usize,
    sender: Option<IteratedSender>,
    output: Option<Vec<bool>>,
}

impl Client {
    pub fn new(program: Program) -> Self {
        let ledger = KeyLedger::new(program.n());
        Self {
            program: Arc::new(program),
            ledger,
            phase: 1,
            block: 1,
            sender: None,
            output: None,
        }
    }

    pub fn params(&self) -> Params {
        let p = &self.program;
        Params {
            phases: p.phases(),
            n: p.n(),
            m: p.m(),
            x: p.x(),
        }
    }

    pub fn ledger(&self) -> &KeyLedger {
        &self.ledger
    }

    /// Every gate has been teleported.
    pub fn gates_done(&self) -> bool {
        self.phase > self.program.phases()
    }

    /// The decrypted result, once Bob's measurement has arrived.
    pub fn output(&self) -> Option<&[bool]> {
        self.output.as_deref()
    }

    /// Pads left on Bob's register by the last phase.
    pub fn final_key(&self) -> Vec<bool> {
        self.ledger.z_bits(self.program.phases())
    }

    fn first_qubit(&self) -> usize {
        (self.block - 1) * self.program.m()
    }

    /// Starts blind teleportation of the corrected gate for the current block.
    fn open_block(&mut self, source: &mut dyn RandomSource) -> Result<Message> {
        let gate = self.program.gate(self.phase, self.block);
        let corrected = self.ledger.correct(self.phase, self.first_qubit(), gate)?;
        let mut sender = IteratedSender::new(&corrected, self.program.x(), true, false)?;
        let resource = sender.next_resource(source)?;
        self.sender = Some(sender);
        Ok(Message::Quantum(resource))
    }

    fn close_block(&mut self) -> Result<()> {
        let sender = self
            .sender
            .take()
            .ok_or_else(|| Error::Protocol("no block in progress".into()))?;
        let byproduct = sender.byproduct();
        let first = self.first_qubit();
        for (i, (&x, &z)) in byproduct.x_bits().iter().zip(sender.key_bits()).enumerate() {
            self.ledger.record(self.phase, first + i, x, z)?;
        }
        self.block += 1;
        if self.block > self.program.blocks() {
            self.block = 1;
            self.phase += 1;
        }
        Ok(())
    }

    fn decrypt(&mut self, bits: &[bool]) -> Result<()> {
        if bits.len() != self.program.n() {
            return Err(Error::DimensionMismatch {
                expected: self.program.n(),
                found: bits.len(),
            });
        }
        let key = self.final_key();
        self.output = Some(bits.iter().zip(&key).map(|(m, z)| m ^ z).collect());
        Ok(())
    }
}

impl Party for Client {
    fn start(&mut self, source: &mut dyn RandomSource) -> Result<Vec<Message>> {
        let n = self.program.n();
        let pads: Vec<bool> = (0..n).map(|_| source.pad_bit()).collect();
        let first = self
            .program
            .apply_layer(1, &StateVector::init_plus(n)?)?
            .apply_pauli(&PauliString::z_string(&pads), 0)?;
        self.ledger.record_phase(1, &vec![false; n], &pads)?;
        self.phase = 2;
        let resource = self.open_block(source)?;
        Ok(vec![
            Message::Params(self.params()),
            Message::Quantum(first),
            resource,
        ])
    }

    fn handle(&mut self, message: Message, source: &mut dyn RandomSource) -> Result<Vec<Message>> {
        let Message::Classical(bits) = message else {
            return Err(Error::Protocol(format!(
                "Alice cannot accept a {} message",
                message.kind()
            )));
        };
        if self.output.is_some() {
            return Err(Error::Protocol(
                "message after the final measurement".into(),
            ));
        }
        let Some(sender) = self.sender.as_mut() else {
            self.decrypt(&bits)?;
            return Ok(Vec::new());
        };
        sender.receive_outcomes(&bits)?;
        if !sender.is_finished() {
            return Ok(vec![Message::Quantum(sender.next_resource(source)?)]);
        }
        self.close_block()?;
        if self.gates_done() {
            return Ok(Vec::new());
        }
        Ok(vec![self.open_block(source)?])
    }
}

/// Bob: applies the public layers, teleports whatever he is sent and
/// measures at the end.
#[derive(Debug, Clone)]
pub struct Server {
    params: Option<Params>,
    register: Option<StateVector>,
    teleports: usize,
    auto_measure: bool,
    measured: bool,
}

impl Server {
    /// With `auto_measure` off Bob stops before the final measurement, which
    /// lets callers read off the exact output distribution.
    pub fn new(auto_measure: bool) -> Self {
        Self {
            params: None,
            register: None,
            teleports: 0,
            auto_measure,
            measured: false,
        }
    }

    pub fn params(&self) -> Option<Params> {
        self.params
    }

    pub fn register(&self) -> Option<&StateVector> {
        self.register.as_ref()
    }

    fn total_teleports(p: &Params) -> usize {
        (p.phases - 1) * p.n * p.x as usize / p.m
    }

    fn teleport(
        &mut self,
        p: Params,
        resource: StateVector,
        source: &mut dyn RandomSource,
    ) -> Result<Vec<Message>> {
        if resource.num_qubits() != p.m {
            return Err(Error::DimensionMismatch {
                expected: p.m,
                found: resource.num_qubits(),
            });
        }
        let total = Self::total_teleports(&p);
        let t = self.teleports;
        if t >= total {
            return Err(Error::Protocol("more resources than announced".into()));
        }
        let blocks = p.n / p.m;
        let per_phase = blocks * p.x as usize;
        let mut register = self
            .register
            .take()
            .ok_or_else(|| Error::Protocol("no register".into()))?;
        if t.is_multiple_of(per_phase) {
            let phase = 2 + t / per_phase;
            if phase % 2 == 1 {
                register = register.apply_cz_ladder();
            }
            register = register.apply_hadamard_all();
        }
        let block = (t / p.x as usize) % blocks;
        let round = teleport_round(&register, block * p.m, &resource, source)?;
        self.register = Some(round.state);
        self.teleports += 1;
        let mut replies = vec![Message::Classical(round.outcome)];
        if self.teleports == total && self.auto_measure {
            replies.push(Message::Classical(self.measure(source)?));
        }
        Ok(replies)
    }

    fn measure(&mut self, source: &mut dyn RandomSource) -> Result<Vec<bool>> {
        let register = self
            .register
            .as_ref()
            .ok_or_else(|| Error::Protocol("no register".into()))?;
        let index = source.outcome(&register.x_basis_probabilities())?;
        self.measured = true;
        Ok(index_to_bits(index, register.num_qubits()))
    }
}

impl Party for Server {
    fn handle(&mut self, message: Message, source: &mut dyn RandomSource) -> Result<Vec<Message>> {
        if self.measured {
            return Err(Error::Protocol("register already measured".into()));
        }
        match (message, self.params) {
            (Message::Params(p), None) => {
                if p.m == 0 || p.n % p.m != 0 || p.phases < 2 {
                    return Err(Error::Protocol(format!("unusable parameters {p:?}")));
                }
                self.params = Some(p);
                Ok(Vec::new())
            }
            (Message::Quantum(state), Some(p)) if self.register.is_none() => {
                if state.num_qubits() != p.n {
                    return Err(Error::DimensionMismatch {
                        expected: p.n,
                        found: state.num_qubits(),
                    });
                }
                self.register = Some(state);
                Ok(Vec::new())
            }
            (Message::Quantum(resource), Some(p)) => self.teleport(p, resource, source),
            (message, _) => Err(Error::Protocol(format!(
                "Bob cannot accept a {} message now",
                message.kind()
            ))),
        }
    }
}

/// Both parties and the channel between them, advanced one delivery at a time.
#[derive(Debug, Clone)]
pub struct Session {
    client: Client,
    server: Server,
    channel: Channel,
    started: bool,
}

impl Session {
    pub fn new(program: Program, auto_measure: bool) -> Self {
        Self {
            client: Client::new(program),
            server: Server::new(auto_measure),
            channel: Channel::new(),
            started: false,
        }
    }

    pub fn client(&self) -> &Client {
        &self.client
    }

    pub fn server(&self) -> &Server {
        &self.server
    }

    pub fn transcript(&self) -> &Transcript {
        self.channel.transcript()
    }

    /// Delivers one message (or starts the session). Returns true once no
    /// message is in flight.
    pub fn step(&mut self, source: &mut dyn RandomSource) -> Result<bool> {
        if !self.started {
            self.started = true;
            for m in self.client.start(source)? {
                self.channel.send(Direction::AliceToBob, m)?;
            }
        } else if let Some(m) = self.channel.receive(Direction::AliceToBob) {
            for reply in self.server.handle(m, source)? {
                self.channel.send(Direction::BobToAlice, reply)?;
            }
        } else if let Some(m) = self.channel.receive(Direction::BobToAlice) {
            for reply in self.client.handle(m, source)? {
                self.channel.send(Direction::AliceToBob, reply)?;
            }
        }
        Ok(self.channel.is_idle())
    }

    pub fn run(&mut self, source: &mut dyn RandomSource) -> Result<()> {
        while !self.step(source)? {}
        Ok(())
    }

    /// Distribution of Alice's decrypted output given everything so far, for
    /// a session run without the final measurement.
    pub fn output_distribution(&self) -> Result<Vec<f64>> {
        if !self.client.gates_done() {
            return Err(Error::IncompleteTranscript("gates still in flight".into()));
        }
        let register = self
            .server
            .register()
            .ok_or_else(|| Error::IncompleteTranscript("no register".into()))?;
        let key = bits_to_index(&self.client.final_key());
        let measured = register.x_basis_probabilities();
        let mut out = vec![0.0; measured.len()];
        for (b, p) in measured.into_iter().enumerate() {
            out[b ^ key] += p;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct GeneralRun {
    /// Decrypted output bits `o`.
    pub output: Vec<bool>,
    pub transcript: Transcript,
    pub ledger: KeyLedger,
}

/// One complete blind run of `program`.
pub fn run_program(program: &Program, source: &mut dyn RandomSource) -> Result<GeneralRun> {
    let mut session = Session::new(program.clone(), true);
    session.run(source)?;
    let output = session
        .client
        .output()
        .ok_or_else(|| Error::IncompleteTranscript("no measurement received".into()))?
        .to_vec();
    Ok(GeneralRun {
        output,
        ledger: session.client.ledger,
        transcript: session.channel.into_transcript(),
    })
}

/// Pad bits Alice draws and outcome bits Bob draws before the final
/// measurement.
pub fn branch_bits(program: &Program) -> (u64, u64) {
    let teleported = ((program.phases() - 1) * program.n()) as u64 * program.x() as u64;
    (program.n() as u64 + teleported, teleported)
}

/// Exact output distribution of the protocol, enumerating every outcome of
/// every teleportation (and every pad in [`PadMode::Enumerate`]), then
/// folding in Bob's final measurement analytically. Returns the
/// distribution and the number of leaves visited.
pub fn program_output_distribution(
    program: &Program,
    mode: PadMode,
    max_leaves: u64,
) -> Result<(Vec<f64>, u64)> {
    let (pads, outcomes) = branch_bits(program);
    let branching = outcomes + if mode == PadMode::Enumerate { pads } else { 0 };
    if branching >= 64 || 1u64 << branching > max_leaves {
        return Err(Error::EnumerationCap {
            required: 1u128 << branching.min(127),
            cap: max_leaves as u128,
        });
    }
    let mut total = vec![0.0; 1 << program.n()];
    let mut failure = None;
    let leaves = explore_steps(
        mode,
        max_leaves,
        Session::new(program.clone(), false),
        |s, tape| s.step(tape),
        |w, s| match s.output_distribution() {
            Ok(dist) => total.iter_mut().zip(dist).for_each(|(t, p)| *t += w * p),
            Err(e) => failure = Some(e),
        },
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok((total, leaves)),
    }
}
