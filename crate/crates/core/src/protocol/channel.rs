use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::source::RandomSource;

use super::message::{Direction, Message, Transcript};

/// A protocol participant. Parties only ever see the messages addressed to
/// them; everything else they know comes from their own constructor.
pub trait Party {
    /// Messages sent before anything has been received.
    fn start(&mut self, _source: &mut dyn RandomSource) -> Result<Vec<Message>> {
        Ok(Vec::new())
    }

    /// Reacts to one incoming message, returning the replies.
    fn handle(&mut self, message: Message, source: &mut dyn RandomSource) -> Result<Vec<Message>>;
}

/// Ordered, reliable channel between Alice and Bob that records everything
/// it carries.
#[derive(Debug, Clone, Default)]
pub struct Channel {
    to_bob: VecDeque<Message>,
    to_alice: VecDeque<Message>,
    transcript: Transcript,
}

impl Channel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn send(&mut self, direction: Direction, message: Message) -> Result<()> {
        self.transcript.record(direction, message.clone())?;
        match direction {
            Direction::AliceToBob => self.to_bob.push_back(message),
            Direction::BobToAlice => self.to_alice.push_back(message),
        }
        Ok(())
    }

    pub fn receive(&mut self, direction: Direction) -> Option<Message> {
        match direction {
            Direction::AliceToBob => self.to_bob.pop_front(),
            Direction::BobToAlice => self.to_alice.pop_front(),
        }
    }

    pub fn is_idle(&self) -> bool {
        self.to_bob.is_empty() && self.to_alice.is_empty()
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn into_transcript(self) -> Transcript {
        self.transcript
    }
}

/// Drives Alice and Bob in lock step until no message is in flight.
pub fn run_lockstep(
    alice: &mut dyn Party,
    bob: &mut dyn Party,
    channel: &mut Channel,
    source: &mut dyn RandomSource,
) -> Result<()> {
    for m in alice.start(source)? {
        channel.send(Direction::AliceToBob, m)?;
    }
    // Each pass moves every queued message one hop, so this bound is only hit
    // by a party that keeps replying forever.
    for _ in 0..1_000_000 {
        if channel.is_idle() {
            return Ok(());
        }
        while let Some(m) = channel.receive(Direction::AliceToBob) {
            for reply in bob.handle(m, source)? {
                channel.send(Direction::BobToAlice, reply)?;
            }
        }
        while let Some(m) = channel.receive(Direction::BobToAlice) {
            for reply in alice.handle(m, source)? {
                channel.send(Direction::AliceToBob, reply)?;
            }
        }
    }
    Err(Error::Protocol("parties did not terminate".into()))
}
