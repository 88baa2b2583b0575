use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{bit_string, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AliceToBob,
    BobToAlice,
}

/// Public size parameters announced by Alice before any quantum message.
/// For a single blind teleportation (`J = 1`, `n = m`) `x` is the round
/// count `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(rename = "J")]
    pub phases: usize,
    pub n: usize,
    pub m: usize,
    pub x: u32,
}

#[derive(Debug, Clone)]
pub enum Message {
    Params(Params),
    /// A quantum state sent by Alice; its size is the number of qubits.
    Quantum(StateVector),
    /// Measurement results sent by Bob.
    Classical(Vec<bool>),
}

impl Message {
    pub fn kind(&self) -> &'static str {
        match self {
            Message::Params(_) => "params",
            Message::Quantum(_) => "quantum",
            Message::Classical(_) => "classical",
        }
    }

    /// Qubits for quantum payloads, bits for classical ones, 0 for params.
    pub fn size(&self) -> usize {
        match self {
            Message::Params(_) => 0,
            Message::Quantum(state) => state.num_qubits(),
            Message::Classical(bits) => bits.len(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub direction: Direction,
    pub message: Message,
}

/// Ordered record of every message with running communication totals.
/// Entries are shared, so cloning a transcript mid-run is cheap.
#[derive(Debug, Clone, Default)]
pub struct Transcript {
    entries: Vec<Arc<Entry>>,
    qubits_a2b: usize,
    bits_b2a: usize,
}

/// One line of the JSON-lines transcript export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptRecord {
    pub index: usize,
    pub direction: Direction,
    #[serde(rename = "type")]
    pub kind: String,
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bits: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Params>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a message, enforcing who may send what: params once and first
    /// from Alice, quantum payloads only from Alice, classical bits only from Bob.
    pub fn record(&mut self, direction: Direction, message: Message) -> Result<()> {
        let first = self.entries.is_empty();
        match (&message, direction) {
            (Message::Params(_), Direction::AliceToBob) if first => {}
            (Message::Params(_), _) => {
                return Err(Error::Protocol(
                    "params must be the first message and come from Alice".into(),
                ))
            }
            (_, _) if first => {
                return Err(Error::Protocol(format!(
                    "{} message sent before params",
                    message.kind()
                )))
            }
            (Message::Quantum(_), Direction::AliceToBob) => self.qubits_a2b += message.size(),
            (Message::Classical(_), Direction::BobToAlice) => self.bits_b2a += message.size(),
            (_, dir) => {
                return Err(Error::Protocol(format!(
                    "{} message may not travel {dir:?}",
                    message.kind()
                )))
            }
        }
        self.entries.push(Arc::new(Entry { direction, message }));
        Ok(())
    }

    pub fn entries(&self) -> &[Arc<Entry>] {
        &self.entries
    }

    pub fn qubits_a2b(&self) -> usize {
        self.qubits_a2b
    }

    pub fn bits_b2a(&self) -> usize {
        self.bits_b2a
    }

    pub fn params(&self) -> Option<Params> {
        match self.entries.first().map(|e| &e.message) {
            Some(Message::Params(p)) => Some(*p),
            _ => None,
        }
    }

    /// Every quantum state Alice sent, in order.
    pub fn quantum_payloads(&self) -> impl Iterator<Item = &StateVector> {
        self.entries.iter().filter_map(|e| match &e.message {
            Message::Quantum(s) => Some(s),
            _ => None,
        })
    }

    pub fn classical_payloads(&self) -> impl Iterator<Item = &[bool]> {
        self.entries.iter().filter_map(|e| match &e.message {
            Message::Classical(b) => Some(b.as_slice()),
            _ => None,
        })
    }

    /// Totals recomputed from the recorded messages.
    pub fn recount(&self) -> (usize, usize) {
        let qubits = self.quantum_payloads().map(StateVector::num_qubits).sum();
        let bits = self.classical_payloads().map(<[bool]>::len).sum();
        (qubits, bits)
    }

    /// Checks the direction invariant and the running totals.
    pub fn validate(&self) -> Result<()> {
        let mut replay = Transcript::new();
        for e in &self.entries {
            replay.record(e.direction, e.message.clone())?;
        }
        if self.recount() != (self.qubits_a2b, self.bits_b2a) {
            return Err(Error::Protocol(
                "transcript totals disagree with its messages".into(),
            ));
        }
        Ok(())
    }

    pub fn records(&self) -> Vec<TranscriptRecord> {
        self.entries
            .iter()
            .enumerate()
            .map(|(index, e)| TranscriptRecord {
                index,
                direction: e.direction,
                kind: e.message.kind().to_string(),
                size: e.message.size(),
                bits: match &e.message {
                    Message::Classical(b) => Some(bit_string(b)),
                    _ => None,
                },
                params: match &e.message {
                    Message::Params(p) => Some(*p),
                    _ => None,
                },
            })
            .collect()
    }

    /// One JSON object per line, in message order.
    pub fn to_json_lines(&self) -> String {
        self.records()
            .iter()
            .map(|r| serde_json::to_string(r).expect("transcript records serialise") + "\n")
            .collect()
    }
}

/// Recomputes `(qubits_a2b, bits_b2a)` from an exported transcript.
pub fn counts_from_json_lines(text: &str) -> Result<(usize, usize)> {
    let mut totals = (0, 0);
    for (i, line) in text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
    {
        let rec: TranscriptRecord = serde_json::from_str(line)
            .map_err(|e| Error::Protocol(format!("transcript line {}: {e}", i + 1)))?;
        match (rec.kind.as_str(), rec.direction) {
            ("quantum", Direction::AliceToBob) => totals.0 += rec.size,
            ("classical", Direction::BobToAlice) => totals.1 += rec.size,
            ("params", Direction::AliceToBob) => {}
            (kind, dir) => {
                return Err(Error::Protocol(format!(
                    "transcript line {}: {kind} message travelling {dir:?}",
                    i + 1
                )))
            }
        }
    }
    Ok(totals)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> Message {
        Message::Params(Params {
            phases: 2,
            n: 2,
            m: 1,
            x: 2,
        })
    }

    #[test]
    fn direction_rules() {
        let mut t = Transcript::new();
        assert!(t
            .record(Direction::AliceToBob, Message::Classical(vec![true]))
            .is_err());
        t.record(Direction::AliceToBob, params()).unwrap();
        assert!(t.record(Direction::AliceToBob, params()).is_err());
        assert!(t
            .record(
                Direction::BobToAlice,
                Message::Quantum(StateVector::init_plus(1).unwrap())
            )
            .is_err());
        assert!(t
            .record(Direction::AliceToBob, Message::Classical(vec![true]))
            .is_err());
        t.record(
            Direction::AliceToBob,
            Message::Quantum(StateVector::init_plus(2).unwrap()),
        )
        .unwrap();
        t.record(
            Direction::BobToAlice,
            Message::Classical(vec![true, false, true]),
        )
        .unwrap();
        assert_eq!((t.qubits_a2b(), t.bits_b2a()), (2, 3));
        assert_eq!(t.recount(), (2, 3));
        t.validate().unwrap();
    }

    #[test]
    fn json_lines_reproduce_counts() {
        let mut t = Transcript::new();
        t.record(Direction::AliceToBob, params()).unwrap();
        for _ in 0..3 {
            t.record(
                Direction::AliceToBob,
                Message::Quantum(StateVector::init_plus(2).unwrap()),
            )
            .unwrap();
            t.record(Direction::BobToAlice, Message::Classical(vec![false, true]))
                .unwrap();
        }
        let text = t.to_json_lines();
        assert_eq!(text.lines().count(), 7);
        assert_eq!(
            text.lines().next().unwrap(),
            r#"{"index":0,"direction":"alice_to_bob","type":"params","size":0,"params":{"J":2,"n":2,"m":1,"x":2}}"#
        );
        assert_eq!(
            text.lines().nth(2).unwrap(),
            r#"{"index":2,"direction":"bob_to_alice","type":"classical","size":2,"bits":"01"}"#
        );
        assert_eq!(counts_from_json_lines(&text).unwrap(), (6, 6));
        assert!(counts_from_json_lines(
            r#"{"index":0,"direction":"bob_to_alice","type":"quantum","size":1}"#
        )
        .is_err());
    }
}
