//! The two parties, their messages and the three protocol variants: plain and
//! blind iterated teleportation of one gate, and blind computation of a
//! layered program.

pub mod channel;
pub mod general;
pub mod iterated;
pub mod ledger;
pub mod message;
pub mod oracle;
pub mod program;

pub use channel::{run_lockstep, Channel, Party};
pub use general::{
    branch_bits, program_output_distribution, run_program, Client, GeneralRun, Server, Session,
};
pub use iterated::{
    blind_teleport_gate, expected_output, teleport_gate, IteratedRun, IteratedSender,
};
pub use ledger::KeyLedger;
pub use message::{
    counts_from_json_lines, Direction, Message, Params, Transcript, TranscriptRecord,
};
pub use oracle::{oracle_simulate, total_variation};
pub use program::Program;
