//! Simulation of blind quantum computation by iterated gate teleportation.
//!
//! A client (Alice) gets a server (Bob) to run diagonal gates drawn from a
//! dyadic family by teleporting them into his register, one-time padding
//! every quantum message so that Bob sees only maximally mixed states. The
//! crate provides a dense state-vector simulator, exact gate arithmetic, the
//! protocol state machines, an oracle for the intended computation, and
//! tools to check blindness and communication cost.

pub mod analysis;
pub mod diagonal;
pub mod error;
pub mod explore;
pub mod protocol;
pub mod source;
pub mod statevec;
pub mod teleport;

pub use diagonal::DiagonalGate;
pub use error::{Error, Result};
pub use source::{RandomSource, ScriptedSource, SeededSource};
pub use statevec::{PauliString, StateVector};
