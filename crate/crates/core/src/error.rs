use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit count {requested} outside the supported range 1..={cap}")]
    QubitCap { requested: usize, cap: usize },

    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitRange { index: usize, num_qubits: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("measurement outcome {outcome:?} has zero probability")]
    ImpossibleOutcome { outcome: Vec<bool> },

    #[error("gate acts on {found} qubits, expected {expected}")]
    GateSize { expected: usize, found: usize },

    #[error("gate at level {level} is not representable at level {target}")]
    LevelOverflow { level: u32, target: u32 },

    #[error("level {level} exceeds the supported maximum {max}")]
    LevelCap { level: u32, max: u32 },

    #[error("invalid program: {field}: {reason}")]
    InvalidProgram { field: String, reason: String },

    #[error("protocol violation: {0}")]
    Protocol(String),

    #[error("incomplete transcript: {0}")]
    IncompleteTranscript(String),

    #[error("enumeration needs {required} branches, cap is {cap}")]
    EnumerationCap { required: u128, cap: u128 },

    #[error("domain error: {0}")]
    Domain(String),
}
