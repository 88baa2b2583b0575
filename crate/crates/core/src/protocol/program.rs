//! Alice's private computation and its JSON file format.
//!
//! ```json
//! {
//!   "version": 1,
//!   "n": 2, "m": 1, "x": 2, "J": 2,
//!   "gates": [
//!     [ {"m": 1, "level": 2, "numerators": [0, 1]}, {"m": 1, "level": 0, "numerators": [0, 0]} ],
//!     [ ... phase 2 ... ]
//!   ]
//! }
//! ```
//!
//! `gates[j-1][p-1]` is `D_{j,p}`, acting on qubits `(p-1)m .. pm-1`. Gate
//! numerator tables follow [`DiagonalGate`]'s wire form. `version` may be
//! omitted and defaults to 1.

use serde::{Deserialize, Serialize};

use crate::diagonal::{DiagonalGate, GateRecord};
use crate::error::{Error, Result};
use crate::statevec::{StateVector, MAX_QUBITS};

pub const PROGRAM_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    n: usize,
    m: usize,
    x: u32,
    phases: usize,
    gates: Vec<Vec<DiagonalGate>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProgramFile {
    #[serde(default = "default_version")]
    version: u32,
    n: usize,
    m: usize,
    x: u32,
    #[serde(rename = "J")]
    phases: usize,
    gates: Vec<Vec<GateRecord>>,
}

fn default_version() -> u32 {
    PROGRAM_FORMAT_VERSION
}

fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::InvalidProgram {
        field: field.into(),
        reason: reason.into(),
    }
}

impl Program {
    /// Validates and builds a program. Gates below level `x` are accepted as
    /// members of `𝒟_{m,x}`.
    pub fn new(
        n: usize,
        m: usize,
        x: u32,
        phases: usize,
        gates: Vec<Vec<DiagonalGate>>,
    ) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(invalid(
                "n",
                format!("must be in 1..={MAX_QUBITS}, got {n}"),
            ));
        }
        if m == 0 || !n.is_multiple_of(m) {
            return Err(invalid("m", format!("must divide n = {n}, got {m}")));
        }
        if x < 2 {
            return Err(invalid("x", format!("must be at least 2, got {x}")));
        }
        if phases < 2 || !phases.is_multiple_of(2) {
            return Err(invalid(
                "J",
                format!("must be even and at least 2, got {phases}"),
            ));
        }
        if gates.len() != phases {
            return Err(invalid(
                "gates",
                format!("expected {phases} phases, found {}", gates.len()),
            ));
        }
        let blocks = n / m;
        for (j, row) in gates.iter().enumerate() {
            if row.len() != blocks {
                return Err(invalid(
                    format!("gates[{j}]"),
                    format!("expected {blocks} blocks, found {}", row.len()),
                ));
            }
            for (p, g) in row.iter().enumerate() {
                if g.m() != m {
                    return Err(invalid(
                        format!("gates[{j}][{p}].m"),
                        format!("expected {m}, found {}", g.m()),
                    ));
                }
                if !g.is_member(x) {
                    return Err(invalid(
                        format!("gates[{j}][{p}].level"),
                        format!("gate is not in level {x}"),
                    ));
                }
            }
        }
        Ok(Self {
            n,
            m,
            x,
            phases,
            gates,
        })
    }

    /// A program whose every gate is drawn uniformly at level `x`.
    pub fn random<R: rand::Rng + ?Sized>(
        n: usize,
        m: usize,
        x: u32,
        phases: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if m == 0 || !n.is_multiple_of(m) {
            return Err(invalid("m", format!("must divide n = {n}, got {m}")));
        }
        let gates = (0..phases)
            .map(|_| {
                (0..n / m)
                    .map(|_| DiagonalGate::random(m, x, rng))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, m, x, phases, gates)
    }

    /// Every gate the identity.
    pub fn identity(n: usize, m: usize, x: u32, phases: usize) -> Result<Self> {
        if m == 0 || !n.is_multiple_of(m) {
            return Err(invalid("m", format!("must divide n = {n}, got {m}")));
        }
        Self::new(
            n,
            m,
            x,
            phases,
            vec![vec![DiagonalGate::identity(m); n / m]; phases],
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn x(&self) -> u32 {
        self.x
    }

    /// `J`.
    pub fn phases(&self) -> usize {
        self.phases
    }

    /// `P = n / m`.
    pub fn blocks(&self) -> usize {
        self.n / self.m
    }

    /// `D_{j,p}` with both indices starting at 1.
    pub fn gate(&self, j: usize, p: usize) -> &DiagonalGate {
        &self.gates[j - 1][p - 1]
    }

    /// Applies `D̄_j = ⊗_p D_{j,p}` to an `n`-qubit state.
    pub fn apply_layer(&self, j: usize, state: &StateVector) -> Result<StateVector> {
        (1..=self.blocks()).try_fold(state.clone(), |s, p| {
            s.apply_diagonal(&self.gate(j, p).to_unitary_diag(), (p - 1) * self.m)
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ProgramFile = serde_json::from_str(text).map_err(|e| {
            invalid(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        if file.version != PROGRAM_FORMAT_VERSION {
            return Err(invalid(
                "version",
                format!("unsupported version {}", file.version),
            ));
        }
        let gates = file
            .gates
            .into_iter()
            .enumerate()
            .map(|(j, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(p, rec)| {
                        DiagonalGate::try_from(rec)
                            .map_err(|e| invalid(format!("gates[{j}][{p}]"), e.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.n, file.m, file.x, file.phases, gates)
    }

    pub fn to_json(&self) -> String {
        let file = ProgramFile {
            version: PROGRAM_FORMAT_VERSION,
            n: self.n,
            m: self.m,
            x: self.x,
            phases: self.phases,
            gates: self
                .gates
                .iter()
                .map(|row| row.iter().cloned().map(GateRecord::from).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("program serialises")
    }
}
