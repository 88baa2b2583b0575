//! Lower bounds on communication for blind computation.

use serde::Serialize;

use crate::error::{Error, Result};

/// Parameters of the lower bounds. `d` is the dimension of each transmitted
/// quantum system; `k` is the dyadic level of the gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundParams {
    /// Number of gates or phases, `J`.
    #[serde(rename = "J")]
    pub phases: u64,
    /// Size of the gate set, `G`.
    #[serde(rename = "G")]
    pub gate_set_size: u128,
    /// Number of measurement bases available to the server, `B`.
    #[serde(rename = "B")]
    pub bases: u64,
    pub d: u64,
    pub k: u64,
    pub n: u32,
    /// Number of distinguishable computations, `N_C`.
    #[serde(rename = "N_C")]
    pub computations: u128,
}

impl BoundParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("J", self.phases as u128),
            ("G", self.gate_set_size),
            ("B", self.bases as u128),
            ("d", self.d as u128),
            ("k", self.k as u128),
            ("n", self.n as u128),
            ("N_C", self.computations),
        ];
        match fields.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(Error::Domain(format!("{name} must be positive"))),
            None => Ok(()),
        }
    }

    fn log_bd(&self) -> Result<f64> {
        let bd = self.bases as f64 * self.d as f64;
        if bd < 2.0 {
            return Err(Error::Domain(format!("B·d must be at least 2, got {bd}")));
        }
        Ok(bd.ln())
    }
}

/// `J·k·(2^n − 1)`: qubits or bits needed by any protocol the no-programming
/// theorem applies to.
pub fn no_programming_bound(params: &BoundParams) -> Result<u128> {
    params.validate()?;
    let overflow = || Error::Domain("bound does not fit in 128 bits".into());
    let block = 1u128
        .checked_shl(params.n)
        .filter(|_| params.n < 128)
        .ok_or_else(overflow)?
        - 1;
    (params.phases as u128)
        .checked_mul(params.k as u128)
        .and_then(|v| v.checked_mul(block))
        .ok_or_else(overflow)
}

/// `J·ln G / ln(B·d)`: systems needed to single out one of `G^J` gate
/// sequences.
pub fn pigeonhole_bound(params: &BoundParams) -> Result<f64> {
    params.validate()?;
    Ok(params.phases as f64 * (params.gate_set_size as f64).ln() / params.log_bd()?)
}

/// `ln N_C / ln(B·d)`: systems needed to distinguish `N_C` computations.
pub fn computation_count_bound(params: &BoundParams) -> Result<f64> {
    params.validate()?;
    Ok((params.computations as f64).ln() / params.log_bd()?)
}

/// Number of canonical angle tables at level `level` on `m` qubits,
/// `(2^level)^(2^m − 1)`.
pub fn gate_set_cardinality(m: usize, level: u32) -> Result<u128> {
    let exponent = (level as u128)
        .checked_mul((1u128 << m.min(127)) - 1)
        .filter(|_| m < 127);
    match exponent {
        Some(e) if e < 128 => Ok(1u128 << e),
        _ => Err(Error::Domain(format!(
            "cardinality at m = {m}, level = {level} does not fit in 128 bits"
        ))),
    }
}
