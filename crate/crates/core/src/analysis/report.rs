//! Communication cost of a program run against closed forms and bounds.

use std::fmt::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::protocol::{Message, Transcript};

use super::bounds::{no_programming_bound, BoundParams};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostReport {
    #[serde(rename = "J")]
    pub phases: usize,
    pub n: usize,
    pub m: usize,
    pub x: u32,
    pub qubits_a2b: usize,
    pub bits_b2a: usize,
    /// Totals recomputed from the individual messages.
    pub recounted_qubits: usize,
    pub recounted_bits: usize,
    /// `n + (J−1)·n·x`.
    pub expected_qubits: usize,
    /// `(J−1)·n·x + n`.
    pub expected_bits: usize,
    /// `n·J·x`, the leading-order total.
    pub leading_order: usize,
    /// `J·x·(2^n − 1)`, the no-programming bound with `k = x`.
    pub no_programming_bound: u128,
    /// `no_programming_bound / qubits_a2b`.
    pub bound_ratio: f64,
}

impl CostReport {
    /// Measured totals agree with the closed forms and their recount.
    pub fn counts_match(&self) -> bool {
        (self.qubits_a2b, self.bits_b2a) == (self.expected_qubits, self.expected_bits)
            && (self.recounted_qubits, self.recounted_bits) == (self.qubits_a2b, self.bits_b2a)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn to_table(&self) -> String {
        let rows: [(&str, String); 12] = [
            (
                "J, n, m, x",
                format!("{}, {}, {}, {}", self.phases, self.n, self.m, self.x),
            ),
            ("qubits Alice -> Bob", self.qubits_a2b.to_string()),
            ("bits Bob -> Alice", self.bits_b2a.to_string()),
            ("recounted qubits", self.recounted_qubits.to_string()),
            ("recounted bits", self.recounted_bits.to_string()),
            ("n + (J-1)nx", self.expected_qubits.to_string()),
            ("(J-1)nx + n", self.expected_bits.to_string()),
            ("nJx", self.leading_order.to_string()),
            ("Jx(2^n - 1)", self.no_programming_bound.to_string()),
            ("bound / measured", format!("{:.4}", self.bound_ratio)),
            (
                "measured <= nJx + n",
                (self.qubits_a2b <= self.leading_order + self.n).to_string(),
            ),
            ("counts match", self.counts_match().to_string()),
        ];
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let value_width = rows.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            writeln!(out, "{k:<width$}  {v:>value_width$}").expect("writing to a string");
        }
        out
    }
}

/// Builds the report from a finished program transcript.
pub fn cost_report(transcript: &Transcript) -> Result<CostReport> {
    let p = transcript
        .params()
        .ok_or_else(|| Error::IncompleteTranscript("no parameters announced".into()))?;
    if p.phases < 2 || p.m == 0 || p.n % p.m != 0 {
        return Err(Error::Protocol(format!("not a program transcript: {p:?}")));
    }
    let teleports = (p.phases - 1) * (p.n / p.m) * p.x as usize;
    let count = |kind: &str| {
        transcript
            .entries()
            .iter()
            .filter(|e| e.message.kind() == kind)
            .count()
    };
    let (quantum, classical) = (count("quantum"), count("classical"));
    if quantum != teleports + 1 || classical != teleports + 1 {
        return Err(Error::IncompleteTranscript(format!(
            "expected {} quantum and {} classical messages, found {quantum} and {classical}",
            teleports + 1,
            teleports + 1
        )));
    }
    let final_bits = transcript.entries().last().map(|e| match &e.message {
        Message::Classical(bits) => bits.len(),
        _ => 0,
    });
    if final_bits != Some(p.n) {
        return Err(Error::IncompleteTranscript(
            "final measurement missing".into(),
        ));
    }
    let (recounted_qubits, recounted_bits) = transcript.recount();
    let k = p.x as u64;
    let bound = no_programming_bound(&BoundParams {
        phases: p.phases as u64,
        gate_set_size: 1,
        bases: 2,
        d: 2,
        k,
        n: p.n as u32,
        computations: 1,
    })?;
    let teleported = (p.phases - 1) * p.n * p.x as usize;
    Ok(CostReport {
        phases: p.phases,
        n: p.n,
        m: p.m,
        x: p.x,
        qubits_a2b: transcript.qubits_a2b(),
        bits_b2a: transcript.bits_b2a(),
        recounted_qubits,
        recounted_bits,
        expected_qubits: p.n + teleported,
        expected_bits: teleported + p.n,
        leading_order: p.n * p.phases * p.x as usize,
        no_programming_bound: bound,
        bound_ratio: bound as f64 / transcript.qubits_a2b() as f64,
    })
}
