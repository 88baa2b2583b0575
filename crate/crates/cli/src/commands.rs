use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;

use serde::Serialize;

use iterblind::analysis::blindness::{
    iterated_view_density, maximally_mixed, trace_distance, MAX_VIEW_QUBITS,
};
use iterblind::analysis::{cost_report, verify_program, CostReport, EquivalenceReport};
use iterblind::protocol::{
    blind_teleport_gate, expected_output, oracle_simulate, run_program, teleport_gate,
    total_variation, Program,
};
use iterblind::source::substream;
use iterblind::statevec::{bit_string, fidelity_up_to_phase, MAX_QUBITS};
use iterblind::{DiagonalGate, Error, SeededSource, StateVector};

/// Stream label for the random gates and input states a command makes up.
const INPUT_STREAM: u64 = 0x1_0ADE;
const FIDELITY_TOLERANCE: f64 = 1e-8;
const BLINDNESS_TOLERANCE: f64 = 1e-9;

pub struct Outcome {
    pub report: String,
    pub pass: bool,
}

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::QubitCap { .. } | Error::LevelCap { .. } | Error::EnumerationCap { .. } => 3,
            Error::Protocol(_) | Error::IncompleteTranscript(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> String {
    if json {
        serde_json::to_string_pretty(value).expect("reports serialise") + "\n"
    } else {
        text()
    }
}

fn load_program(path: &Path) -> Result<Program, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Program::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct DemoReport {
    protocol: u8,
    m: usize,
    l: u32,
    seed: u64,
    gate: String,
    rounds: u32,
    byproduct: String,
    key: String,
    fidelity: f64,
    qubits_a2b: usize,
    bits_b2a: usize,
    pass: bool,
}

pub fn demo(
    blind: bool,
    m: usize,
    l: u32,
    seed: u64,
    identity: bool,
    early_halt: bool,
    json: bool,
) -> Result<Outcome, Failure> {
    if m == 0 || 2 * m > MAX_QUBITS {
        return Err(usage(format!("--m must be in 1..={}", MAX_QUBITS / 2)));
    }
    if l == 0 {
        return Err(usage("--l must be at least 1"));
    }
    if blind && early_halt {
        return Err(usage("--early-halt applies to protocol 1 only"));
    }
    let mut rng = substream(seed, INPUT_STREAM);
    let gate = if identity {
        DiagonalGate::identity(m)
    } else {
        DiagonalGate::random(m, l, &mut rng)?
    };
    let psi = StateVector::random(m, &mut rng)?;
    let mut source = SeededSource::new(seed);
    let run = if blind {
        blind_teleport_gate(&gate, l, &psi, &mut source)?
    } else {
        teleport_gate(&gate, l, &psi, &mut source, early_halt)?
    };
    let fidelity = fidelity_up_to_phase(&run.state, &expected_output(&gate, &psi, &run)?)?;
    let report = DemoReport {
        protocol: if blind { 2 } else { 1 },
        m,
        l,
        seed,
        gate: gate.to_string(),
        rounds: run.rounds,
        byproduct: run.byproduct.to_string(),
        key: run.key.to_string(),
        fidelity,
        qubits_a2b: run.transcript.qubits_a2b(),
        bits_b2a: run.transcript.bits_b2a(),
        pass: fidelity >= 1.0 - FIDELITY_TOLERANCE,
    };
    let text = || {
        let mut s = String::new();
        let _ = writeln!(s, "protocol   {}", report.protocol);
        let _ = writeln!(s, "gate       {}", report.gate);
        let _ = writeln!(s, "rounds     {} of {}", report.rounds, l);
        let _ = writeln!(s, "byproduct  {}", report.byproduct);
        if blind {
            let _ = writeln!(s, "key        {}", report.key);
        }
        let _ = writeln!(s, "fidelity   {:.12}", report.fidelity);
        let _ = writeln!(s, "qubits a2b {}", report.qubits_a2b);
        let _ = writeln!(s, "bits b2a   {}", report.bits_b2a);
        s
    };
    Ok(Outcome {
        report: emit(json, &report, text),
        pass: report.pass,
    })
}

#[derive(Serialize)]
struct RunReport {
    n: usize,
    samples: u64,
    seed: u64,
    histogram: BTreeMap<String, u64>,
    oracle: BTreeMap<String, f64>,
    total_variation: f64,
}

pub fn run(
    path: &Path,
    seed: u64,
    samples: u64,
    transcript: Option<&Path>,
    json: bool,
) -> Result<Outcome, Failure> {
    let program = load_program(path)?;
    if samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    let n = program.n();
    let label = |i: usize| bit_string(&iterblind::statevec::index_to_bits(i, n));
    let mut counts = vec![0u64; 1 << n];
    let mut source = SeededSource::new(seed);
    for i in 0..samples {
        let result = run_program(&program, &mut source)?;
        if i == 0 {
            if let Some(path) = transcript {
                std::fs::write(path, result.transcript.to_json_lines())
                    .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            }
        }
        counts[iterblind::statevec::bits_to_index(&result.output)] += 1;
    }
    let oracle = oracle_simulate(&program)?;
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / samples as f64).collect();
    let report = RunReport {
        n,
        samples,
        seed,
        histogram: counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (label(i), c))
            .collect(),
        oracle: oracle
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 1e-12)
            .map(|(i, &p)| (label(i), p))
            .collect(),
        total_variation: total_variation(&empirical, &oracle),
    };
    let text = || {
        let mut s = format!(
            "{:<width$}  {:>8}  {:>8}\n",
            "output",
            "count",
            "oracle",
            width = n.max(6)
        );
        for (i, &c) in counts.iter().enumerate() {
            if c > 0 || oracle[i] > 1e-12 {
                let _ = writeln!(
                    s,
                    "{:<width$}  {:>8}  {:>8.5}",
                    label(i),
                    c,
                    oracle[i],
                    width = n.max(6)
                );
            }
        }
        let _ = writeln!(
            s,
            "total variation to oracle: {:.5}",
            report.total_variation
        );
        s
    };
    Ok(Outcome {
        report: emit(json, &report, text),
        pass: true,
    })
}

/// Largest programs the exhaustive check accepts.
const VERIFY_MAX_QUBITS: usize = 3;
const VERIFY_MAX_PHASES: usize = 4;

pub fn verify(path: &Path, seed: u64, json: bool) -> Result<Outcome, Failure> {
    let program = load_program(path)?;
    if program.n() > VERIFY_MAX_QUBITS || program.phases() > VERIFY_MAX_PHASES {
        return Err(Failure {
            code: 3,
            message: format!(
                "exhaustive verification handles n <= {VERIFY_MAX_QUBITS} and J <= {VERIFY_MAX_PHASES}; use `iterblind run` to compare sampled outputs instead"
            ),
        });
    }
    let report: EquivalenceReport = verify_program(&program, seed).map_err(|e| match e {
        Error::EnumerationCap { .. } => Failure {
            code: 3,
            message: format!("{e}; use `iterblind run` to compare sampled outputs instead"),
        },
        other => other.into(),
    })?;
    let text = || {
        let mut s = String::new();
        let _ = writeln!(s, "coverage       {:?}", report.coverage);
        let _ = writeln!(s, "keys           {}", report.keys);
        let _ = writeln!(s, "leaves         {}", report.leaves);
        let _ = writeln!(s, "max deviation  {:.3e}", report.max_deviation);
        let _ = writeln!(
            s,
            "result         {}",
            if report.pass { "PASS" } else { "FAIL" }
        );
        s
    };
    Ok(Outcome {
        report: emit(json, &report, text),
        pass: report.pass,
    })
}

#[derive(Serialize)]
struct BlindnessReport {
    m: usize,
    l: u32,
    trials: usize,
    seed: u64,
    gates: Vec<String>,
    leaves: u64,
    distances: Vec<f64>,
    max_distance: f64,
    /// Largest trace distance between the first gate's view and any other.
    max_pairwise_distance: f64,
    tolerance: f64,
    pass: bool,
}

pub fn blindness(
    m: usize,
    l: u32,
    trials: usize,
    seed: u64,
    json: bool,
) -> Result<Outcome, Failure> {
    if m == 0 || l == 0 || trials == 0 {
        return Err(usage("--m, --l and --trials must be positive"));
    }
    if m * l as usize > MAX_VIEW_QUBITS {
        return Err(Failure {
            code: 3,
            message: format!(
                "m·l = {} exceeds the exhaustive limit of {MAX_VIEW_QUBITS}",
                m * l as usize
            ),
        });
    }
    let mut rng = substream(seed, INPUT_STREAM);
    let psi = StateVector::zero(m)?;
    let mut gates = Vec::new();
    let mut views = Vec::new();
    let mut distances = Vec::new();
    let mut leaves = 0;
    for _ in 0..trials {
        let gate = DiagonalGate::random(m, l, &mut rng)?;
        let view = iterated_view_density(&gate, l, &psi)?;
        distances.push(trace_distance(&view.matrix, &maximally_mixed(view.qubits))?);
        leaves = view.leaves;
        gates.push(gate.to_string());
        views.push(view.matrix);
    }
    let max_pairwise_distance = views[1..]
        .iter()
        .map(|v| trace_distance(&views[0], v))
        .collect::<Result<Vec<f64>, Error>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let max_distance = distances.iter().copied().fold(0.0, f64::max);
    let report = BlindnessReport {
        m,
        l,
        trials,
        seed,
        gates,
        leaves,
        distances,
        max_distance,
        max_pairwise_distance,
        tolerance: BLINDNESS_TOLERANCE,
        pass: max_distance <= BLINDNESS_TOLERANCE && max_pairwise_distance <= BLINDNESS_TOLERANCE,
    };
    let text = || {
        let mut s = String::new();
        for (g, d) in report.gates.iter().zip(&report.distances) {
            let _ = writeln!(s, "{g:<40}  {d:.3e}");
        }
        let _ = writeln!(s, "leaves per gate        {}", report.leaves);
        let _ = writeln!(s, "max distance to I/d    {:.3e}", report.max_distance);
        let _ = writeln!(
            s,
            "max pairwise distance  {:.3e}",
            report.max_pairwise_distance
        );
        let _ = writeln!(
            s,
            "result                 {}",
            if report.pass { "PASS" } else { "FAIL" }
        );
        s
    };
    Ok(Outcome {
        report: emit(json, &report, text),
        pass: report.pass,
    })
}

pub fn costs(path: &Path, seed: u64, json: bool) -> Result<Outcome, Failure> {
    let program = load_program(path)?;
    let run = run_program(&program, &mut SeededSource::new(seed))?;
    let report: CostReport = cost_report(&run.transcript)?;
    let pass = report.counts_match();
    let text = if json {
        report.to_json() + "\n"
    } else {
        report.to_table()
    };
    Ok(Outcome { report: text, pass })
}
