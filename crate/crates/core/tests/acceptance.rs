//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use iterblind::analysis::{
    blindness_distance, cost_report, gate_set_cardinality, iterated_view_density, trace_distance,
    verify_program,
};
use iterblind::explore::{explore, PadMode};
use iterblind::protocol::{
    blind_teleport_gate, expected_output, oracle_simulate, run_program, teleport_gate,
    total_variation,
};
use iterblind::statevec::{bits_to_index, fidelity_up_to_phase};
use iterblind::teleport::teleport_round;
use iterblind::{DiagonalGate, Result, ScriptedSource, SeededSource, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict {
        pass,
        detail: detail.into(),
    })
}

fn teleportation() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 1.0f64;
    for _ in 0..200 {
        let m = rng.random_range(1..=3);
        let gate = DiagonalGate::random(m, rng.random_range(0..=4), &mut rng)?;
        let psi = StateVector::random(m, &mut rng)?;
        let s = rng.random_range(0..1usize << m);
        let resource = StateVector::init_plus(m)?.apply_diagonal(&gate.to_unitary_diag(), 0)?;
        let round = teleport_round(&psi, 0, &resource, &mut ScriptedSource::new([], [s]))?;
        let want = gate_matrix(&gate) * x_string(&round.outcome) * vector(&psi);
        worst = worst.min(overlap(&vector(&round.state), &want));
    }
    verdict(
        worst >= 1.0 - 1e-10,
        format!("200 cases, min fidelity {worst:.15}"),
    )
}

fn level_reduction() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut failures = 0;
    for _ in 0..500 {
        let m = rng.random_range(1..=3);
        let level = rng.random_range(1..=5);
        let gate = DiagonalGate::random(m, level, &mut rng)?;
        let a: Vec<bool> = (0..m).map(|_| rng.random()).collect();
        let updated = gate.conjugate_update(&a)?;
        let x = x_string(&a);
        let d = gate_matrix(&gate);
        let exact = updated.is_member(level - 1) && updated.with_level(level - 1).is_ok();
        if !exact
            || !equal_up_to_phase(&gate_matrix(&updated), &(&x * &d * &x * d.adjoint()), 1e-10)
        {
            failures += 1;
        }
    }
    verdict(failures == 0, format!("500 cases, {failures} failures"))
}

fn telescoping() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst = 1.0f64;
    let mut leaves = 0;
    for (m, rounds) in [(1usize, 3u32), (2, 2)] {
        for _ in 0..5 {
            let gate = DiagonalGate::random(m, rounds, &mut rng)?;
            let psi = StateVector::random(m, &mut rng)?;
            let mut bad = None;
            leaves += explore(
                PadMode::Enumerate,
                1 << 10,
                |tape| teleport_gate(&gate, rounds, &psi, tape, false),
                |_, run| match expected_output(&gate, &psi, &run)
                    .and_then(|want| fidelity_up_to_phase(&run.state, &want))
                {
                    Ok(f) => worst = worst.min(f),
                    Err(e) => bad = Some(e),
                },
            )?;
            if let Some(e) = bad {
                return Err(e);
            }
        }
    }
    verdict(
        worst >= 1.0 - 1e-10,
        format!("{leaves} branches at (m,l) = (1,3), (2,2), min fidelity {worst:.15}"),
    )
}

fn blind_iterated() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    // (a) every pad and outcome branch at m = 1, l = 2
    let gate = DiagonalGate::random(1, 2, &mut rng)?;
    let psi = StateVector::random(1, &mut rng)?;
    let mut worst = 1.0f64;
    let leaves = explore(
        PadMode::Enumerate,
        1 << 10,
        |tape| blind_teleport_gate(&gate, 2, &psi, tape),
        |_, run| {
            let want = z_string(run.key.z_bits())
                * x_string(run.byproduct.x_bits())
                * gate_matrix(&gate)
                * vector(&psi);
            worst = worst.min(overlap(&vector(&run.state), &want));
        },
    )?;
    // (b) key-averaged views
    let mut max_distance = 0.0f64;
    for (m, l) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)] {
        max_distance = max_distance.max(blindness_distance(
            &DiagonalGate::random(m, l, &mut rng)?,
            l,
        )?);
    }
    // (c) two distinct gates
    let zero = StateVector::zero(1)?;
    let a = DiagonalGate::new(1, 2, vec![0, 1])?;
    let b = DiagonalGate::new(1, 2, vec![0, 2])?;
    let pairwise = trace_distance(
        &iterated_view_density(&a, 2, &zero)?.matrix,
        &iterated_view_density(&b, 2, &zero)?.matrix,
    )?;
    verdict(
        worst >= 1.0 - 1e-10 && max_distance <= 1e-9 && pairwise <= 1e-9,
        format!("(a) {leaves} branches, min fidelity {worst:.15}; (b) max distance to I/d {max_distance:.2e}; (c) distance between gates {pairwise:.2e}"),
    )
}

fn end_to_end() -> Result<Verdict> {
    let mut worst = 0.0f64;
    let mut all_pass = true;
    let mut summary = Vec::new();
    for (name, program) in acceptance_fixtures() {
        let report = verify_program(&program, 7)?;
        worst = worst.max(report.max_deviation);
        all_pass &= report.pass;
        summary.push(format!(
            "{}:{:?}",
            name.trim_end_matches(".json"),
            report.coverage
        ));
    }
    let program = fixture("n3_m1_j2.json");
    let oracle = oracle_simulate(&program)?;
    let mut source = SeededSource::new(2024);
    let shots = 10_000;
    let mut freq = vec![0.0; oracle.len()];
    for _ in 0..shots {
        freq[bits_to_index(&run_program(&program, &mut source)?.output)] += 1.0 / shots as f64;
    }
    let tv = total_variation(&freq, &oracle);
    verdict(
        all_pass && worst <= 1e-9 && tv <= 0.02,
        format!(
            "{} fixtures, max deviation {worst:.2e} [{}]; 10^4 shots of n3_m1_j2, TV {tv:.4}",
            summary.len(),
            summary.join(" ")
        ),
    )
}

fn accounting() -> Result<Verdict> {
    let mut pass = true;
    let mut ratios = Vec::new();
    for (_, program) in acceptance_fixtures() {
        let run = run_program(&program, &mut SeededSource::new(5))?;
        let report = cost_report(&run.transcript)?;
        let (n, j, x) = (program.n(), program.phases(), program.x() as usize);
        pass &= report.counts_match();
        pass &= report.qubits_a2b == n + (j - 1) * n * x && report.bits_b2a == (j - 1) * n * x + n;
        pass &= report.qubits_a2b <= n * j * x + n;
        if program.m() == n {
            let closed = (j * x * ((1 << n) - 1)) as f64 / (n + (j - 1) * n * x) as f64;
            pass &= (report.bound_ratio - closed).abs() < 1e-12;
            ratios.push((j, n, report.bound_ratio));
        }
    }
    for j in [2, 4] {
        let trend: Vec<f64> = ratios.iter().filter(|r| r.0 == j).map(|r| r.2).collect();
        pass &= trend.len() == 3 && trend.windows(2).all(|w| w[1] > w[0]);
    }
    let shown: Vec<String> = ratios
        .iter()
        .map(|(j, n, r)| format!("J={j} n={n}: {r:.3}"))
        .collect();
    verdict(
        pass,
        format!(
            "counts exact on all fixtures; bound/measured {}",
            shown.join(", ")
        ),
    )
}

fn early_halt() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut total_rounds = 0u64;
    let mut worst = 1.0f64;
    for seed in 0..2000u64 {
        let gate = DiagonalGate::random(1, 64, &mut rng)?;
        let psi = StateVector::random(1, &mut rng)?;
        let run = teleport_gate(&gate, 64, &psi, &mut SeededSource::new(seed), true)?;
        total_rounds += run.rounds as u64;
        worst = worst.min(fidelity_up_to_phase(
            &run.state,
            &expected_output(&gate, &psi, &run)?,
        )?);
    }
    let mean = total_rounds as f64 / 2000.0;
    verdict(
        (1.8..=2.2).contains(&mean) && worst >= 1.0 - 1e-10,
        format!("mean rounds {mean:.4} over 2000 runs, min fidelity {worst:.15}"),
    )
}

fn cardinality() -> Result<Verdict> {
    let small = DiagonalGate::enumerate(1, 2)?.len();
    let pair = DiagonalGate::enumerate(2, 1)?.len();
    let pass = small == 4
        && pair == 8
        && gate_set_cardinality(1, 2)? == 4
        && gate_set_cardinality(2, 1)? == 8;
    verdict(pass, format!("(m=1, L=2): {small}, (m=2, L=1): {pair}"))
}

type Criterion = (&'static str, fn() -> Result<Verdict>, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "teleportation postcondition",
            teleportation,
            Duration::from_secs(5),
        ),
        ("level reduction", level_reduction, Duration::from_secs(5)),
        ("plain protocol telescoping", telescoping, Duration::MAX),
        (
            "blind protocol correctness and blindness",
            blind_iterated,
            Duration::from_secs(60),
        ),
        (
            "program end-to-end against oracle",
            end_to_end,
            Duration::from_secs(120),
        ),
        ("communication accounting", accounting, Duration::MAX),
        ("early halt", early_halt, Duration::MAX),
        ("gate set cardinality", cardinality, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(v) => (v.pass && elapsed <= *budget, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let limit = if *budget == Duration::MAX {
            String::new()
        } else {
            format!(" (limit {}s)", budget.as_secs())
        };
        println!(
            "criterion {} {} {name}: {detail}; {:.2}s{limit}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        if !pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        println!("all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    }
}
