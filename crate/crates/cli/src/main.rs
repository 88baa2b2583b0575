use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

/// Simulate blind quantum computation by iterated gate teleportation.
#[derive(Debug, Parser)]
#[command(name = "iterblind", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Protocol {
    #[value(name = "1")]
    Plain,
    #[value(name = "2")]
    Blind,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Teleport one random diagonal gate into a random register and check the result.
    Demo {
        #[arg(long, value_enum)]
        protocol: Protocol,
        /// Qubits per gate.
        #[arg(long)]
        m: usize,
        /// Level of the gate, which is also the number of rounds.
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use the identity gate instead of a random one.
        #[arg(long)]
        identity: bool,
        /// Stop after the first all-zero outcome (protocol 1 only).
        #[arg(long)]
        early_halt: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run a program file blindly and print the histogram of decrypted outputs.
    Run {
        program: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        /// Write the transcript of the first run here as JSON lines.
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Compare the protocol's exact output distribution with the direct simulation.
    Verify {
        program: PathBuf,
        /// Chooses the keys when pads are too many to enumerate.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Certify that Bob's key-averaged view is maximally mixed.
    Blindness {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: u32,
        /// Number of random gates to check.
        #[arg(long, default_value_t = 2)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Communication cost of one run of a program against the closed forms and bounds.
    Costs {
        program: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Demo {
            protocol,
            m,
            l,
            seed,
            identity,
            early_halt,
            json,
        } => commands::demo(
            matches!(protocol, Protocol::Blind),
            m,
            l,
            seed,
            identity,
            early_halt,
            json,
        ),
        Command::Run {
            program,
            seed,
            samples,
            transcript,
            json,
        } => commands::run(&program, seed, samples, transcript.as_deref(), json),
        Command::Verify {
            program,
            seed,
            json,
        } => commands::verify(&program, seed, json),
        Command::Blindness {
            m,
            l,
            trials,
            seed,
            json,
        } => commands::blindness(m, l, trials, seed, json),
        Command::Costs {
            program,
            seed,
            json,
        } => commands::costs(&program, seed, json),
    };
    match result {
        Ok(outcome) => {
            print!("{}", outcome.report);
            ExitCode::from(if outcome.pass { 0 } else { 1 })
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
