#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cli;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use csq_core::fock::expm::ExpmRegistry;
use csq_core::registry::ModelRegistry;

use crate::cli::{Cli, Command};
use crate::commands::{Context, Failure, Outcome};

const EXIT_USAGE: u8 = 1;
const EXIT_CONTRACT: u8 = 2;

fn run(cli: &Cli) -> Outcome {
    let started = Instant::now();
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot start thread pool: {e}")))?;
    }
    if let Some(tol) = cli.global.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Failure::Usage("--tol must be positive".into()));
        }
    }
    if cli.global.fock_dim.is_some_and(|n| n < 2) {
        return Err(Failure::Usage("--fock-dim must be at least 2".into()));
    }
    let methods = ExpmRegistry::builtin();
    let ctx = Context {
        global: &cli.global,
        models: ModelRegistry::builtin(),
        expm: methods.get(&cli.global.expm)?,
        started: cli.global.timing.then_some(started),
    };
    match &cli.command {
        Command::Amp(a) => commands::amp(&ctx, a),
        Command::Hv(a) => commands::hv(&ctx, a),
        Command::SqueezeScan(a) => commands::squeeze_scan(&ctx, a),
        Command::Bell(a) => commands::bell(&ctx, a),
        Command::Lattice(a) => commands::lattice(&ctx, a),
        Command::OracleCheck => commands::oracle_check(&ctx),
    }
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    if !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let started = Instant::now();
    let result = run(&cli);
    if cli.global.timing {
        eprintln!(
            "csq {}: {:.3} s",
            cli.command.name(),
            started.elapsed().as_secs_f64()
        );
    }
    match result {
        Ok(text) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Contract { message, output }) => {
            if let Some(text) = output {
                emit(&text);
            }
            eprintln!("error: {message}");
            ExitCode::from(EXIT_CONTRACT)
        }
    }
}
