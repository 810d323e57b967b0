mod amplitudes;
mod args;
mod commands;
mod error;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lrn_core::RngSeed;
use serde_json::json;

use args::{Cli, Command, Format, LatticeCommand};
use commands::{Ctx, Payload};
use error::CliError;

fn run(cli: &Cli, warnings: &mut Vec<String>) -> Result<String, CliError> {
    let tol = cli.global.tolerances()?;
    let mut ctx = Ctx {
        tol,
        seed: RngSeed(cli.global.seed),
        warnings,
    };
    let payload = match &cli.command {
        Command::Classify(a) => commands::cmd_classify(a, &mut ctx)?,
        Command::Sweep(a) => commands::cmd_sweep(a, &mut ctx)?,
        Command::Group(a) => commands::cmd_group(a, &mut ctx)?,
        Command::Orbit(a) => commands::cmd_orbit(a, &mut ctx)?,
        Command::Lattice { command } => match command {
            LatticeCommand::Verify(a) => commands::cmd_lattice_verify(a, &mut ctx)?,
            LatticeCommand::Invariance(a) => commands::cmd_lattice_invariance(a, &mut ctx)?,
        },
        Command::EnumerateStabilizers(a) => commands::cmd_enumerate(a)?,
        Command::Model(a) => commands::cmd_model(a)?,
    };
    let default_format = match cli.command {
        Command::Sweep(_) => Format::Csv,
        _ => Format::Json,
    };
    let result = match (cli.global.format.unwrap_or(default_format), payload) {
        (Format::Csv, Payload::Table { header, rows }) => return commands::render_csv(&header, &rows),
        (Format::Csv, Payload::Json(_)) => {
            return Err(error::input("this command has no CSV form; use --format json"))
        }
        (Format::Json, Payload::Table { header, rows }) => commands::table_to_json(&header, &rows),
        (Format::Json, Payload::Json(v)) => v,
    };
    let envelope = json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "seed": cli.global.seed,
        "config_echo": cli,
        "tolerances": tol,
        "result": result,
    });
    Ok(serde_json::to_string_pretty(&envelope)? + "\n")
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.global.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    let mut warnings = Vec::new();
    let outcome = run(&cli, &mut warnings).and_then(|text| emit(&cli, &text));
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
