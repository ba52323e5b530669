use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use hyposym::app::{run_file, Options, EXIT_USAGE};
use hyposym::config::Command;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Reduce,
    VerifyQs,
    Conditions,
    Solve,
    Growth,
    Report,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Reduce => Command::Reduce,
            Cmd::VerifyQs => Command::VerifyQs,
            Cmd::Conditions => Command::Conditions,
            Cmd::Solve => Command::Solve,
            Cmd::Growth => Command::Growth,
            Cmd::Report => Command::Report,
        }
    }
}

/// Reduction, quasi-symmetriser and energy diagnostics for weakly hyperbolic systems.
///
/// Exit status: 0 on success, 2 when the input violates a checked property
/// (see the report's `violations`), 1 on usage, configuration or I/O errors.
#[derive(Debug, Parser)]
#[command(name = "hyposym", version)]
struct Cli {
    command: Cmd,
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// RNG seed for sampled checks; overrides `output.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let opts = Options {
        out: cli.out,
        seed: cli.seed,
        jobs: cli.jobs.map(|j| j as usize),
    };
    match run_file(cli.command.into(), &cli.config, &opts) {
        Ok(summary) => {
            for f in &summary.files {
                println!("wrote {f}");
            }
            for v in &summary.violations {
                eprintln!("property violated: {v}");
            }
            ExitCode::from(summary.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
