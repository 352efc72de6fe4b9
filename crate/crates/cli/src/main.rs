use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use nsp_decay_lab::{execute, failure_line, Kind};

/// Decay-rate laboratory for the compressible Navier–Stokes–Poisson system.
///
/// Exit codes: 0 ok, 2 config, 3 numeric guard, 4 I/O.
#[derive(Parser, Debug)]
#[command(name = "nsp-decay-lab", version)]
struct Cli {
    /// Experiment to run.
    #[arg(value_enum)]
    kind: Kind,
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `out` in the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed (overrides `seed` in the config).
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 2 } else { 0 });
        }
    };
    let run = execute(cli.kind, &cli.config, cli.out.as_deref(), cli.seed);
    match &run.error {
        None => println!("{}", run.out.display()),
        Some(e) => eprintln!("{}", failure_line(e)),
    }
    ExitCode::from(run.exit_code)
}
