use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qat_cli::output::write_atomic;
use qat_cli::{run, CliError, Command, Format, Loaded};

/// Closed-form wave packets, grid propagation and quantum Arnold
/// transformations for the free particle and the harmonic oscillator.
#[derive(Parser)]
#[command(name = "qat", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Sample a state on a grid at the configured times.
    Eval(Common),
    /// Check ladder, number and commutator invariants on a grid.
    Audit(Common),
    /// Run the release–flight–capture protocol or an explicit trap schedule.
    Sling(Common),
    /// Tabulate Heisenberg products against the closed-form law.
    Uncertainty(Common),
    /// Map oscillator-frame states to the free frame and back.
    QatRoundtrip(Common),
}

#[derive(Args)]
struct Common {
    /// TOML configuration; built-in defaults are used when omitted.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file (written atomically); stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Reserved; every run is deterministic.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (cmd, args) = match cli.command {
        Sub::Eval(a) => (Command::Eval, a),
        Sub::Audit(a) => (Command::Audit, a),
        Sub::Sling(a) => (Command::Sling, a),
        Sub::Uncertainty(a) => (Command::Uncertainty, a),
        Sub::QatRoundtrip(a) => (Command::QatRoundtrip, a),
    };
    match execute(cmd, args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("qat {}: {e}", cmd.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cmd: Command, args: Common) -> Result<u8, CliError> {
    let _ = args.seed;
    let loaded = match &args.config {
        Some(p) => Loaded::from_path(p).map_err(CliError::Config)?,
        None => Loaded::defaults(),
    };
    let out_block = loaded.config.output.clone().unwrap_or_default();
    let format = args.format.or(out_block.format).unwrap_or(cmd.default_format());
    let out = args.out.or(out_block.path.map(PathBuf::from));

    let rendered = run(cmd, &loaded, format)?;
    match &out {
        Some(p) => write_atomic(p, rendered.text.as_bytes()).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        None => std::io::stdout()
            .write_all(rendered.text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string()))?,
    }
    for f in &rendered.failures {
        eprintln!("qat {}: tolerance exceeded: {f}", cmd.name());
    }
    Ok(if rendered.failures.is_empty() { 0 } else { 2 })
}
