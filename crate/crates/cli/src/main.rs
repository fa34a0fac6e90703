//! `gck`: check, convert and fuzz generalized complex structures.
//!
//! Exit codes: 0 certified, 1 refuted (or a mathematical precondition
//! failed), 2 usage, parse or name-resolution error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use gck_core::fuzz::run_fuzz;
use gck_core::suite::{convert, run_suite, ConvertOp, Suite};
use gck_core::{Error, StructureFile};

#[derive(Parser)]
#[command(name = "gck", version, about = "Exact checks for generalized complex structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a check suite on a named structure.
    Check {
        file: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        /// Also write a machine-readable report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Convert a named structure and print the new file on stdout.
    Convert {
        file: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long, value_parser = parse_op)]
        op: ConvertOp,
        /// Name of the closed 2-form for `--op gauge`.
        #[arg(long = "B")]
        b: Option<String>,
        /// Convert even if the input is refuted.
        #[arg(long)]
        force: bool,
    },
    /// Print a structure file in canonical form.
    Fmt { file: PathBuf },
    /// Run the randomized equivalence properties.
    Fuzz {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        degree: u32,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_op(s: &str) -> Result<ConvertOp, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::Resolution(_)
            | Error::UnknownCoordinate(_)
            | Error::DimensionMismatch { .. }
            | Error::ChartMismatch(_)
            | Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<StructureFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(StructureFile::parse(&text)?)
}

/// A closed pipe (`gck ... | head`) is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("values serialize");
    std::fs::write(path, text + "\n").map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Check { file, target, suite, json } => {
            let f = load(&file)?;
            let started = Instant::now();
            let report = run_suite(&f, &target, suite)?;
            let elapsed = started.elapsed();
            emit(&report.to_string());
            if let Some(out) = json {
                let doc = serde_json::json!({
                    "file": file.display().to_string(),
                    "target": target,
                    "suite": suite.name(),
                    "elapsed_ms": elapsed.as_secs_f64() * 1e3,
                    "report": report.to_json(),
                });
                write_json(&out, &doc)?;
            }
            Ok(report.certified())
        }
        Command::Convert { file, target, op, b, force } => {
            let f = load(&file)?;
            let out = convert(&f, &target, op, b.as_deref(), force)?;
            emit(&out.to_canonical_string()?);
            Ok(true)
        }
        Command::Fmt { file } => {
            emit(&load(&file)?.to_canonical_string()?);
            Ok(true)
        }
        Command::Fuzz { seed, dim, degree, count, json } => {
            let summary = run_fuzz(seed, dim, degree, count)?;
            emit(&summary.to_string());
            if let Some(out) = json {
                write_json(&out, &serde_json::to_value(&summary).expect("summary serializes"))?;
            }
            Ok(summary.all_passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
