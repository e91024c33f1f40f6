//! `jss`: sign-symmetry, compound and spectral analysis of a square matrix.
//!
//! Exit status: 0 on any completed analysis, 2 on unreadable input, 3 on
//! solver failure, 4 on bad flags.

mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use jss_core::io::{read_matrix, InputFormat};
use jss_core::spectral::PERIPHERAL_TOL;
use jss_core::Error;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "jss", version, about = "Analyse the sign symmetry and peripheral spectrum of a matrix")]
struct Cli {
    /// Input matrix, CSV rows or JSON {"n", "entries"}
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
    /// Input format; guessed from the extension when absent
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the JSON report here instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Build an approximating sequence and print its table
    #[arg(long)]
    approx: bool,
    /// Count relation sets and linear orders on n indices
    #[arg(long, value_name = "N")]
    enumerate: Option<usize>,
    /// Relative tolerance for peripheral eigenvalues
    #[arg(long, default_value_t = PERIPHERAL_TOL)]
    tol: f64,
    /// Print the classification trace and relation grid to standard error
    #[arg(long)]
    trace: bool,
}

enum Failure {
    Input(String),
    Solver(String),
    Flags(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Solver(_) => 3,
            Failure::Flags(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Solver(m) | Failure::Flags(m) => m,
        }
    }
}

fn solver(e: Error) -> Failure {
    Failure::Solver(e.to_string())
}

fn run(cli: Cli) -> Result<(), Failure> {
    if !(cli.tol > 0.0 && cli.tol < 1.0) {
        return Err(Failure::Flags(format!("--tol must lie in (0, 1), got {}", cli.tol)));
    }
    if cli.input.is_none() && cli.enumerate.is_none() {
        return Err(Failure::Flags("nothing to do: give --in or --enumerate".into()));
    }

    let mut out = serde_json::Map::new();
    let mut human: Vec<String> = Vec::new();

    if let Some(path) = &cli.input {
        let format = cli.format.map(|f| match f {
            Format::Csv => InputFormat::Csv,
            Format::Json => InputFormat::Json,
        });
        let a = read_matrix(path, format).map_err(|e| Failure::Input(e.to_string()))?;
        let analysis = report::analyse(&a, cli.tol, cli.approx).map_err(solver)?;
        if cli.trace {
            human.extend(report::trace_lines(&analysis));
        }
        if let Some(seq) = &analysis.approx {
            human.extend(report::approx_table(seq));
        }
        match analysis.report {
            Value::Object(map) => out.extend(map),
            other => {
                out.insert("report".into(), other);
            }
        }
    } else {
        out.insert("schema".into(), json!(report::SCHEMA));
    }

    if let Some(n) = cli.enumerate {
        let counts = report::enumeration(n).map_err(|e| Failure::Flags(e.to_string()))?;
        human.push(format!(
            "n = {n}: {} relation sets, {} transitive",
            counts["relations"], counts["transitive"]
        ));
        out.insert("enumeration".into(), counts);
    }

    let text = serde_json::to_string_pretty(&Value::Object(out))
        .map_err(|e| Failure::Solver(e.to_string()))?;
    for line in &human {
        eprintln!("{line}");
    }
    match &cli.out {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{text}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("jss: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
