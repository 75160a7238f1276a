//! `pgrade`: verification suites, SL(2,Z_n) tools, normalizer lifts and
//! graded-contraction reports for the Pauli grading of gl(n,C).

mod commands;
mod report;
mod text;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use pauli_grading::verify::Suite;
use pauli_grading::Execution;

use commands::{CliError, Context};
use report::RunReport;

#[derive(Parser, Debug)]
#[command(name = "pgrade", version, about = "Exact computations on the Pauli fine grading of gl(n,C)")]
struct Cli {
    /// Matrix size n (the grading group is Z_n x Z_n).
    #[arg(long, global = true)]
    n: Option<u32>,
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Largest n accepted by enumerative commands.
    #[arg(long, global = true, value_name = "N")]
    max_n: Option<u32>,
    /// Run on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run invariant suites.
    Verify {
        /// all, pauli, grading, cartan, sl2, normalizer or contractions.
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
    /// Element orders, generator words and Bruhat cells in SL(2,Z_n).
    Sl2 {
        #[command(subcommand)]
        action: Sl2Action,
    },
    /// A normalizer lift of a matrix of determinant ±1.
    Lift {
        /// Entries a,b,c,d of [[a,b],[c,d]].
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        /// Request an outer lift (X -> -(A^-1 X A)^T).
        #[arg(long)]
        outer: bool,
    },
    /// Structure constants of sl(n,C) in the Pauli basis.
    Grading,
    /// The n+1 commuting lines for prime n.
    Cartan,
    /// Graded-contraction equations and their orbits.
    Contractions {
        #[command(subcommand)]
        action: ContractionAction,
    },
}

#[derive(Subcommand, Debug)]
enum Sl2Action {
    Order {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    Decompose {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    Bruhat {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
}

#[derive(Subcommand, Debug)]
enum ContractionAction {
    Equations,
    Orbits,
}

fn echo(cmd: &Command) -> String {
    match cmd {
        Command::Verify { suite } => format!("verify --suite {suite}"),
        Command::Sl2 { action } => match action {
            Sl2Action::Order { matrix } => format!("sl2 order --matrix {matrix}"),
            Sl2Action::Decompose { matrix } => format!("sl2 decompose --matrix {matrix}"),
            Sl2Action::Bruhat { matrix } => format!("sl2 bruhat --matrix {matrix}"),
        },
        Command::Lift { matrix, outer } => {
            format!("lift --matrix {matrix}{}", if *outer { " --outer" } else { "" })
        }
        Command::Grading => "grading".into(),
        Command::Cartan => "cartan".into(),
        Command::Contractions { action } => match action {
            ContractionAction::Equations => "contractions equations".into(),
            ContractionAction::Orbits => "contractions orbits".into(),
        },
    }
}

fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let n = cli
        .n
        .ok_or_else(|| CliError::Usage("--n is required".into()))?;
    if n < 2 {
        return Err(CliError::Usage(format!("n must be at least 2, got {n}")));
    }
    let ctx = Context {
        n,
        max_n: cli.max_n,
        exec: if cli.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        },
    };
    let start = Instant::now();
    let (sections, data) = match &cli.command {
        Command::Verify { suite } => commands::verify(&ctx, *suite)?,
        Command::Sl2 { action } => match action {
            Sl2Action::Order { matrix } => commands::sl2_order(&ctx, matrix)?,
            Sl2Action::Decompose { matrix } => commands::sl2_decompose(&ctx, matrix)?,
            Sl2Action::Bruhat { matrix } => commands::sl2_bruhat(&ctx, matrix)?,
        },
        Command::Lift { matrix, outer } => commands::lift(&ctx, matrix, *outer)?,
        Command::Grading => commands::grading(&ctx)?,
        Command::Cartan => commands::cartan(&ctx)?,
        Command::Contractions { action } => match action {
            ContractionAction::Equations => commands::equations(&ctx)?,
            ContractionAction::Orbits => commands::orbit_report(&ctx)?,
        },
    };
    let mut report = RunReport::new(echo(&cli.command), n, sections, data);
    if cli.timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

fn emit(cli: &Cli, report: &RunReport) -> std::io::Result<()> {
    let value = serde_json::to_value(report).map_err(std::io::Error::other)?;
    let body = if cli.json {
        let mut s = serde_json::to_string_pretty(&value).map_err(std::io::Error::other)?;
        s.push('\n');
        s
    } else {
        text::render(&value)
    };
    match &cli.out {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if let Err(e) = emit(&cli, &report) {
                eprintln!("pgrade: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("pgrade: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("pgrade: {msg}");
            ExitCode::from(1)
        }
    }
}
