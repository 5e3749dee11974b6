//! `search-pursuit`: solve search games from JSON game files.
//!
//! Exit codes: 0 success, 1 certificate or consistency failure, 2 invalid
//! input, 3 enumeration cap exceeded.

mod commands;
mod document;
mod input;
mod render;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use search_pursuit::game::DEFAULT_MAX_SUBSETS;
use search_pursuit::rational::parse_rational;
use search_pursuit::{Error, Rational};

use commands::Settings;
use document::ResultDocument;
use input::{GameFile, Mode};

pub const EXIT_CERTIFICATE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CERTIFICATE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TooLarge { .. } => EXIT_RESOURCE,
            Error::NotMonotone(_) | Error::InconsistentValue(_) | Error::NoEquilibrium(_) => {
                EXIT_CERTIFICATE
            }
            Error::InvalidSpec(_)
            | Error::InvalidStrategy(_)
            | Error::DimensionMismatch(_)
            | Error::Precondition(_) => EXIT_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Both,
}

#[derive(Debug, Parser)]
#[command(
    name = "search-pursuit",
    version,
    about = "Exact solver for search-and-pursuit games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// What to print on standard output.
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,

    /// Also write the JSON result to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Label locations by their search time instead of their index.
    #[arg(long, global = true)]
    paper_names: bool,

    /// Cap on the number of feasible search sets enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SUBSETS)]
    max_subsets: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one game and certify the result.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Record wall-clock time in the result (output is then no longer
        /// reproducible byte for byte).
        #[arg(long)]
        timing: bool,
    },
    /// Solve the file's game at every integer budget in a range.
    Sweep {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, allow_negative_numbers = true)]
        k_from: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        k_to: Option<i64>,
    },
    /// Two-period learning game with low and high escape probabilities.
    Learning {
        #[arg(long, value_parser = rational_arg)]
        low: Rational,
        #[arg(long, value_parser = rational_arg)]
        high: Rational,
    },
    /// Check a result document against a game file (`-` reads standard input).
    Verify { file: PathBuf, solution: PathBuf },
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize") + "\n"
}

fn emit(cli: &Cli, table: &str, json: &str) -> Result<(), CliError> {
    if let Some(path) = &cli.output {
        std::fs::write(path, json)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    }
    match cli.format {
        Format::Table => print!("{table}"),
        Format::Json => print!("{json}"),
        Format::Both => print!("{table}\n{json}"),
    }
    Ok(())
}

fn read_solution(path: &Path) -> Result<ResultDocument, CliError> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::input(format!("standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let settings = Settings {
        paper_names: cli.paper_names,
        max_subsets: cli.max_subsets,
    };
    match &cli.command {
        Command::Solve { file, mode, timing } => {
            let game = GameFile::load(file)?;
            let started = Instant::now();
            let mut doc = commands::solve(&game, game.resolve_mode(*mode), &settings)?;
            if *timing {
                doc.timing_ms = Some(started.elapsed().as_secs_f64() * 1000.0);
            }
            emit(cli, &commands::solve_table(&doc), &to_json(&doc))?;
            Ok(if doc.certificate.ok {
                0
            } else {
                EXIT_CERTIFICATE
            })
        }
        Command::Sweep {
            file,
            mode,
            k_from,
            k_to,
        } => {
            let game = GameFile::load(file)?;
            let mode = game.resolve_mode(*mode);
            let doc = commands::sweep(&game, mode, *k_from, *k_to, &settings)?;
            let labels = commands::sweep_labels(&game, mode, &settings)?;
            emit(cli, &commands::sweep_table(&doc, &labels), &to_json(&doc))?;
            Ok(if doc.consistent() {
                0
            } else {
                EXIT_CERTIFICATE
            })
        }
        Command::Learning { low, high } => {
            let report = commands::learning(low, high)?;
            emit(cli, &commands::learning_table(&report), &to_json(&report))?;
            Ok(if report.value_routes_agree {
                0
            } else {
                EXIT_CERTIFICATE
            })
        }
        Command::Verify { file, solution } => {
            let game = GameFile::load(file)?;
            let doc = read_solution(solution)?;
            let report = commands::verify(&game, &doc, &settings)?;
            emit(cli, &commands::verify_table(&report), &to_json(&report))?;
            Ok(if report.ok { 0 } else { EXIT_CERTIFICATE })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
