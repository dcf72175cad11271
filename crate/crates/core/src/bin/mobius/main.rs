// SPDX-License-Identifier: Apache-2.0

//! `mobius`: key generation, file encryption and analysis reports.
//!
//! Exit codes: 0 success, 1 a requested check failed, 2 usage, 3 I/O,
//! 4 bad parameters, 5 key mismatch, 6 key source exhausted,
//! 7 invalid container, 8 anything else.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod crypto;
mod report;

#[derive(Parser, Debug)]
#[command(name = "mobius", version, about = "Möbius-plane cipher and finite-geometry analysis")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct FieldArgs {
    /// Characteristic [default: 2]
    #[arg(long)]
    pub p: Option<u64>,
    /// Degree of the base field over GF(p) [default: 8]
    #[arg(long)]
    pub n: Option<u32>,
    /// Base-field modulus, constant term first, e.g. `1,1,0,1` (leading 1 optional)
    #[arg(long, value_delimiter = ',')]
    pub poly: Option<Vec<u64>>,
    /// Quadratic `w^2 + b1 w + b0` as `b0,b1` (field element indices)
    #[arg(long = "ext-poly", value_delimiter = ',')]
    pub ext_poly: Option<Vec<u64>>,
}

impl FieldArgs {
    pub fn given(&self) -> bool {
        self.p.is_some() || self.n.is_some() || self.poly.is_some() || self.ext_poly.is_some()
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Explicit,
    Stream,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a MOBS keystream or, with `--mode explicit`, a MOBK key file for `--in`.
    Keygen {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value = "stream")]
        mode: ModeArg,
        /// Seed for the ChaCha20 point generator; system entropy if absent.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of points in a keystream file.
        #[arg(long, default_value_t = 4096)]
        count: usize,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encrypt `--in` into a MOBC container.
    Encrypt {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value = "stream")]
        mode: ModeArg,
        #[arg(long)]
        seed: Option<u64>,
        /// MOBS keystream (stream mode) or MOBK key file (explicit mode).
        #[arg(long)]
        key: Option<PathBuf>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt a MOBC container.
    Decrypt {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        key: Option<PathBuf>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Probability tables, deviation, completeness matrices, forgery odds.
    Analyze {
        #[command(flatten)]
        field: FieldArgs,
        /// Field order for the probability tables (a prime power).
        #[arg(long)]
        q: Option<u64>,
        /// 1, 2, 3 or all.
        #[arg(long, default_value = "all")]
        position: String,
        /// Bit-flip completeness of cipher and authentication code over GF(2^n).
        #[arg(long)]
        completeness: bool,
        /// Report max |mu - nu| against the frozen bound.
        #[arg(long)]
        deviation: bool,
        /// Forgery probabilities of the authentication code over GF(q).
        #[arg(long)]
        forgery: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for reports when `--out` is absent.
        #[arg(long, env = "MOBIUS_REPORT_DIR")]
        report_dir: Option<PathBuf>,
    },
    /// Count points, circles and incidences of the plane over GF(q).
    Audit {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "MOBIUS_REPORT_DIR")]
        report_dir: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    BadParams(String),
    #[error(transparent)]
    Core(#[from] mobius_core::Error),
    #[error("one or more checks failed")]
    ChecksFailed,
}

impl CliError {
    fn code(&self) -> u8 {
        use mobius_core::Error as E;
        match self {
            CliError::ChecksFailed => 1,
            CliError::Io { .. } => 3,
            CliError::BadParams(_) => 4,
            CliError::Core(e) => match e {
                E::NotPrime(_)
                | E::ReduciblePolynomial
                | E::DegreeMismatch { .. }
                | E::TooLarge(_)
                | E::InvalidElement(_)
                | E::FieldTooSmall
                | E::WrongCharacteristic => 4,
                E::KeyMismatch => 5,
                E::KeysourceExhausted | E::CandidateStreamExhausted => 6,
                E::InvalidContainer(_) | E::LengthMismatch | E::MalformedTag => 7,
                _ => 8,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read(path: &PathBuf) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Io { path: path.clone(), source })
}

pub fn write(path: &PathBuf, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io { path: path.clone(), source })
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.cmd {
        Command::Keygen { field, mode, seed, count, input, out } => {
            crypto::keygen(&field, mode, seed, count, input.as_ref(), &out)
        }
        Command::Encrypt { field, mode, seed, key, input, out } => {
            crypto::encrypt(&field, mode, seed, key.as_ref(), &input, &out)
        }
        Command::Decrypt { seed, key, input, out } => crypto::decrypt(seed, key.as_ref(), &input, &out),
        Command::Analyze { field, q, position, completeness, deviation, forgery, format, out, report_dir } => {
            let sink = report::Sink { format, out, dir: report_dir };
            report::analyze(&field, q, &position, completeness, deviation, forgery, &sink)
        }
        Command::Audit { q, format, out, report_dir } => report::audit(q, &report::Sink { format, out, dir: report_dir }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mobius: {e}");
            ExitCode::from(e.code())
        }
    }
}
