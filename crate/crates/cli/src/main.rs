//! `cremona`: validate, invert, and analyse monomial Cremona transformations,
//! and run exhaustive degree-bound checks.
//!
//! Exit codes: 0 success, 1 usage/parse/validation error, 2 valid but not
//! birational, 3 a mathematical assertion failed.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cremona::document::{parse_document, MatrixDocument};
use cremona::enumeration::{enumerate_classes, verify_class_set, write_dump, VerifyOptions};
use cremona::error::{InvariantError, MapError};
use cremona::invariants::{johnson_check, KMode};
use cremona::map::{phi_nd, ExponentMatrix, ValidateOptions};
use cremona::sample::{random_birational, round_trip_failure};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

const DEFAULT_SEED: u64 = 0x5eed_c4e3;

#[derive(Parser)]
#[command(name = "cremona", version, about = "Monomial Cremona transformations of projective space")]
struct Cli {
    /// Machine-readable output. Every command except `phi` always emits JSON;
    /// `phi` switches from the text format to JSON.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a matrix file describes a monomial map and whether it is birational.
    Validate {
        input: PathBuf,
        /// Strip a common monomial factor instead of rejecting it.
        #[arg(long)]
        normalize: bool,
    },
    /// Print the exponent matrix of the inverse map.
    Invert {
        input: PathBuf,
        #[arg(long)]
        normalize: bool,
    },
    /// Full invariant report for a Cremona map of P^3.
    Invariants {
        input: PathBuf,
        #[arg(long)]
        normalize: bool,
        /// Recompute k_i from squarefree parts and cross-check.
        #[arg(long)]
        oracle: bool,
    },
    /// Case label of a Cremona map of P^3 of degree at least 2.
    Classify {
        input: PathBuf,
        #[arg(long)]
        normalize: bool,
    },
    /// Enumerate all classes for (n, d) and check the degree bound.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write every canonical matrix, one JSON array per line.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long)]
        oracle: bool,
    },
    /// Print the extremal map phi_{n,d}.
    Phi {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u64,
    },
    /// Round-trip and invariant checks on random birational matrices.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// A command failure with its exit code; the message goes to stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<MapError> for Failure {
    fn from(e: MapError) -> Self {
        let code = match e {
            MapError::NotBirational { .. } => 2,
            MapError::IntegralityFailure(_) | MapError::EmptyBaseLocus(_) => 3,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<InvariantError> for Failure {
    fn from(e: InvariantError) -> Self {
        if e.is_theory_violation() {
            return Failure { code: 3, message: e.to_string() };
        }
        match e {
            InvariantError::Map(m) => m.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

type CmdResult = Result<u8, Failure>;

#[derive(Serialize)]
struct ValidateReport {
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    birational: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    normalized: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct InverseReport {
    n: usize,
    rows: Vec<Vec<u64>>,
    dprime: u64,
}

#[derive(Serialize)]
struct SampleFailure {
    rows: Vec<Vec<u64>>,
    reason: String,
}

#[derive(Serialize)]
struct SampleReport {
    n: usize,
    d: u64,
    seed: u64,
    count: usize,
    failures: Vec<SampleFailure>,
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn load_raw(path: &Path) -> Result<Vec<Vec<i64>>, Failure> {
    let text = read_input(path)?;
    let doc = parse_document(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok(doc.rows)
}

fn load_map(path: &Path, normalize: bool) -> Result<ExponentMatrix, Failure> {
    let rows = load_raw(path)?;
    Ok(ExponentMatrix::validate(&rows, ValidateOptions { normalize })?)
}

fn cmd_validate(input: &Path, normalize: bool) -> CmdResult {
    let rows = load_raw(input)?;
    match ExponentMatrix::validate(&rows, ValidateOptions { normalize }) {
        Ok(m) => {
            let birational = m.is_birational();
            let changed = m
                .rows()
                .zip(&rows)
                .any(|(a, b)| a.iter().zip(b).any(|(&x, &y)| x as i64 != y));
            print_json(&ValidateReport {
                valid: true,
                n: Some(m.n()),
                d: Some(m.d()),
                birational: Some(birational),
                normalized: Some(changed),
                error: None,
            });
            Ok(if birational { 0 } else { 2 })
        }
        Err(e) => {
            print_json(&ValidateReport {
                valid: false,
                n: None,
                d: None,
                birational: None,
                normalized: None,
                error: Some(e.to_string()),
            });
            Ok(1)
        }
    }
}

fn cmd_invert(input: &Path, normalize: bool) -> CmdResult {
    let m = load_map(input, normalize)?;
    let inv = m.invert()?;
    print_json(&InverseReport { n: inv.n(), rows: inv.to_rows(), dprime: inv.d() });
    Ok(0)
}

fn require_p3(m: &ExponentMatrix) -> Result<(), Failure> {
    if m.n() != 3 {
        return Err(Failure::usage(format!("only maps of P^3 are supported, got n = {}", m.n())));
    }
    m.inverse_degree()?;
    Ok(())
}

fn cmd_invariants(input: &Path, normalize: bool, oracle: bool) -> CmdResult {
    let m = load_map(input, normalize)?;
    require_p3(&m)?;
    let mode = if oracle { KMode::Checked } else { KMode::Fast };
    print_json(&johnson_check(&m, mode)?);
    Ok(0)
}

fn cmd_classify(input: &Path, normalize: bool) -> CmdResult {
    let m = load_map(input, normalize)?;
    require_p3(&m)?;
    print_json(&m.classify_case()?);
    Ok(0)
}

fn max_degree(n: usize) -> Option<u64> {
    match n {
        2 => Some(40),
        3 => Some(8),
        4 => Some(4),
        _ => None,
    }
}

fn cmd_enumerate(n: usize, d: u64, jobs: usize, dump: Option<&Path>, oracle: bool) -> CmdResult {
    let Some(limit) = max_degree(n) else {
        return Err(Failure::usage(format!("n must be 2, 3 or 4, got {n}")));
    };
    if d < 1 || d > limit {
        return Err(Failure::usage(format!("d must be in 1..={limit} for n = {n}, got {d}")));
    }
    if jobs == 0 {
        return Err(Failure::usage("--jobs must be positive"));
    }
    let found = enumerate_classes(n, d, jobs);
    if let Some(path) = dump {
        let file = fs::File::create(path)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        write_dump(io::BufWriter::new(file), &found.classes)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    let summary = verify_class_set(n, d, &found, VerifyOptions { jobs, oracle });
    print_json(&summary);
    Ok(if summary.violations.is_empty() { 0 } else { 3 })
}

fn cmd_phi(n: usize, d: u64, json_out: bool) -> CmdResult {
    if n < 2 || d < 1 {
        return Err(Failure::usage("phi needs n >= 2 and d >= 1"));
    }
    let m = phi_nd(n, d);
    if json_out {
        print_json(&MatrixDocument::from(&m));
    } else {
        print!("{m}");
    }
    Ok(0)
}

fn cmd_sample(n: usize, d: u64, count: usize, seed: u64) -> CmdResult {
    if n < 2 || d < 1 {
        return Err(Failure::usage("sample needs n >= 2 and d >= 1"));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..count {
        let Some(m) = random_birational(n, d, &mut rng, 10_000_000) else {
            return Err(Failure::usage(format!("no birational matrix found for n = {n}, d = {d}")));
        };
        let mut reason = round_trip_failure(&m);
        if reason.is_none() && n == 3 {
            reason = johnson_check(&m, KMode::Checked).err().map(|e| e.to_string());
        }
        if let Some(reason) = reason {
            failures.push(SampleFailure { rows: m.to_rows(), reason });
        }
    }
    let ok = failures.is_empty();
    print_json(&SampleReport { n, d, seed, count, failures });
    Ok(if ok { 0 } else { 3 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Validate { input, normalize } => cmd_validate(input, *normalize),
        Command::Invert { input, normalize } => cmd_invert(input, *normalize),
        Command::Invariants { input, normalize, oracle } => cmd_invariants(input, *normalize, *oracle),
        Command::Classify { input, normalize } => cmd_classify(input, *normalize),
        Command::Enumerate { n, d, jobs, dump, oracle } => {
            cmd_enumerate(*n, *d, *jobs, dump.as_deref(), *oracle)
        }
        Command::Phi { n, d } => cmd_phi(*n, *d, cli.json),
        Command::Sample { n, d, count, seed } => cmd_sample(*n, *d, *count, *seed),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("cremona: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
