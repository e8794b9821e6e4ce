//! Command-line front end: argument parsing, input and output formats.
//!
//! Polynomials are read as a JSON array of `[re, im]` pairs, lowest degree
//! first. Numbers are written with 17 significant digits so that every `f64`
//! round-trips exactly.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::poly::{ComplexNumber, Polynomial};
use crate::solver::{
    find_all_roots, find_root, DescentTrace, RootReport, SolverConfig, SolverError,
};
use crate::verify::{polynomial_suites, standard_suites, PropertyReport};

pub const DEFAULT_SEED: u64 = 42;
/// Random centers per polynomial when `verify` is given an input.
pub const VERIFY_CENTERS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Verify,
    Trace,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    Inline(Polynomial),
    File(PathBuf),
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub command: Command,
    pub input: Option<InputSource>,
    pub config: SolverConfig,
    pub output: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub seed: u64,
    /// Starting point for `trace`; the origin when absent.
    pub start: Option<ComplexNumber>,
}

#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` or `--version` output; not an error.
    #[error("{0}")]
    Info(String),
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("{failed} of {total} properties failed")]
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => 0,
            CliError::Solver(_) | CliError::VerifyFailed { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "descent-roots",
    version,
    about = "Complex polynomial roots by certified descent"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Find all roots and write a JSON report.
    Solve(Flags),
    /// Run the property suites; exit 0 iff nothing fails.
    Verify(Flags),
    /// Record one root search as CSV.
    Trace(Flags),
}

#[derive(Args, Debug)]
struct Flags {
    /// Coefficients as a JSON array of [re, im] pairs, lowest degree first.
    #[arg(long, value_name = "JSON", conflicts_with = "input")]
    coeffs: Option<String>,
    /// File holding the coefficient array.
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Relative residual tolerance.
    #[arg(long, value_name = "FLOAT")]
    tol: Option<f64>,
    #[arg(long = "max-iters", value_name = "INT")]
    max_iters: Option<usize>,
    /// Fraction of the certified step radius to use, in (0, 1).
    #[arg(long, value_name = "FLOAT")]
    shrink: Option<f64>,
    /// Try all m admissible directions and keep the best.
    #[arg(long = "best-of-m")]
    best_of_m: bool,
    /// Skip Newton refinement against the input polynomial.
    #[arg(long = "no-polish")]
    no_polish: bool,
    /// Write a descent trace CSV here.
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
    #[arg(long, value_name = "INT")]
    seed: Option<u64>,
    /// Grid resolution for starting points.
    #[arg(long, value_name = "INT")]
    resolution: Option<usize>,
    /// Start point for `trace`, as [re, im].
    #[arg(long, value_name = "JSON")]
    start: Option<String>,
}

/// Parses `argv` (program name first) into a validated job.
pub fn parse_args<I, T>(argv: I) -> Result<JobSpec, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Info(e.to_string()),
        _ => CliError::Usage(one_line(&e.to_string())),
    })?;
    let (command, flags) = match cli.command {
        Cmd::Solve(f) => (Command::Solve, f),
        Cmd::Verify(f) => (Command::Verify, f),
        Cmd::Trace(f) => (Command::Trace, f),
    };

    let input = match (flags.coeffs, flags.input) {
        (Some(text), None) => Some(InputSource::Inline(
            parse_coeffs(&text).map_err(CliError::Usage)?,
        )),
        (None, Some(path)) => Some(InputSource::File(path)),
        (None, None) => None,
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "--coeffs and --in are mutually exclusive".into(),
            ))
        }
    };
    if input.is_none() && command != Command::Verify {
        return Err(CliError::Usage(
            "an input polynomial is required (--coeffs or --in)".into(),
        ));
    }

    let defaults = SolverConfig::default();
    let config = SolverConfig {
        tol_residual: flags.tol.unwrap_or(defaults.tol_residual),
        max_iters: flags.max_iters.unwrap_or(defaults.max_iters),
        shrink: flags.shrink.unwrap_or(defaults.shrink),
        best_of_m: flags.best_of_m,
        polish: !flags.no_polish,
        record_trace: flags.trace.is_some() || command == Command::Trace,
        resolution: flags.resolution.unwrap_or(defaults.resolution),
    };
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let start = flags
        .start
        .as_deref()
        .map(parse_point)
        .transpose()
        .map_err(CliError::Usage)?;

    Ok(JobSpec {
        command,
        input,
        config,
        output: flags.out,
        trace: flags.trace,
        seed: flags.seed.unwrap_or(DEFAULT_SEED),
        start,
    })
}

fn one_line(message: &str) -> String {
    let first = message.lines().next().unwrap_or("invalid arguments");
    first.trim_start_matches("error: ").to_string()
}

/// Parses the coefficient format: a JSON array of `[re, im]` pairs.
pub fn parse_coeffs(text: &str) -> Result<Polynomial, String> {
    let pairs: Vec<[f64; 2]> =
        serde_json::from_str(text).map_err(|e| format!("bad coefficient array: {e}"))?;
    if pairs.is_empty() {
        return Err("coefficient array is empty".into());
    }
    Ok(Polynomial::from_pairs(&pairs))
}

fn parse_point(text: &str) -> Result<ComplexNumber, String> {
    let [re, im]: [f64; 2] =
        serde_json::from_str(text).map_err(|e| format!("bad start point: {e}"))?;
    Ok(ComplexNumber::new(re, im))
}

/// 17 significant digits in exponent form.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

fn format_pair(z: ComplexNumber) -> String {
    format!("[{}, {}]", format_number(z.re), format_number(z.im))
}

fn format_list<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    let parts: Vec<_> = items.iter().map(f).collect();
    format!("[{}]", parts.join(", "))
}

/// Writes `p` in the input format.
pub fn format_coeffs(p: &Polynomial) -> String {
    format_list(p.coeffs(), |&c| format_pair(c))
}

pub fn format_report(report: &RootReport) -> String {
    format!(
        "{{\n  \"degree\": {},\n  \"roots\": {},\n  \"residuals\": {},\n  \"reconstruction_error\": {},\n  \"iterations\": {}\n}}\n",
        report.roots.len(),
        format_list(&report.roots, |&r| format_pair(r)),
        format_list(&report.residuals, |&r| format_number(r)),
        format_number(report.reconstruction_error),
        format_list(&report.iterations_per_root, |n| n.to_string()),
    )
}

/// CSV with header `iter,re,im,modulus`.
pub fn format_trace(trace: &DescentTrace) -> String {
    let mut out = String::from("iter,re,im,modulus\n");
    for (k, (z, modulus)) in trace.iterates.iter().enumerate() {
        out.push_str(&format!(
            "{k},{},{},{}\n",
            format_number(z.re),
            format_number(z.im),
            format_number(*modulus)
        ));
    }
    out
}

pub fn format_property_reports(reports: &[PropertyReport]) -> String {
    let rows: Vec<_> = reports
        .iter()
        .map(|r| {
            let case = if r.worst_case.is_empty() { "null" } else { &r.worst_case };
            format!(
                "  {{\"property\": \"{}\", \"trials\": {}, \"failures\": {}, \"worst_margin\": {}, \"worst_case\": {}}}",
                r.property_name,
                r.trials,
                r.failures,
                format_number(r.worst_margin),
                case
            )
        })
        .collect();
    format!("[\n{}\n]\n", rows.join(",\n"))
}

fn load_input(source: &InputSource) -> Result<Polynomial, CliError> {
    match source {
        InputSource::Inline(p) => Ok(p.clone()),
        InputSource::File(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            parse_coeffs(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
        }
    }
}

fn emit(path: Option<&Path>, content: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(path) => fs::write(path, content).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => stdout
            .write_all(content.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

/// Runs `job`, writing to files or `stdout`. Returns the exit status for a
/// successful run.
pub fn execute(job: &JobSpec, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let input = job.input.as_ref().map(load_input).transpose()?;
    match job.command {
        Command::Solve => {
            let p = input.expect("solve requires an input");
            let report = find_all_roots(&p, &job.config)?;
            if let (Some(path), Some(first)) = (&job.trace, report.traces.first()) {
                emit(Some(path), &format_trace(first), stdout)?;
            }
            emit(job.output.as_deref(), &format_report(&report), stdout)?;
        }
        Command::Trace => {
            let p = input.expect("trace requires an input");
            let start = job.start.unwrap_or(ComplexNumber::new(0.0, 0.0));
            let search = find_root(&p, start, &job.config)?;
            let trace = search.trace.unwrap_or_default();
            let target = job.trace.as_deref().or(job.output.as_deref());
            emit(target, &format_trace(&trace), stdout)?;
        }
        Command::Verify => {
            let reports = match &input {
                Some(p) => polynomial_suites(p, job.seed, VERIFY_CENTERS, &job.config),
                None => standard_suites(job.seed, &job.config),
            };
            emit(
                job.output.as_deref(),
                &format_property_reports(&reports),
                stdout,
            )?;
            let failed = reports.iter().filter(|r| !r.passed()).count();
            if failed > 0 {
                return Err(CliError::VerifyFailed {
                    failed,
                    total: reports.len(),
                });
            }
        }
    }
    Ok(0)
}

/// Runs `job` against the process's standard streams and returns the exit
/// status: 0 on success, 1 on solver errors or failed properties, 2 on usage
/// errors, 3 on I/O errors.
pub fn run(job: &JobSpec) -> i32 {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match execute(job, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
