//! Command-line front end.
//!
//! Data goes to stdout or `--out`; warnings and errors go to stderr. Exit
//! status is 0 on success, 1 for usage errors and 2 for numerical failures.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::approx::{cyclicity_report, distance_profile, optimal_approximant_with, telescoping_product, SolveSummary};
use crate::bidisk::{optimal_approximant_2d, TaylorSeries2D};
use crate::closedform::{approximant_coeffs_hardy, distance_asymptotic};
use crate::error::{Error, Result};
use crate::extremal::{schedule, sweep, SweepKind};
use crate::series::{materialize, FunctionSpec, SpaceParam, DEFAULT_TRUNCATION};
use crate::solve::{SolverChoice, CONDITION_WARN};
use crate::zeros::{check_zero_bound, family_report, find_roots, ZeroGeometry};

/// Environment variable overriding the default truncation degree.
pub const TRUNCATION_ENV: &str = "OPTAPPROX_TRUNCATION";

/// Largest solver-vs-closed-form deviation accepted by `oracle-check`.
pub const ORACLE_RTOL: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "optapprox", version, about = "Optimal polynomial approximants in Dirichlet-type spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Optimal approximant of a given degree.
    Approx(FunctionArgs),
    /// Distance to 1 for every degree up to --degree.
    Profile(FunctionArgs),
    /// Values at the origin, distances and decay fit.
    Cyclicity(FunctionArgs),
    /// Zeros of the approximant and the zero-location bound.
    Zeros(FunctionArgs),
    /// Telescoping product over the zeros of successive approximants.
    Telescope(FunctionArgs),
    /// Solver versus closed form for (1 − z)^a.
    OracleCheck(OracleArgs),
    /// Rayleigh-quotient lower bounds in the Bergman space.
    Extremal(ExtremalArgs),
    /// Optimal approximant on the bidisk.
    Bidisk(BidiskArgs),
    /// Zero geometry for (1 − z)^β [(z − e^{iθ})(z − e^{−iθ})]^γ.
    Family(FamilyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Auto,
    Cholesky,
    Levinson,
}

impl From<SolverArg> for SolverChoice {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Auto => SolverChoice::Auto,
            SolverArg::Cholesky => SolverChoice::Cholesky,
            SolverArg::Levinson => SolverChoice::Levinson,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepArg {
    Geometric,
    Linear,
    Single,
}

impl From<SweepArg> for SweepKind {
    fn from(s: SweepArg) -> Self {
        match s {
            SweepArg::Geometric => SweepKind::Geometric,
            SweepArg::Linear => SweepKind::Linear,
            SweepArg::Single => SweepKind::Single,
        }
    }
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write data to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FunctionArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long)]
    pub degree: usize,
    /// Function spec as JSON text or a path to a JSON file.
    #[arg(long = "f")]
    pub function: String,
    #[arg(long, value_enum, default_value_t = SolverArg::Auto)]
    pub solver: SolverArg,
    #[arg(long)]
    pub truncation: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long)]
    pub a: u32,
    #[arg(long)]
    pub max_degree: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ExtremalArgs {
    #[arg(long)]
    pub max_degree: usize,
    #[arg(long, value_enum, default_value_t = SweepArg::Geometric)]
    pub sweep: SweepArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct BidiskArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long)]
    pub degree: usize,
    /// Two-variable coefficients as JSON text or a path to a JSON file.
    #[arg(long = "f")]
    pub function: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long)]
    pub degree: usize,
    #[arg(long)]
    pub truncation: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parses arguments, runs the command and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        2
    } else {
        1
    }
}

/// Truncation degree from the flag, then the environment, then the default.
pub fn default_truncation() -> Result<usize> {
    match std::env::var(TRUNCATION_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{TRUNCATION_ENV} must be a nonnegative integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_TRUNCATION),
    }
}

fn read_json_arg(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_owned())
    } else {
        Ok(std::fs::read_to_string(arg)?)
    }
}

fn load_spec(arg: &str, truncation: Option<usize>) -> Result<FunctionSpec> {
    let spec = FunctionSpec::from_json(&read_json_arg(arg)?)?;
    Ok(match truncation {
        Some(t) => spec.with_truncation(t),
        None => spec.or_truncation(default_truncation()?),
    })
}

fn emit(output: &OutputArgs, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn csv_text(write: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<String> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

fn json_text<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string(value)? + "\n")
}

/// Re-emits solver notices that the library only records.
fn log_notices(summary: &SolveSummary) {
    if summary.cond_estimate <= CONDITION_WARN {
        for w in &summary.warnings {
            log::warn!("{w}");
        }
    }
}

fn space(alpha: f64) -> Result<SpaceParam> {
    SpaceParam::new(alpha)
}

pub fn execute(command: &Command) -> Result<()> {
    match command {
        Command::Approx(args) => approx(args),
        Command::Profile(args) => profile(args),
        Command::Cyclicity(args) => cyclicity(args),
        Command::Zeros(args) => zeros(args),
        Command::Telescope(args) => telescope(args),
        Command::OracleCheck(args) => oracle_check(args),
        Command::Extremal(args) => extremal(args),
        Command::Bidisk(args) => bidisk(args),
        Command::Family(args) => family(args),
    }
}

fn approx(args: &FunctionArgs) -> Result<()> {
    let f = materialize(&load_spec(&args.function, args.truncation)?)?;
    let a = optimal_approximant_with(&f, args.degree, space(args.alpha)?, args.solver.into())?;
    log_notices(&a.solve);
    let text = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => a.to_json()? + "\n",
        Format::Csv => csv_text(|buf| {
            let mut w = csv::Writer::from_writer(buf);
            w.write_record(["k", "re", "im"])?;
            for (k, c) in a.coeffs().iter().enumerate() {
                w.write_record([k.to_string(), c.re.to_string(), c.im.to_string()])?;
            }
            w.flush()?;
            Ok(())
        })?,
    };
    emit(&args.output, &text)
}

fn profile(args: &FunctionArgs) -> Result<()> {
    if args.solver != SolverArg::Auto {
        log::warn!("profile always uses the automatic solver choice");
    }
    let f = materialize(&load_spec(&args.function, args.truncation)?)?;
    let points = distance_profile(&f, args.degree, space(args.alpha)?)?;
    let text = match args.output.format.unwrap_or(Format::Csv) {
        Format::Json => {
            #[derive(Serialize)]
            struct Profile {
                alpha: f64,
                dist_sq: Vec<f64>,
            }
            json_text(&Profile { alpha: args.alpha, dist_sq: points.iter().map(|p| p.1).collect() })?
        }
        Format::Csv => csv_text(|buf| {
            let mut w = csv::Writer::from_writer(buf);
            w.write_record(["n", "dist_sq"])?;
            for (n, d) in &points {
                w.write_record([n.to_string(), d.to_string()])?;
            }
            w.flush()?;
            Ok(())
        })?,
    };
    emit(&args.output, &text)
}

fn cyclicity(args: &FunctionArgs) -> Result<()> {
    let f = materialize(&load_spec(&args.function, args.truncation)?)?;
    let report = cyclicity_report(&f, space(args.alpha)?, args.degree)?;
    if report.non_cyclic {
        log::warn!("f vanishes at the origin and is not cyclic");
    }
    let text = match args.output.format.unwrap_or(Format::Csv) {
        Format::Json => json_text(&report)?,
        Format::Csv => csv_text(|buf| report.write_csv(buf))?,
    };
    emit(&args.output, &text)
}

fn zeros(args: &FunctionArgs) -> Result<()> {
    let s = space(args.alpha)?;
    let f = materialize(&load_spec(&args.function, args.truncation)?)?;
    let a = optimal_approximant_with(&f, args.degree, s, args.solver.into())?;
    log_notices(&a.solve);
    let roots = match a.effective_degree {
        Some(d) if d > 0 => {
            let set = find_roots(&a.p)?;
            if !set.converged {
                log::warn!("root finder stopped after {} iterations without converging", set.iterations);
            }
            set.roots
        }
        _ => Vec::new(),
    };
    let mut report = check_zero_bound(&roots, s);
    report.geometry = Some(ZeroGeometry::new(&roots, vec![Complex64::new(1.0, 0.0)]));
    let text = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => report.to_json()? + "\n",
        Format::Csv => csv_text(|buf| report.write_csv(buf))?,
    };
    emit(&args.output, &text)
}

fn telescope(args: &FunctionArgs) -> Result<()> {
    if args.alpha != 0.0 {
        return Err(Error::InvalidArgument("the telescoping product is defined in the Hardy space (alpha 0)".into()));
    }
    let f = materialize(&load_spec(&args.function, args.truncation)?)?;
    let report = telescoping_product(&f, args.degree)?;
    if !report.degenerate.is_empty() {
        log::warn!("approximants without zeros at degrees {:?}", report.degenerate);
    }
    if !report.roots_converged {
        log::warn!("root finding did not converge for every degree");
    }
    let text = match args.output.format.unwrap_or(Format::Csv) {
        Format::Json => json_text(&report)?,
        Format::Csv => csv_text(|buf| report.write_csv(buf))?,
    };
    emit(&args.output, &text)
}

#[derive(Serialize)]
struct OracleRow {
    n: usize,
    p0_oracle: f64,
    p0_solver: f64,
    dist_sq_oracle: f64,
    dist_sq_solver: f64,
    max_rel_dev: f64,
}

fn oracle_rows(a: u32, max_degree: usize) -> Result<Vec<OracleRow>> {
    let f = materialize(&FunctionSpec::one_minus_z_pow(a as f64))?;
    (0..=max_degree)
        .map(|n| {
            let oracle = approximant_coeffs_hardy(a, n)?;
            let solved = optimal_approximant_with(&f, n, SpaceParam::HARDY, SolverChoice::Auto)?;
            let max_rel_dev = oracle
                .iter()
                .zip(solved.coeffs())
                .map(|(o, c)| (c - Complex64::new(*o, 0.0)).norm() / o.abs())
                .fold(0.0, f64::max);
            Ok(OracleRow {
                n,
                p0_oracle: oracle[0],
                p0_solver: solved.coeffs()[0].re,
                dist_sq_oracle: distance_asymptotic(a, n)?.exact,
                dist_sq_solver: solved.dist_sq,
                max_rel_dev,
            })
        })
        .collect()
}

fn oracle_check(args: &OracleArgs) -> Result<()> {
    let rows = oracle_rows(args.a, args.max_degree)?;
    let text = match args.output.format.unwrap_or(Format::Csv) {
        Format::Json => json_text(&rows)?,
        Format::Csv => csv_text(|buf| {
            let mut w = csv::Writer::from_writer(buf);
            for row in &rows {
                w.serialize(row)?;
            }
            w.flush()?;
            Ok(())
        })?,
    };
    emit(&args.output, &text)?;
    let worst = rows.iter().map(|r| r.max_rel_dev).fold(0.0, f64::max);
    if worst > ORACLE_RTOL {
        return Err(Error::OracleMismatch(format!(
            "largest relative deviation {worst:e} exceeds {ORACLE_RTOL:e}"
        )));
    }
    Ok(())
}

fn extremal(args: &ExtremalArgs) -> Result<()> {
    let report = sweep(&schedule(args.sweep.into(), args.max_degree))?;
    let text = match args.output.format.unwrap_or(Format::Csv) {
        Format::Json => json_text(&report)?,
        Format::Csv => csv_text(|buf| report.write_csv(buf))?,
    };
    emit(&args.output, &text)
}

fn bidisk(args: &BidiskArgs) -> Result<()> {
    let f = TaylorSeries2D::from_json(&read_json_arg(&args.function)?)?;
    let a = optimal_approximant_2d(&f, args.degree, space(args.alpha)?)?;
    log_notices(&a.solve);
    let text = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => a.to_json()? + "\n",
        Format::Csv => {
            let mut out = String::from("j,k,re,im\n");
            for (&(j, k), c) in a.basis.indices.iter().zip(&a.coeffs) {
                writeln!(out, "{j},{k},{},{}", c.re, c.im).expect("writing to a String");
            }
            out
        }
    };
    emit(&args.output, &text)
}

fn family(args: &FamilyArgs) -> Result<()> {
    let truncation = match args.truncation {
        Some(t) => t,
        None => default_truncation()?,
    };
    let report = family_report(args.beta, args.gamma, args.theta, space(args.alpha)?, args.degree, Some(truncation))?;
    let text = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => report.to_json()? + "\n",
        Format::Csv => csv_text(|buf| report.write_csv(buf))?,
    };
    emit(&args.output, &text)
}
