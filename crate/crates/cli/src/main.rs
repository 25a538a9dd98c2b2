//! `bandsinc` command-line tool.
//!
//! Exit codes: 0 success, 1 I/O or parse failure, 2 invalid parameters or
//! nodes, 3 numerical failure (including a failed `selftest`).

mod io;
mod selftest;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::result::Result;

use bandsinc::experiments::{exp_error_comparison, sinc2_experiment, BetaPolicy, ProbeInterval};
use bandsinc::*;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    Core(Error),
    SelfTest(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Parse(_) => 1,
            CliError::Core(e) => match e.class() {
                ErrorClass::Domain => 2,
                ErrorClass::Numerical => 3,
            },
            CliError::SelfTest(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) | CliError::Parse(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::SelfTest(n) => write!(f, "{n} self-test check(s) failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Debug, Clone, Copy)]
enum Beta {
    Auto,
    Fixed(f64),
}

fn parse_beta(s: &str) -> Result<Beta, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Beta::Auto);
    }
    s.parse::<f64>()
        .map(Beta::Fixed)
        .map_err(|_| format!("expected `auto` or a number, got {s:?}"))
}

fn parse_lambda(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_family(s: &str) -> Result<WindowFamily, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Parser)]
#[command(
    name = "bandsinc",
    version,
    about = "Bandlimited evaluation at nonequispaced nodes via regularized Shannon sampling and the NFFT"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a bandlimited function from samples of its Fourier transform.
    Bandlimited(TransformArgs),
    /// Evaluate a trigonometric polynomial with the classical NFFT.
    Nfft(TransformArgs),
    /// Exponential-approximation error sweep over frequencies.
    Fig1(Fig1Args),
    /// Errors for sinc² at Chebyshev nodes over a list of bandwidths.
    Fig2(Fig2Args),
    /// Check the fast transforms against dense oracles.
    Selftest,
}

#[derive(Args)]
struct WindowArgs {
    /// Window family: sinh or ckb.
    #[arg(long, default_value = "sinh", value_parser = parse_family)]
    window: WindowFamily,
    /// Window shape parameter, or `auto` for the calibrated value.
    #[arg(long, default_value = "auto", value_parser = parse_beta)]
    beta: Beta,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long = "d", default_value_t = 1)]
    dim: usize,
    #[arg(long = "M")]
    bandwidth: usize,
    /// Oversampling, decimal or `p/q`.
    #[arg(long, default_value = "1", value_parser = parse_lambda)]
    lambda: Rational,
    #[arg(long = "m", default_value_t = 5)]
    truncation: usize,
    #[command(flatten)]
    window: WindowArgs,
    /// CSV with columns k1..kd,re,im.
    #[arg(long)]
    spectrum: PathBuf,
    /// CSV with columns x1..xd.
    #[arg(long)]
    nodes: PathBuf,
    /// Output CSV with columns j,re,im (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Interval {
    Full,
    Truncated,
}

#[derive(Args)]
struct Fig1Args {
    #[arg(long = "M", default_value_t = 20)]
    bandwidth: usize,
    #[arg(long, default_value = "1", value_parser = parse_lambda)]
    lambda: Rational,
    #[arg(long = "m", default_value_t = 5)]
    truncation: usize,
    #[command(flatten)]
    window: WindowArgs,
    #[arg(long, value_enum, default_value = "truncated")]
    interval: Interval,
    /// Frequency subdivisions per unit.
    #[arg(long = "S", default_value_t = 32)]
    subdivisions: usize,
    /// Probe points per frequency.
    #[arg(long = "P", default_value_t = 1000)]
    probes: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Fig2Args {
    /// Comma-separated bandwidths; defaults to 20, 40, ..., 200.
    #[arg(long = "M-list", value_delimiter = ',', conflicts_with = "full_scale")]
    bandwidths: Option<Vec<usize>>,
    /// Use 20, 40, ..., 1000.
    #[arg(long)]
    full_scale: bool,
    #[arg(long, default_value = "1", value_parser = parse_lambda)]
    lambda: Rational,
    #[arg(long = "m", default_value_t = 5)]
    truncation: usize,
    #[command(flatten)]
    window: WindowArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn resolve_beta(window: &WindowArgs, m: usize, lambda: Rational) -> Result<f64, CliError> {
    Ok(match window.beta {
        Beta::Auto => default_beta(window.window, m, lambda)?,
        Beta::Fixed(b) => b,
    })
}

fn run_transform(args: &TransformArgs, bandlimited: bool) -> Result<(), CliError> {
    let geometry = Geometry::new(args.dim, args.bandwidth, args.lambda, args.truncation)?;
    let beta = resolve_beta(&args.window, args.truncation, args.lambda)?;
    let window = WindowSpec::for_geometry(args.window.window, beta, &geometry)?;
    let spectrum = io::read_spectrum(&args.spectrum, args.bandwidth, args.dim)?;
    let coords = io::read_nodes(&args.nodes, args.dim)?;
    let len = geometry.grid_len();
    let values = if bandlimited {
        let nodes = validate_flat(coords, args.dim, &geometry, DomainMode::Restricted)?;
        let plan = plan_bandlimited(&geometry, &window, &nodes)?;
        let f = plan.factors();
        eprintln!(
            "bandlimited: L={len} beta={beta} flatness max|L*psi_hat(k)-1|={:.3e} quadrature error {:.3e}",
            f.flatness(len),
            f.quadrature_error()
        );
        execute_bandlimited(&plan, &spectrum)?
    } else {
        let nodes = validate_flat(coords, args.dim, &geometry, DomainMode::Periodic)?;
        let plan = plan_nfft(&geometry, &window, &nodes)?;
        let f = plan.factors();
        let smallest = f
            .values()
            .iter()
            .map(|v| v.abs())
            .fold(f64::INFINITY, f64::min);
        eprintln!(
            "nfft: L={len} beta={beta} flatness max|L*phi_hat(k)-1|={:.3e} min|phi_hat(k)|={smallest:.3e} quadrature error {:.3e}",
            f.flatness(len),
            f.quadrature_error()
        );
        execute_nfft(&plan, &spectrum)?
    };
    io::write_values(args.out.as_deref(), &values)
}

fn run_fig1(args: &Fig1Args) -> Result<(), CliError> {
    let geometry = Geometry::new(1, args.bandwidth, args.lambda, args.truncation)?;
    let beta = resolve_beta(&args.window, args.truncation, args.lambda)?;
    let window = WindowSpec::for_geometry(args.window.window, beta, &geometry)?;
    let interval = match args.interval {
        Interval::Full => ProbeInterval::Full,
        Interval::Truncated => ProbeInterval::Truncated,
    };
    eprintln!(
        "fig1: L={} beta={beta} S={} P={}",
        geometry.grid_len(),
        args.subdivisions,
        args.probes
    );
    let rows = exp_error_comparison(
        &geometry,
        &window,
        args.subdivisions,
        args.probes,
        interval,
        Execution::default(),
    )?;
    io::write_table(
        args.out.as_deref(),
        &["v", "err_nfft", "err_bandlimited"],
        rows.iter().map(|r| {
            vec![
                io::fmt_f64(r.v),
                io::fmt_f64(r.err_nfft),
                io::fmt_f64(r.err_bandlimited),
            ]
        }),
    )
}

fn run_fig2(args: &Fig2Args) -> Result<(), CliError> {
    let top = if args.full_scale { 1000 } else { 200 };
    let bandwidths = args
        .bandwidths
        .clone()
        .unwrap_or_else(|| (20..=top).step_by(20).collect());
    let beta = match args.window.beta {
        Beta::Auto => BetaPolicy::Auto,
        Beta::Fixed(b) => BetaPolicy::Fixed(b),
    };
    let rows = sinc2_experiment(
        &bandwidths,
        args.lambda,
        args.truncation,
        args.window.window,
        beta,
    )?;
    io::write_table(
        args.out.as_deref(),
        &["M", "err_nfft", "err_bandlimited"],
        rows.iter().map(|r| {
            vec![
                r.bandwidth.to_string(),
                io::fmt_f64(r.err_nfft),
                io::fmt_f64(r.err_bandlimited),
            ]
        }),
    )
}

fn run_selftest() -> Result<(), CliError> {
    let checks = selftest::run()?;
    let failed = checks.iter().filter(|c| !c.passed()).count();
    for c in &checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        println!(
            "{status} {} (defect {:.3e}, tolerance {:.0e})",
            c.name, c.defect, c.tolerance
        );
    }
    println!(
        "{} of {} checks passed",
        checks.len() - failed,
        checks.len()
    );
    if failed > 0 {
        return Err(CliError::SelfTest(failed));
    }
    Ok(())
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(text) = std::env::var("BANDSINC_THREADS") else {
        return Ok(());
    };
    let threads: usize = text.trim().parse().map_err(|_| {
        CliError::Parse(format!("BANDSINC_THREADS: expected a count, got {text:?}"))
    })?;
    #[cfg(feature = "parallel")]
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    configure_threads()?;
    match &cli.command {
        Command::Bandlimited(a) => run_transform(a, true),
        Command::Nfft(a) => run_transform(a, false),
        Command::Fig1(a) => run_fig1(a),
        Command::Fig2(a) => run_fig2(a),
        Command::Selftest => run_selftest(),
    }
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
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
