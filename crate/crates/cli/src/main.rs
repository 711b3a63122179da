//! `etur`: energy-time and frequency-time uncertainty relations from the command line.
//!
//! Exit status: 0 success, 1 usage or input error, 2 numerical failure,
//! 3 a guaranteed bound was violated.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use etur_core::catalog::ReportFormat;
use etur_core::Error;

#[derive(Debug, Parser)]
#[command(name = "etur", version, about = "Energy-time and frequency-time uncertainty relations")]
struct Cli {
    /// Action scale; every energy and time is reported in units built from it.
    #[arg(long, global = true, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout. The file appears only on success.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Absolute slack below which a bound counts as violated.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decay-time table and bound reports for an energy distribution.
    Decay(DistArgs),
    /// Extremal minimal-uncertainty signal.
    Extremal(ExtremalArgs),
    /// Stationarity time of a Gaussian Wigner state.
    Wigner(WignerArgs),
    /// Quantum speed-limit bounds for an energy distribution.
    Speed(DistArgs),
    /// Fourier transforms between signals, spectra and survival amplitudes.
    Transform(TransformArgs),
    /// Full verification suite over the standard catalog.
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Lorentzian,
    Gaussian,
    TruncatedParabola,
    Stepwise,
    Bhattacharyya,
    TwoPoint,
    Sampled,
}

#[derive(Debug, Args)]
struct DistArgs {
    /// Distribution family; optional when `--in` is given.
    #[arg(value_enum)]
    kind: Option<Kind>,
    /// Sampled distribution (`E,P` CSV or JSON). Takes precedence over the family.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long = "E0", alias = "e0", default_value_t = 0.0)]
    e0: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, default_value_t = 0.0)]
    mean: f64,
    #[arg(long = "deltaE", alias = "delta-e", default_value_t = 1.0)]
    delta_e: f64,
    #[arg(long, default_value_t = 0.0)]
    e1: f64,
    #[arg(long, default_value_t = 2.0)]
    e2: f64,
    /// Weight of the lower level of a two-point distribution.
    #[arg(long, default_value_t = 0.5)]
    weight: f64,
    /// Finite width substituted for an infinite dispersion in the
    /// Mandelstam-Tamm checks, which then become informational.
    #[arg(long)]
    nominal_delta_e: Option<f64>,
}

#[derive(Debug, Args)]
struct ExtremalArgs {
    /// Mean positive frequency of the extremal spectrum.
    #[arg(long, default_value_t = 1.0)]
    omega_plus: f64,
    /// Truncate the written spectrum table at this frequency.
    #[arg(long)]
    omega_max: Option<f64>,
    /// Frequency samples on the half line.
    #[arg(long)]
    n_omega: Option<usize>,
    /// Add the Gaussian with the same mean positive frequency.
    #[arg(long)]
    compare_gaussian: bool,
    /// Also write the time signal table here.
    #[arg(long)]
    signal_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Preset {
    Coherent,
    Thermal,
    Squeezed,
    Free,
}

#[derive(Debug, Args)]
struct WignerArgs {
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// State as JSON with `q_mean, p_mean, sigma_q, sigma_p, sigma_qp, mass, omega, hbar`.
    /// Takes precedence over the preset.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Mean position of the preset.
    #[arg(long, default_value_t = 0.0)]
    displacement: f64,
    #[arg(long, default_value_t = 0.0)]
    momentum: f64,
    #[arg(long, default_value_t = 0.0)]
    nbar: f64,
    /// Squeezing factor: position variance divided, momentum variance multiplied.
    #[arg(long, default_value_t = 2.0)]
    squeeze: f64,
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Free packet position variance.
    #[arg(long, default_value_t = 0.5)]
    sigma_q: f64,
    /// Free packet momentum variance.
    #[arg(long, default_value_t = 0.5)]
    sigma_p: f64,
    /// Free packet covariance.
    #[arg(long, default_value_t = 0.0)]
    sigma_qp: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    /// `t,f` signal to `omega,ReF,ImF` spectrum.
    Spectrum,
    /// `omega,ReF,ImF` spectrum to `t,f` signal.
    Signal,
    /// Energy distribution to survival amplitude `t,ReChi,ImChi,Q`.
    Amplitude,
}

#[derive(Debug, Args)]
struct TransformArgs {
    #[arg(long, value_enum)]
    to: Target,
    #[command(flatten)]
    dist: DistArgs,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    n_t: Option<usize>,
    #[arg(long)]
    omega_max: Option<f64>,
    #[arg(long)]
    n_omega: Option<usize>,
}

#[derive(Debug, Args)]
struct SuiteArgs {
    /// Bound families or bound names to keep, comma separated.
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
}

/// Failure of a command, mapped onto the exit status.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
    Violated,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Violated) => {
            eprintln!("a guaranteed bound was violated");
            ExitCode::from(3)
        }
    }
}
