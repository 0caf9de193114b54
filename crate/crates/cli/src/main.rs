//! `jcqfi`: Fisher-information reports, parameter sweeps and Monte Carlo
//! estimation runs for the resonant Jaynes–Cummings probe.

mod output;
mod sweep;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jc_metrology::{run_experiment, Error, McConfig, Measurement, ProbeSpec};
use serde_json::json;

use crate::sweep::{Axis, SweepRequest};

const EXIT_USAGE: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "jcqfi",
    version,
    about = "Quantum estimation of the Jaynes-Cummings coupling Ω = gτ"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quantum Fisher information of the whole system and of both subsystems.
    Qfi(PointArgs),
    /// Fisher information of population, Fock and joint measurements, next to the QFIs.
    ///
    /// Classical FI drops outcomes with p <= 1e-12, so at isolated Ω where an
    /// outcome probability vanishes the reported value misses a finite term.
    Fi(PointArgs),
    /// Monte Carlo maximum-likelihood experiment compared with the Cramér–Rao bound.
    Estimate(EstimateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct PointArgs {
    /// Qubit preparation angle in radians, within [0, π].
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Photon number of the Fock probe.
    #[arg(long)]
    n: Option<usize>,
    /// Coupling Ω = gτ in radians.
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<f64>,
    /// Sweep one variable instead of evaluating a single point.
    #[arg(long, value_enum)]
    sweep: Option<Axis>,
    /// Lower end of the sweep (defaults: θ 0, Ω 0.01, n 0).
    #[arg(long, allow_hyphen_values = true)]
    min: Option<f64>,
    /// Upper end of the sweep (defaults: θ π, Ω 2π, n 10).
    #[arg(long, allow_hyphen_values = true)]
    max: Option<f64>,
    /// Number of sweep points; n sweeps use every integer in range instead.
    #[arg(long, default_value_t = 181)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long)]
    n: usize,
    /// True coupling used to generate the data.
    #[arg(long, allow_hyphen_values = true)]
    omega_true: f64,
    #[arg(long, value_enum, default_value_t = MeasurementArg::Joint)]
    measurement: MeasurementArg,
    /// Measurements per experiment (M).
    #[arg(long)]
    samples: usize,
    /// Independent experiments.
    #[arg(long)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Likelihood search interval as `lo,hi`; defaults to Ω* ± π/(4√(n+1)).
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
    interval: Option<(f64, f64)>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MeasurementArg {
    Joint,
    Qubit,
    Field,
}

impl From<MeasurementArg> for Measurement {
    fn from(m: MeasurementArg) -> Self {
        match m {
            MeasurementArg::Joint => Measurement::Joint,
            MeasurementArg::Qubit => Measurement::Qubit,
            MeasurementArg::Field => Measurement::Field,
        }
    }
}

fn parse_interval(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `lo,hi`, got `{s}`"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|e| format!("bad interval bound `{v}`: {e}"))
    };
    Ok((parse(lo)?, parse(hi)?))
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ThetaOutOfRange(_)
            | Error::TruncationTooSmall { .. }
            | Error::InvalidConfig(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Runtime(format!("cannot write to stdout: {e}"))),
    }
}

fn cmd_report(args: &PointArgs) -> Result<(), CliError> {
    let request = SweepRequest::from_args(args)?;
    let rows = request.run()?;
    let text = match args.format {
        Format::Csv => sweep::to_csv(&rows),
        Format::Json => sweep::to_json_lines(&rows),
    };
    write_output(args.out.as_ref(), &text)
}

fn cmd_estimate(args: &EstimateArgs) -> Result<(), CliError> {
    let spec = ProbeSpec::new(args.theta, args.n)?;
    let mut cfg = McConfig::new(
        spec,
        args.omega_true,
        args.measurement.into(),
        args.samples,
        args.reps,
        args.seed,
    );
    if let Some((lo, hi)) = args.interval {
        cfg = cfg.with_interval(lo, hi);
    }
    let report = run_experiment(&cfg)?;
    if !report.above_quantum_bound {
        eprintln!(
            "warning: empirical variance {:e} is below the quantum Cramér–Rao bound {:e}",
            report.empirical_variance, report.q_cr_bound
        );
    }
    let mut value = json!({
        "theta": args.theta,
        "n": args.n,
        "omega_true": args.omega_true,
        "measurement": cfg.measurement,
        "samples": args.samples,
        "repetitions": args.reps,
        "seed": args.seed,
        "interval": [cfg.search_interval.0, cfg.search_interval.1],
    });
    let report_value = serde_json::to_value(&report).expect("report serializes");
    if let (Some(obj), serde_json::Value::Object(fields)) = (value.as_object_mut(), report_value) {
        obj.extend(fields);
    }
    output::round_json(&mut value);
    let mut text = serde_json::to_string_pretty(&value).expect("json value serializes");
    text.push('\n');
    write_output(args.out.as_ref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Qfi(args) | Command::Fi(args) => cmd_report(args),
        Command::Estimate(args) => cmd_estimate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
