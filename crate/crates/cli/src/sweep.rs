//! Parameter grids for the `qfi` and `fi` subcommands.

use std::f64::consts::PI;

use clap::ValueEnum;
use jc_metrology::{qfi_report, ProbeSpec, QfiReport};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{fmt_num, round_sig};
use crate::{CliError, PointArgs};

pub const CSV_HEADER: &str = "theta,n,omega,H_total,H_qubit,H_field,F_joint,F_qubit,F_field";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    Theta,
    Omega,
    N,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub theta: f64,
    pub n: usize,
    pub omega: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub theta: f64,
    pub n: usize,
    pub omega: f64,
    #[serde(flatten)]
    pub report: QfiReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRequest {
    points: Vec<Point>,
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| {
        CliError::Usage(format!(
            "--{flag} is required unless it is the swept variable"
        ))
    })
}

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    (0..points)
        .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
        .collect()
}

fn sweep_points(args: &PointArgs, axis: Axis) -> Result<Vec<Point>, CliError> {
    let (default_lo, default_hi) = match axis {
        Axis::Theta => (0.0, PI),
        Axis::Omega => (0.01, 2.0 * PI),
        Axis::N => (0.0, 10.0),
    };
    let lo = args.min.unwrap_or(default_lo);
    let hi = args.max.unwrap_or(default_hi);
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(CliError::Usage(format!(
            "sweep range [{lo}, {hi}] is empty"
        )));
    }
    if args.points == 0 {
        return Err(CliError::Usage("--points must be positive".into()));
    }
    let points = match axis {
        Axis::Theta => {
            let (n, omega) = (require(args.n, "n")?, require(args.omega, "omega")?);
            linspace(lo, hi, args.points)
                .into_iter()
                .map(|theta| Point { theta, n, omega })
                .collect()
        }
        Axis::Omega => {
            let (theta, n) = (require(args.theta, "theta")?, require(args.n, "n")?);
            linspace(lo, hi, args.points)
                .into_iter()
                .map(|omega| Point { theta, n, omega })
                .collect()
        }
        Axis::N => {
            let (theta, omega) = (require(args.theta, "theta")?, require(args.omega, "omega")?);
            if lo < 0.0 || lo.fract() != 0.0 || hi.fract() != 0.0 {
                return Err(CliError::Usage(
                    "n sweeps need non-negative integer --min/--max".into(),
                ));
            }
            (lo as usize..=hi as usize)
                .map(|n| Point { theta, n, omega })
                .collect()
        }
    };
    Ok(points)
}

impl SweepRequest {
    pub fn from_args(args: &PointArgs) -> Result<Self, CliError> {
        let points = match args.sweep {
            None => {
                if args.min.is_some() || args.max.is_some() {
                    return Err(CliError::Usage("--min/--max require --sweep".into()));
                }
                vec![Point {
                    theta: require(args.theta, "theta")?,
                    n: require(args.n, "n")?,
                    omega: require(args.omega, "omega")?,
                }]
            }
            Some(axis) => sweep_points(args, axis)?,
        };
        // Reject out-of-range probes before any work is done.
        for p in &points {
            ProbeSpec::new(p.theta, p.n)?;
            if !p.omega.is_finite() {
                return Err(CliError::Usage(format!(
                    "omega = {} is not finite",
                    p.omega
                )));
            }
        }
        Ok(Self { points })
    }

    #[cfg(test)]
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Evaluates every point; rows keep the sweep order.
    pub fn run(&self) -> Result<Vec<Row>, CliError> {
        self.points
            .par_iter()
            .map(|p| {
                let spec = ProbeSpec::new(p.theta, p.n)?;
                Ok(Row {
                    theta: p.theta,
                    n: p.n,
                    omega: p.omega,
                    report: qfi_report(&spec, p.omega)?,
                })
            })
            .collect()
    }
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let r = &row.report;
        let fields = [
            fmt_num(row.theta),
            row.n.to_string(),
            fmt_num(row.omega),
            fmt_num(r.h_total),
            fmt_num(r.h_qubit),
            fmt_num(r.h_field),
            fmt_num(r.f_joint),
            fmt_num(r.f_qubit),
            fmt_num(r.f_field),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn to_json_lines(rows: &[Row]) -> String {
    let mut out = String::new();
    for row in rows {
        let r = &row.report;
        let rounded = Row {
            theta: round_sig(row.theta),
            n: row.n,
            omega: round_sig(row.omega),
            report: QfiReport {
                h_total: round_sig(r.h_total),
                h_qubit: round_sig(r.h_qubit),
                h_field: round_sig(r.h_field),
                f_joint: round_sig(r.f_joint),
                f_qubit: round_sig(r.f_qubit),
                f_field: round_sig(r.f_field),
            },
        };
        out.push_str(&serde_json::to_string(&rounded).expect("row serializes"));
        out.push('\n');
    }
    out
}
