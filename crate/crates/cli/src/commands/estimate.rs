use std::fmt::Write as _;

use anyhow::{Context, Result};
use netei_core::estimators::{
    ei_copula_estimator, empirical_copula, intervals_sweep, uniform_grid, EiEstimate, Sweep,
    SweepPoint,
};
use serde::Serialize;

use crate::args::{EstimateArgs, EstimatorArgs, Method};
use crate::io::Run;

/// Largest copula/intervals gap still reported as agreement.
pub const AGREEMENT_TOLERANCE: f64 = 0.15;

#[derive(Debug, Serialize)]
pub struct CopulaReport {
    pub estimate: EiEstimate,
    pub grid: Vec<f64>,
    pub diagonal: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct IntervalsReport {
    pub at_quantile: SweepPoint,
    pub sweep: Sweep,
}

impl IntervalsReport {
    /// Plateau value, or the single-level estimate when no plateau exists.
    pub fn value(&self) -> Option<f64> {
        self.sweep
            .plateau
            .as_ref()
            .map(|p| p.value)
            .or_else(|| self.at_quantile.theta())
    }
}

#[derive(Debug, Serialize)]
pub struct Agreement {
    pub copula: f64,
    pub intervals: f64,
    pub difference: f64,
    pub tolerance: f64,
    pub agree: bool,
}

#[derive(Debug, Serialize)]
pub struct EstimateReport {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub copula: Option<CopulaReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intervals: Option<IntervalsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<Agreement>,
}

fn copula(values: &[f64], a: &EstimatorArgs) -> Result<CopulaReport> {
    let grid = uniform_grid(a.grid_points);
    let cop = empirical_copula(values, a.lag, Some(&grid)).context("copula estimator")?;
    let estimate = ei_copula_estimator(&cop, a.diagonal_fit()).context("copula estimator")?;
    Ok(CopulaReport {
        estimate,
        grid: cop.grid,
        diagonal: cop.diagonal,
    })
}

fn intervals(values: &[f64], a: &EstimatorArgs) -> Result<IntervalsReport> {
    let sweep = intervals_sweep(values, &a.levels).context("intervals sweep")?;
    let single = intervals_sweep(values, &[a.quantile]).context("intervals estimator")?;
    Ok(IntervalsReport {
        at_quantile: single.points.into_iter().next().expect("one level"),
        sweep,
    })
}

pub fn estimate_values(values: &[f64], a: &EstimatorArgs, method: Method) -> Result<EstimateReport> {
    let (c, i) = rayon::join(
        || method.copula().then(|| copula(values, a)).transpose(),
        || method.intervals().then(|| intervals(values, a)).transpose(),
    );
    let (copula, intervals) = (c?, i?);
    let agreement = match (&copula, intervals.as_ref().and_then(IntervalsReport::value)) {
        (Some(c), Some(iv)) => {
            let d = (c.estimate.theta_hat - iv).abs();
            Some(Agreement {
                copula: c.estimate.theta_hat,
                intervals: iv,
                difference: d,
                tolerance: AGREEMENT_TOLERANCE,
                agree: d <= AGREEMENT_TOLERANCE,
            })
        }
        _ => None,
    };
    Ok(EstimateReport {
        n: values.len(),
        copula,
        intervals,
        agreement,
    })
}

pub fn sweep_csv(sweep: &Sweep, label: Option<&str>) -> String {
    let mut s = String::new();
    if label.is_some() {
        s.push_str("run,");
    }
    s.push_str("level,threshold,theta_hat\n");
    for p in &sweep.points {
        if let Some(l) = label {
            let _ = write!(s, "{l},");
        }
        let theta = p.theta().map(|t| t.to_string()).unwrap_or_default();
        let _ = writeln!(s, "{},{},{}", p.level, p.threshold, theta);
    }
    s
}

pub fn run(a: &EstimateArgs, run: &mut Run) -> Result<()> {
    let values = crate::io::parse_trace(&run.read(&a.trace)?)
        .with_context(|| format!("reading trace {}", a.trace.display()))?;
    let report = estimate_values(&values, &a.estimator, a.method)?;
    run.write_json(&a.out, &report)?;
    run.primary_output(&a.out);
    if let (Some(path), Some(iv)) = (&a.csv, &report.intervals) {
        run.write(path, sweep_csv(&iv.sweep, None).as_bytes())?;
    }
    if let (Some(path), Some(c)) = (&a.copula_csv, &report.copula) {
        let mut s = String::from("u,diagonal\n");
        for (u, d) in c.grid.iter().zip(&c.diagonal) {
            let _ = writeln!(s, "{u},{d}");
        }
        run.write(path, s.as_bytes())?;
    }
    Ok(())
}
