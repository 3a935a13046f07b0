use std::fmt::Write as _;

use anyhow::{Context, Result};
use netei_core::estimators::{
    cluster_size_distribution, d2_condition_check, empirical_quantile, first_hitting_time,
    ClusterSizeDistribution, D2Check, ExceedanceStats,
};
use serde::Serialize;

use crate::args::{CheckArgs, D2Args};
use crate::io::{parse_trace, Run};

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub n: usize,
    pub threshold: f64,
    pub quantile_level: Option<f64>,
    pub exceedances: usize,
    /// Over the whole trace, percent of exceedances.
    pub r_up: f64,
    pub r_cluster: f64,
    pub clusters: Option<ClusterSizeDistribution>,
    pub first_hitting_time: Option<usize>,
    pub d2: D2Check,
}

pub fn check_values(
    values: &[f64],
    threshold: f64,
    quantile_level: Option<f64>,
    d2: &D2Args,
) -> Result<CheckReport> {
    let stats = ExceedanceStats::new(values, threshold);
    let check = d2_condition_check(values, threshold, &d2.lengths, d2.occurrences)
        .context("local mixing check")?;
    Ok(CheckReport {
        n: values.len(),
        threshold,
        quantile_level,
        exceedances: stats.exceedances(),
        r_up: stats.r_up,
        r_cluster: stats.r_cluster,
        clusters: cluster_size_distribution(&stats).ok(),
        first_hitting_time: first_hitting_time(values, threshold),
        d2: check,
    })
}

pub fn threshold_at(values: &[f64], level: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    empirical_quantile(&sorted, level)
}

pub fn run(a: &CheckArgs, run: &mut Run) -> Result<()> {
    let values = parse_trace(&run.read(&a.trace)?)
        .with_context(|| format!("reading trace {}", a.trace.display()))?;
    let (threshold, level) = match a.threshold {
        Some(u) => (u, None),
        None => {
            anyhow::ensure!(
                a.quantile > 0.0 && a.quantile < 1.0,
                "--quantile must lie in (0, 1), got {}",
                a.quantile
            );
            (threshold_at(&values, a.quantile), Some(a.quantile))
        }
    };
    let report = check_values(&values, threshold, level, &a.d2)?;
    run.write_json(&a.out, &report)?;
    run.primary_output(&a.out);
    if let Some(path) = &a.csv {
        let mut s = String::from("length,r_up,r_cluster\n");
        for (len, up, cl) in &report.d2.per_length {
            let _ = writeln!(s, "{len},{up},{cl}");
        }
        run.write(path, s.as_bytes())?;
    }
    Ok(())
}
