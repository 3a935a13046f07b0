use anyhow::{Context, Result};
use netei_core::theory::{
    ei_archimedean, ei_copula_derivative, ei_pr_lower_bound, ei_rw_pareto, ei_rwj_pareto,
    expected_hitting_fraction, iid_largest_degree, largest_degree_estimate, maxima_quantile_pareto,
    mean_cluster_size, EiTheoryResult,
};
use serde::Serialize;

use crate::args::TheoryArgs;
use crate::io::Run;

#[derive(Serialize)]
struct MaximaQuantile {
    n: f64,
    eta: f64,
    theta: f64,
    value: f64,
}

#[derive(Serialize)]
struct HittingFraction {
    theta: f64,
    tau: f64,
    expected_fraction: f64,
}

#[derive(Serialize)]
struct LargestDegree {
    n: f64,
    delta: f64,
    coeff: f64,
    theta: f64,
    estimate: f64,
    k: f64,
    iid: f64,
}

#[derive(Serialize)]
struct TheoryReport {
    mu: f64,
    sigma: f64,
    gamma: f64,
    mean_degree: f64,
    rw: EiTheoryResult,
    copula_derivative: EiTheoryResult,
    theta: f64,
    mean_cluster_size: f64,
    rwj: Vec<EiTheoryResult>,
    pr_lower_bound: Vec<EiTheoryResult>,
    archimedean: Vec<EiTheoryResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    maxima_quantile: Option<MaximaQuantile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hitting_time: Option<HittingFraction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    largest_degree: Option<LargestDegree>,
}

pub fn run(a: &TheoryArgs, run: &mut Run) -> Result<()> {
    let model = a.model.build()?;
    let mean_degree = model.mean_degree()?;
    let gamma = model.gamma;
    let rw = ei_rw_pareto(gamma)?;
    let theta = a.theta.unwrap_or(rw.theta);
    let each = |xs: &[f64], f: &dyn Fn(f64) -> netei_core::Result<EiTheoryResult>| {
        xs.iter().map(|&x| f(x)).collect::<netei_core::Result<Vec<_>>>()
    };
    let report = TheoryReport {
        mu: model.mu,
        sigma: model.sigma,
        gamma,
        mean_degree,
        copula_derivative: ei_copula_derivative(gamma)?,
        theta,
        mean_cluster_size: mean_cluster_size(theta)?,
        rwj: each(&a.alpha, &|x| ei_rwj_pareto(gamma, x, mean_degree))?,
        pr_lower_bound: each(&a.c, &ei_pr_lower_bound)?,
        archimedean: each(&a.beta, &ei_archimedean)?,
        maxima_quantile: a
            .n
            .map(|n| -> Result<_> {
                Ok(MaximaQuantile {
                    n,
                    eta: a.eta,
                    theta,
                    value: maxima_quantile_pareto(&model, n, theta, a.eta)?,
                })
            })
            .transpose()?,
        hitting_time: a
            .tau
            .map(|tau| -> Result<_> {
                Ok(HittingFraction {
                    theta,
                    tau,
                    expected_fraction: expected_hitting_fraction(theta, tau)?,
                })
            })
            .transpose()?,
        largest_degree: a
            .largest_n
            .map(|n| -> Result<_> {
                let delta = a.delta.context("--largest-n needs --delta")?;
                Ok(LargestDegree {
                    n,
                    delta,
                    coeff: a.coeff,
                    theta,
                    estimate: largest_degree_estimate(a.coeff, delta, n, theta)?,
                    k: a.k,
                    iid: iid_largest_degree(a.k, n, delta)?,
                })
            })
            .transpose()?,
        rw,
    };
    run.write_json(&a.out, &report)?;
    run.primary_output(&a.out);
    Ok(())
}
