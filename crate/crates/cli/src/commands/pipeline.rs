use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use netei_core::generate::{ConfigurationReport, RewireReport};
use netei_core::graph::{parse_edge_list, write_edge_list};
use netei_core::samplers::sample;
use netei_core::theory::{ei_pr_lower_bound, ei_rw_pareto, ei_rwj_pareto, EiTheoryResult};
use netei_core::{Graph, GraphStats, JointDegreeModel, SamplerConfig, SamplerKind};
use rayon::prelude::*;
use serde::Serialize;

use super::check::{check_values, threshold_at, CheckReport};
use super::estimate::{estimate_values, sweep_csv, EstimateReport};
use super::generate::build_graph;
use crate::args::{Kind, Method, PipelineArgs};
use crate::io::{format_trace, Run};
use crate::manifest::{SeedRecord, Stage};

/// Margin below the PageRank lower bound still counted as a pass.
const BOUND_SLACK: f64 = 0.05;

#[derive(Serialize)]
struct GraphSection {
    source: String,
    stats: GraphStats,
    configuration: Option<ConfigurationReport>,
    rewire: Option<RewireReport>,
}

#[derive(Serialize)]
struct MemberReport {
    label: String,
    sampler: SamplerConfig,
    theory: EiTheoryResult,
    /// `estimate` when theory gives the value, `lower-bound` for PageRank.
    comparison: &'static str,
    copula: f64,
    intervals: Option<f64>,
    copula_pass: bool,
    intervals_pass: bool,
    pass: bool,
    estimates: EstimateReport,
    check: CheckReport,
}

#[derive(Serialize)]
struct PipelineReport<'a> {
    model: &'a JointDegreeModel,
    mean_degree: f64,
    graph: GraphSection,
    tolerance: f64,
    members: Vec<MemberReport>,
    all_pass: bool,
}

fn members(a: &PipelineArgs, mean_degree: f64) -> Result<Vec<SamplerKind>> {
    match (a.alpha_sweep.is_empty(), a.c_sweep.is_empty()) {
        (true, true) => Ok(vec![a.sampler.kind(Some(mean_degree))?]),
        (false, true) => {
            if a.sampler.kind != Kind::Rwj {
                bail!("--alpha-sweep needs --kind rwj");
            }
            Ok(a.alpha_sweep.iter().map(|&alpha| SamplerKind::Rwj { alpha }).collect())
        }
        (true, false) => {
            if a.sampler.kind != Kind::Pr {
                bail!("--c-sweep needs --kind pr");
            }
            Ok(a.c_sweep.iter().map(|&c| SamplerKind::Pr { c }).collect())
        }
        (false, false) => bail!("--alpha-sweep and --c-sweep cannot be combined"),
    }
}

fn label(kind: SamplerKind) -> String {
    match kind {
        SamplerKind::Rw => "rw".into(),
        SamplerKind::Pr { c } => format!("pr-c{c}"),
        SamplerKind::Rwj { alpha } => format!("rwj-alpha{alpha}"),
    }
}

fn theory_for(kind: SamplerKind, gamma: f64, mean_degree: f64) -> Result<EiTheoryResult> {
    Ok(match kind {
        SamplerKind::Rw => ei_rw_pareto(gamma)?,
        SamplerKind::Pr { c } => ei_pr_lower_bound(c)?,
        SamplerKind::Rwj { alpha } => ei_rwj_pareto(gamma, alpha, mean_degree)?,
    })
}

fn run_member(
    g: &Graph,
    a: &PipelineArgs,
    kind: SamplerKind,
    seed: u64,
    theory: EiTheoryResult,
) -> Result<(MemberReport, Vec<u32>)> {
    let name = label(kind);
    let mut cfg = SamplerConfig::new(kind, a.length, seed);
    if let Some(b) = a.sampler.burn_in {
        cfg = cfg.with_burn_in(b);
    }
    let trace = sample(g, &cfg).with_context(|| format!("stage sample ({name})"))?;
    let values = trace.degrees.to_f64();
    let estimates = estimate_values(&values, &a.estimator, Method::Both)
        .with_context(|| format!("stage estimate ({name})"))?;
    let threshold = threshold_at(&values, a.estimator.quantile);
    let check = check_values(&values, threshold, Some(a.estimator.quantile), &a.d2)
        .with_context(|| format!("stage check ({name})"))?;

    let copula = estimates.copula.as_ref().expect("both methods").estimate.theta_hat;
    let intervals = estimates.intervals.as_ref().and_then(|r| r.value());
    let lower_bound = matches!(kind, SamplerKind::Pr { .. }) && !kind.never_jumps();
    let ok = |x: f64| {
        if lower_bound {
            x >= theory.theta - BOUND_SLACK
        } else {
            (x - theory.theta).abs() <= a.tolerance
        }
    };
    let (copula_pass, intervals_pass) = (ok(copula), intervals.is_some_and(ok));
    let report = MemberReport {
        label: name,
        sampler: cfg,
        comparison: if lower_bound { "lower-bound" } else { "estimate" },
        theory,
        copula,
        intervals,
        copula_pass,
        intervals_pass,
        pass: copula_pass && intervals_pass,
        estimates,
        check,
    };
    Ok((report, trace.degrees.0))
}

pub fn run(a: &PipelineArgs, run: &mut Run) -> Result<()> {
    let model = a.model.build()?;
    let mean_degree = model.mean_degree()?;
    let kinds = members(a, mean_degree)?;
    let theories = kinds
        .iter()
        .map(|&k| theory_for(k, model.gamma, mean_degree))
        .collect::<Result<Vec<_>>>()
        .context("stage theory")?;
    std::fs::create_dir_all(&a.out_dir)
        .with_context(|| format!("creating {}", a.out_dir.display()))?;
    let out = |name: &str| a.out_dir.join(name);
    let mut seeds = SeedRecord::new(a.seed);

    let (graph, section) = match &a.graph {
        Some(path) => {
            let bytes = run.read(path)?;
            let loaded = parse_edge_list(bytes.as_slice())
                .with_context(|| format!("stage generate: parsing {}", path.display()))?;
            let stats = loaded.graph.stats();
            let section = GraphSection {
                source: path.display().to_string(),
                stats,
                configuration: None,
                rewire: None,
            };
            (loaded.graph, section)
        }
        None => {
            let built = build_graph(&model, a.nodes, a.rewire_steps, &mut seeds)
                .context("stage generate")?;
            let mut buf = Vec::new();
            write_edge_list(&built.graph, &mut buf)?;
            run.write(&out("graph.txt"), &buf)?;
            let section = GraphSection {
                source: "generated".into(),
                stats: built.graph.stats(),
                configuration: Some(built.configuration),
                rewire: Some(built.rewire),
            };
            (built.graph, section)
        }
    };

    let walk_seeds: Vec<u64> = (0..kinds.len())
        .map(|k| seeds.derive(format!("walk.{k}"), Stage::Walk, k as u64))
        .collect();
    let results = kinds
        .par_iter()
        .zip(walk_seeds.par_iter())
        .zip(theories.into_par_iter())
        .map(|((&kind, &seed), theory)| run_member(&graph, a, kind, seed, theory))
        .collect::<Result<Vec<_>>>()?;

    let mut reports = Vec::with_capacity(results.len());
    let mut csv = String::from(
        "run,theory,comparison,copula,intervals,copula_pass,intervals_pass,r_up,r_cluster\n",
    );
    let mut sweeps = String::new();
    for (report, degrees) in results {
        if a.keep_traces {
            run.write(&out(&format!("trace-{}.txt", report.label)), &format_trace(&degrees))?;
        }
        let iv = report.intervals.map(|x| x.to_string()).unwrap_or_default();
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            report.label,
            report.theory.theta,
            report.comparison,
            report.copula,
            iv,
            report.copula_pass,
            report.intervals_pass,
            report.check.d2.r_up,
            report.check.d2.r_cluster
        );
        if let Some(r) = &report.estimates.intervals {
            let table = sweep_csv(&r.sweep, Some(&report.label));
            let body = if sweeps.is_empty() { &table[..] } else { table.split_once('\n').map_or("", |t| t.1) };
            sweeps.push_str(body);
        }
        reports.push(report);
    }
    let all_pass = reports.iter().all(|r| r.pass);
    let report = PipelineReport {
        model: &model,
        mean_degree,
        graph: section,
        tolerance: a.tolerance,
        members: reports,
        all_pass,
    };
    run.write_json(&out("report.json"), &report)?;
    run.write(&out("report.csv"), csv.as_bytes())?;
    run.write(&out("sweep.csv"), sweeps.as_bytes())?;
    run.manifest_default = Some(out("manifest.json"));
    run.seeds = Some(seeds);
    Ok(())
}
