use anyhow::{Context, Result};
use netei_core::graph::{parse_edge_list, SimplifyReport};
use netei_core::samplers::sample;
use netei_core::{GraphStats, SamplerConfig};
use serde::Serialize;

use crate::args::SampleArgs;
use crate::io::{format_trace, is_stdio, with_suffix, Run};
use crate::manifest::{SeedRecord, Stage};

#[derive(Serialize)]
struct Metadata<'a> {
    graph: &'a str,
    graph_stats: GraphStats,
    dropped_while_loading: SimplifyReport,
    sampler: SamplerConfig,
    burn_in: u64,
    seeds: &'a SeedRecord,
    trace_mean: f64,
    trace_max: u32,
}

pub fn run(a: &SampleArgs, run: &mut Run) -> Result<()> {
    let bytes = run.read(&a.graph)?;
    let loaded = parse_edge_list(bytes.as_slice())
        .with_context(|| format!("parsing {}", a.graph.display()))?;
    let mut seeds = SeedRecord::new(a.seed);
    let mut cfg = SamplerConfig::new(
        a.sampler.kind(None)?,
        a.length,
        seeds.derive("walk", Stage::Walk, 0),
    );
    if let Some(b) = a.sampler.burn_in {
        cfg = cfg.with_burn_in(b);
    }
    let trace = sample(&loaded.graph, &cfg)?;
    let degrees = trace.degrees.as_slice();
    run.write(&a.out, &format_trace(degrees))?;
    run.primary_output(&a.out);

    let meta = a
        .meta
        .clone()
        .or_else(|| (!is_stdio(&a.out)).then(|| with_suffix(&a.out, ".json")));
    if let Some(path) = meta {
        let graph = a.graph.display().to_string();
        run.write_json(
            &path,
            &Metadata {
                graph: &graph,
                graph_stats: loaded.graph.stats(),
                dropped_while_loading: loaded.report,
                sampler: cfg,
                burn_in: trace.burn_in,
                seeds: &seeds,
                trace_mean: trace.degrees.sum() as f64 / degrees.len() as f64,
                trace_max: trace.degrees.max().unwrap_or(0),
            },
        )?;
    }
    run.seeds = Some(seeds);
    Ok(())
}
