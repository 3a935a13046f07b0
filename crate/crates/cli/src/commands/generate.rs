use anyhow::{Context, Result};
use netei_core::generate::{
    configuration_model, metropolis_rewire, sample_degree_sequence, ConfigurationReport,
    RewireReport,
};
use netei_core::graph::write_edge_list;
use netei_core::{Graph, GraphStats, JointDegreeModel};
use serde::Serialize;

use crate::args::GenerateArgs;
use crate::io::{is_stdio, with_suffix, Run};
use crate::manifest::{SeedRecord, Stage};

pub struct BuiltGraph {
    pub graph: Graph,
    pub configuration: ConfigurationReport,
    pub rewire: RewireReport,
}

pub fn build_graph(
    model: &JointDegreeModel,
    nodes: usize,
    rewire_steps: u64,
    seeds: &mut SeedRecord,
) -> Result<BuiltGraph> {
    let degrees = sample_degree_sequence(model, nodes, seeds.derive("degrees", Stage::Degrees, 0))
        .context("degree sequence")?;
    let (g0, configuration) =
        configuration_model(&degrees, seeds.derive("configuration", Stage::Configuration, 0))
            .context("configuration model")?;
    let (graph, rewire) =
        metropolis_rewire(&g0, model, rewire_steps, seeds.derive("rewire", Stage::Rewire, 0))
            .context("rewiring")?;
    Ok(BuiltGraph {
        graph,
        configuration,
        rewire,
    })
}

#[derive(Serialize)]
struct Sidecar<'a> {
    model: &'a JointDegreeModel,
    mean_degree: f64,
    nodes: usize,
    rewire_steps: u64,
    seeds: &'a SeedRecord,
    configuration: ConfigurationReport,
    deleted_stub_fraction: f64,
    rewire: RewireReport,
    acceptance_rate: f64,
    graph: GraphStats,
}

pub fn run(a: &GenerateArgs, run: &mut Run) -> Result<()> {
    let model = a.model.build()?;
    let mean_degree = model.mean_degree()?;
    let mut seeds = SeedRecord::new(a.seed);
    let built = build_graph(&model, a.nodes, a.rewire_steps, &mut seeds)?;
    let stats = built.graph.stats();

    let mut buf = format!("# nodes {} edges {}\n", stats.nodes, stats.edges).into_bytes();
    write_edge_list(&built.graph, &mut buf)?;
    run.write(&a.out, &buf)?;
    run.primary_output(&a.out);

    let sidecar = a
        .sidecar
        .clone()
        .or_else(|| (!is_stdio(&a.out)).then(|| with_suffix(&a.out, ".json")));
    if let Some(path) = sidecar {
        run.write_json(
            &path,
            &Sidecar {
                model: &model,
                mean_degree,
                nodes: a.nodes,
                rewire_steps: a.rewire_steps,
                seeds: &seeds,
                configuration: built.configuration,
                deleted_stub_fraction: built.configuration.deleted_fraction(),
                rewire: built.rewire,
                acceptance_rate: built.rewire.acceptance_rate(),
                graph: stats,
            },
        )?;
    }
    run.seeds = Some(seeds);
    Ok(())
}
