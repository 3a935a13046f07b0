mod check;
mod estimate;
mod generate;
mod pipeline;
mod replay;
mod sample;
mod theory;

use std::time::Instant;

use anyhow::{Context, Result};

use crate::args::{Cli, Command};
use crate::io::{to_json, FileRecord, Run};
use crate::manifest::RunManifest;

/// Runs one subcommand and emits its manifest. With `capture_stdout`,
/// artifacts bound for stdout are hashed but not printed.
pub fn execute(cli: Cli, argv: Vec<String>, capture_stdout: bool) -> Result<Vec<FileRecord>> {
    let started = Instant::now();
    let mut run = Run::new(capture_stdout);
    match &cli.command {
        Command::Generate(a) => generate::run(a, &mut run)?,
        Command::Sample(a) => sample::run(a, &mut run)?,
        Command::Estimate(a) => estimate::run(a, &mut run)?,
        Command::Theory(a) => theory::run(a, &mut run)?,
        Command::Check(a) => check::run(a, &mut run)?,
        Command::Pipeline(a) => pipeline::run(a, &mut run)?,
        // The re-run it performs emits the manifest.
        Command::Replay(a) => return replay::run(a).map(|()| Vec::new()),
    }
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        subcommand: cli.command.name().to_string(),
        argv,
        parameters: cli.command.parameters(),
        seeds: run.seeds.take(),
        inputs: run.inputs,
        outputs: run.outputs.clone(),
        duration_secs: started.elapsed().as_secs_f64(),
    };
    let bytes = to_json(&manifest)?;
    match cli.manifest.or(run.manifest_default) {
        Some(path) => std::fs::write(&path, bytes)
            .with_context(|| format!("writing manifest {}", path.display()))?,
        None => eprint!("{}", String::from_utf8_lossy(&bytes)),
    }
    Ok(run.outputs)
}
