use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::Parser;
use serde::Serialize;

use crate::args::{Cli, Command, ReplayArgs};
use crate::io::{is_stdio, sha256_hex, to_json, FileRecord};
use crate::manifest::RunManifest;

#[derive(Serialize)]
struct Comparison {
    path: String,
    recorded: String,
    replayed: Option<String>,
    equal: bool,
}

#[derive(Serialize)]
struct ReplayReport {
    manifest: String,
    subcommand: String,
    recorded_version: String,
    reproduced: bool,
    outputs: Vec<Comparison>,
}

fn current_hash(rec: &FileRecord) -> Result<String> {
    let bytes = std::fs::read(&rec.path).with_context(|| format!("reading {}", rec.path))?;
    Ok(sha256_hex(&bytes))
}

/// Re-runs the recorded command line and compares what it writes with the
/// recorded hashes. Stdout artifacts are hashed without being printed.
pub fn run(a: &ReplayArgs) -> Result<()> {
    let text = std::fs::read(&a.manifest_file)
        .with_context(|| format!("reading manifest {}", a.manifest_file.display()))?;
    let recorded: RunManifest = serde_json::from_slice(&text)
        .with_context(|| format!("parsing manifest {}", a.manifest_file.display()))?;
    for input in &recorded.inputs {
        if is_stdio(Path::new(&input.path)) {
            bail!("the recorded run read stdin; rerun it with a file input to replay");
        }
        if current_hash(input)? != input.sha256 {
            bail!("input {} changed since the recorded run", input.path);
        }
    }
    let cli = Cli::try_parse_from(&recorded.argv).context("recorded argv no longer parses")?;
    if matches!(cli.command, Command::Replay(_)) {
        bail!("a replay manifest cannot be replayed");
    }

    let fresh = super::execute(cli, recorded.argv.clone(), true)?;
    let outputs: Vec<Comparison> = recorded
        .outputs
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            let replayed = fresh
                .get(i)
                .filter(|f| f.path == rec.path)
                .map(|f| f.sha256.clone());
            Comparison {
                equal: replayed.as_deref() == Some(rec.sha256.as_str()),
                path: rec.path.clone(),
                recorded: rec.sha256.clone(),
                replayed,
            }
        })
        .collect();
    let reproduced = fresh.len() == recorded.outputs.len() && outputs.iter().all(|c| c.equal);
    let report = ReplayReport {
        manifest: a.manifest_file.display().to_string(),
        subcommand: recorded.subcommand,
        recorded_version: recorded.version,
        reproduced,
        outputs,
    };
    print!("{}", String::from_utf8_lossy(&to_json(&report)?));
    if !reproduced {
        bail!("replayed outputs differ from the manifest");
    }
    Ok(())
}
