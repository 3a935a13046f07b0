//! Reading and writing run artifacts. `-` means stdin or stdout. Every byte
//! read or written is hashed into the run record.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::manifest::SeedRecord;

pub const STDIO: &str = "-";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

impl FileRecord {
    fn of(path: &Path, bytes: &[u8]) -> Self {
        FileRecord {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len() as u64,
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn is_stdio(path: &Path) -> bool {
    path.as_os_str() == STDIO
}

/// Side-effect record of one subcommand.
#[derive(Debug, Default)]
pub struct Run {
    pub inputs: Vec<FileRecord>,
    pub outputs: Vec<FileRecord>,
    pub seeds: Option<SeedRecord>,
    /// Where the manifest goes when `--manifest` is not given.
    pub manifest_default: Option<PathBuf>,
    /// Hash stdout artifacts without printing them (used by replay).
    pub capture_stdout: bool,
}

impl Run {
    pub fn new(capture_stdout: bool) -> Self {
        Run {
            capture_stdout,
            ..Run::default()
        }
    }

    pub fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        if is_stdio(path) {
            std::io::stdin()
                .lock()
                .read_to_end(&mut buf)
                .context("reading stdin")?;
        } else {
            buf = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        }
        self.inputs.push(FileRecord::of(path, &buf));
        Ok(buf)
    }

    pub fn write(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        if is_stdio(path) {
            if !self.capture_stdout {
                let mut out = std::io::stdout().lock();
                out.write_all(bytes).context("writing stdout")?;
                out.flush().context("writing stdout")?;
            }
        } else {
            std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
        }
        self.outputs.push(FileRecord::of(path, bytes));
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, path: &Path, value: &T) -> Result<()> {
        self.write(path, &to_json(value)?)
    }

    /// Sets the manifest location from the main output unless that is stdout.
    pub fn primary_output(&mut self, path: &Path) {
        if !is_stdio(path) {
            self.manifest_default = Some(with_suffix(path, ".manifest.json"));
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value)?;
    v.push(b'\n');
    Ok(v)
}

/// `path` with `suffix` appended to the full file name.
pub fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Parses a degree trace: one non-negative integer per line, blank lines
/// ignored.
pub fn parse_trace(bytes: &[u8]) -> Result<Vec<f64>> {
    let text = std::str::from_utf8(bytes).context("trace is not UTF-8 text")?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let v: u64 = t
            .parse()
            .with_context(|| format!("trace line {}: `{t}` is not a non-negative integer", i + 1))?;
        values.push(v as f64);
    }
    if values.is_empty() {
        bail!("trace is empty");
    }
    Ok(values)
}

pub fn format_trace(degrees: &[u32]) -> Vec<u8> {
    let mut out = Vec::with_capacity(degrees.len() * 4);
    for d in degrees {
        writeln!(out, "{d}").expect("writing to a Vec");
    }
    out
}
