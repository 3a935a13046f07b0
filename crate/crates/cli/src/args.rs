use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use netei_core::estimators::{
    DiagonalFit, DEFAULT_D2_LENGTHS, DEFAULT_D2_OCCURRENCES, DEFAULT_GRID_POINTS, DEFAULT_LAG,
    DEFAULT_QUANTILE, DEFAULT_TAIL_POINTS,
};
use netei_core::{JointDegreeModel, SamplerKind};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "netei",
    version,
    about = "Extremal index of random-walk samplers on degree-correlated graphs"
)]
pub struct Cli {
    /// Write the run manifest here instead of next to the primary output
    /// (or stderr when output goes to stdout).
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a graph with bivariate Pareto degree correlations.
    Generate(GenerateArgs),
    /// Walk a graph and record the degree trace.
    Sample(SampleArgs),
    /// Estimate the extremal index of a degree trace.
    Estimate(EstimateArgs),
    /// Closed-form extremal index values and extreme-value quantities.
    Theory(TheoryArgs),
    /// Exceedance, cluster and local-mixing statistics of a trace.
    Check(CheckArgs),
    /// Generate, sample, estimate and check in one run, against theory.
    Pipeline(PipelineArgs),
    /// Re-run a recorded manifest and compare output hashes.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Sample(_) => "sample",
            Command::Estimate(_) => "estimate",
            Command::Theory(_) => "theory",
            Command::Check(_) => "check",
            Command::Pipeline(_) => "pipeline",
            Command::Replay(_) => "replay",
        }
    }

    pub fn parameters(&self) -> serde_json::Value {
        let v = match self {
            Command::Generate(a) => serde_json::to_value(a),
            Command::Sample(a) => serde_json::to_value(a),
            Command::Estimate(a) => serde_json::to_value(a),
            Command::Theory(a) => serde_json::to_value(a),
            Command::Check(a) => serde_json::to_value(a),
            Command::Pipeline(a) => serde_json::to_value(a),
            Command::Replay(a) => serde_json::to_value(a),
        };
        v.expect("argument records serialize")
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ModelArgs {
    /// Location of the bivariate Pareto degree law.
    #[arg(long, default_value_t = 10.0)]
    pub mu: f64,
    /// Scale of the degree law.
    #[arg(long, default_value_t = 15.0)]
    pub sigma: f64,
    /// Tail index of the degree law.
    #[arg(long, default_value_t = 1.2)]
    pub gamma: f64,
}

impl ModelArgs {
    pub fn build(&self) -> Result<JointDegreeModel> {
        Ok(JointDegreeModel::new(self.mu, self.sigma, self.gamma)?)
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct GenerateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 5000)]
    pub nodes: usize,
    /// Metropolis swap proposals; 0 keeps the configuration-model graph.
    #[arg(long, default_value_t = 200_000)]
    pub rewire_steps: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Edge-list output, `-` for stdout.
    #[arg(short, long)]
    pub out: PathBuf,
    /// JSON sidecar; defaults to `<out>.json` when `--out` is a file.
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Rw,
    Pr,
    Rwj,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SamplerArgs {
    #[arg(long, value_enum, default_value_t = Kind::Rw)]
    pub kind: Kind,
    /// PageRank damping factor.
    #[arg(long, default_value_t = 0.85)]
    pub c: f64,
    /// Jump weight of the random walk with jumps.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Discarded steps; defaults to 0 for RW/RWJ and 10 N for PR.
    #[arg(long)]
    pub burn_in: Option<u64>,
}

impl SamplerArgs {
    /// `default_alpha` is used for RWJ when `--alpha` is absent.
    pub fn kind(&self, default_alpha: Option<f64>) -> Result<SamplerKind> {
        Ok(match self.kind {
            Kind::Rw => SamplerKind::Rw,
            Kind::Pr => SamplerKind::Pr { c: self.c },
            Kind::Rwj => match self.alpha.or(default_alpha) {
                Some(alpha) => SamplerKind::Rwj { alpha },
                None => bail!("--kind rwj needs --alpha"),
            },
        })
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SampleArgs {
    /// Edge list to walk on, `-` for stdin.
    #[arg(long)]
    pub graph: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub sampler: SamplerArgs,
    /// Number of recorded samples.
    #[arg(short = 'n', long, default_value_t = 100_000)]
    pub length: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Degree trace output, `-` for stdout.
    #[arg(short, long, default_value = "-")]
    pub out: PathBuf,
    /// JSON metadata; defaults to `<out>.json` when `--out` is a file.
    #[arg(long)]
    pub meta: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Copula,
    Intervals,
    Both,
}

impl Method {
    pub fn copula(self) -> bool {
        matches!(self, Method::Copula | Method::Both)
    }

    pub fn intervals(self) -> bool {
        matches!(self, Method::Intervals | Method::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fit {
    LeastSquares,
    Spline,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct EstimatorArgs {
    /// Spacing of the lagged pairs used by the copula estimator.
    #[arg(long, default_value_t = DEFAULT_LAG)]
    pub lag: usize,
    #[arg(long, value_enum, default_value_t = Fit::LeastSquares)]
    pub fit: Fit,
    /// Grid points used by the least-squares end fit.
    #[arg(long, default_value_t = DEFAULT_TAIL_POINTS)]
    pub tail_points: usize,
    /// Diagonal grid resolution.
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    pub grid_points: usize,
    /// Quantile levels of the intervals sweep.
    #[arg(
        long,
        value_delimiter = ',',
        default_values_t = [0.90, 0.91, 0.92, 0.93, 0.94, 0.95, 0.96, 0.97, 0.98, 0.99]
    )]
    pub levels: Vec<f64>,
    /// Threshold quantile for the single-level intervals estimate.
    #[arg(long, default_value_t = DEFAULT_QUANTILE)]
    pub quantile: f64,
}

impl EstimatorArgs {
    pub fn diagonal_fit(&self) -> DiagonalFit {
        match self.fit {
            Fit::LeastSquares => DiagonalFit::LeastSquaresTail {
                points: self.tail_points,
            },
            Fit::Spline => DiagonalFit::Spline,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct EstimateArgs {
    /// Degree trace, one integer per line, `-` for stdin.
    #[arg(long, default_value = "-")]
    pub trace: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    pub method: Method,
    #[command(flatten)]
    #[serde(flatten)]
    pub estimator: EstimatorArgs,
    /// JSON result, `-` for stdout.
    #[arg(short, long, default_value = "-")]
    pub out: PathBuf,
    /// CSV of the intervals sweep: level, threshold, estimate.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// CSV of the empirical copula diagonal.
    #[arg(long)]
    pub copula_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct TheoryArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// RWJ jump weights to evaluate.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<f64>,
    /// PageRank damping factors to bound.
    #[arg(long, value_delimiter = ',')]
    pub c: Vec<f64>,
    /// Archimedean (Gumbel) copula parameters.
    #[arg(long, value_delimiter = ',')]
    pub beta: Vec<f64>,
    /// Extremal index for the derived quantities; defaults to the RW value.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Sample size for the maxima quantile.
    #[arg(long)]
    pub n: Option<f64>,
    /// Exceedance probability of the maxima quantile.
    #[arg(long, default_value_t = 0.1)]
    pub eta: f64,
    /// Limit of n (1 - F(u_n)) for the hitting-time fraction.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Number of nodes for the largest-degree estimates.
    #[arg(long)]
    pub largest_n: Option<f64>,
    /// Tail exponent for the largest-degree estimates.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Tail coefficient C in C x^-delta.
    #[arg(long, default_value_t = 1.0)]
    pub coeff: f64,
    /// Constant K of the i.i.d. largest degree K n^(1/delta).
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// JSON result, `-` for stdout.
    #[arg(short, long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct D2Args {
    /// Window lengths of the local-mixing check.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_D2_LENGTHS)]
    pub lengths: Vec<usize>,
    /// Windows per length.
    #[arg(long, default_value_t = DEFAULT_D2_OCCURRENCES)]
    pub occurrences: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct CheckArgs {
    /// Degree trace, one integer per line, `-` for stdin.
    #[arg(long, default_value = "-")]
    pub trace: PathBuf,
    /// Threshold as an empirical quantile level.
    #[arg(long, default_value_t = DEFAULT_QUANTILE)]
    pub quantile: f64,
    /// Absolute threshold; overrides `--quantile`.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub d2: D2Args,
    /// JSON result, `-` for stdout.
    #[arg(short, long, default_value = "-")]
    pub out: PathBuf,
    /// CSV of the per-length ratios.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PipelineArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 5000)]
    pub nodes: usize,
    #[arg(long, default_value_t = 200_000)]
    pub rewire_steps: u64,
    /// Walk an existing edge list instead of generating one.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// `--alpha` defaults to the model's mean degree.
    #[command(flatten)]
    #[serde(flatten)]
    pub sampler: SamplerArgs,
    #[arg(short = 'n', long, default_value_t = 1_000_000)]
    pub length: usize,
    /// One RWJ run per value.
    #[arg(long, value_delimiter = ',')]
    pub alpha_sweep: Vec<f64>,
    /// One PR run per value.
    #[arg(long, value_delimiter = ',')]
    pub c_sweep: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub estimator: EstimatorArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub d2: D2Args,
    /// Allowed distance between an estimate and its theoretical value.
    #[arg(long, default_value_t = 0.1)]
    pub tolerance: f64,
    /// Also write every degree trace.
    #[arg(long)]
    pub keep_traces: bool,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run.
    pub manifest_file: PathBuf,
}
