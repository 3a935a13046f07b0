//! Random-walk crawlers on the vertex set: plain random walk (RW), PageRank
//! walk with damping `c` (PR) and random walk with jumps of weight `alpha`
//! (RWJ). Each run produces a stationary trace of visited nodes and their
//! degrees.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::generate::bin_index;
use crate::graph::{DegreeSequence, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SamplerKind {
    Rw,
    /// Follow the walk with probability `c`, else jump to a uniform node.
    Pr { c: f64 },
    /// Jump to a uniform node with probability `alpha / (d + alpha)`.
    Rwj { alpha: f64 },
}

impl SamplerKind {
    /// PR with `c = 1` and RWJ with `alpha = 0` never jump; they are run
    /// exactly as RW.
    pub fn never_jumps(&self) -> bool {
        match *self {
            SamplerKind::Rw => true,
            SamplerKind::Pr { c } => c >= 1.0,
            SamplerKind::Rwj { alpha } => alpha == 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub kind: SamplerKind,
    /// Steps discarded before recording. `None` uses the default for the
    /// kind: 0 for walks started from their exact stationary law, `10 N` for
    /// PR.
    pub burn_in: Option<u64>,
    pub length: usize,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn new(kind: SamplerKind, length: usize, seed: u64) -> Self {
        SamplerConfig {
            kind,
            burn_in: None,
            length,
            seed,
        }
    }

    pub fn with_burn_in(mut self, burn_in: u64) -> Self {
        self.burn_in = Some(burn_in);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.length == 0 {
            return Err(invalid("length", "must be at least 1"));
        }
        match self.kind {
            SamplerKind::Rw => {}
            SamplerKind::Pr { c } => {
                if !(c > 0.0 && c <= 1.0) {
                    return Err(invalid("c", format!("must lie in (0, 1], got {c}")));
                }
            }
            SamplerKind::Rwj { alpha } => {
                if !(alpha >= 0.0 && !alpha.is_nan()) {
                    return Err(invalid("alpha", format!("must be >= 0, got {alpha}")));
                }
            }
        }
        Ok(())
    }

    pub fn effective_burn_in(&self, g: &Graph) -> u64 {
        self.burn_in.unwrap_or(match self.kind {
            SamplerKind::Pr { .. } if !self.kind.never_jumps() => 10 * g.node_count() as u64,
            _ => 0,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleTrace {
    pub node_ids: Vec<u32>,
    pub degrees: DegreeSequence,
    pub config: SamplerConfig,
    pub burn_in: u64,
}

impl SampleTrace {
    pub fn len(&self) -> usize {
        self.node_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node_ids.is_empty()
    }
}

/// Runs the sampler described by `cfg.kind`.
pub fn sample(g: &Graph, cfg: &SamplerConfig) -> Result<SampleTrace> {
    cfg.validate()?;
    if g.edge_count() == 0 && cfg.kind.never_jumps() {
        return Err(Error::IsolatedNode(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = g.node_count();

    let start = if cfg.kind.never_jumps() {
        StartLaw::DegreeProportional(Stubs::new(g, &g.largest_component()))
    } else {
        match cfg.kind {
            SamplerKind::Rwj { alpha } => {
                let all: Vec<u32> = (0..n as u32).collect();
                StartLaw::DegreePlusAlpha(Stubs::new(g, &all), alpha)
            }
            _ => StartLaw::Uniform,
        }
    };
    let mut current = start.draw(g, &mut rng);

    let burn_in = cfg.effective_burn_in(g);
    for _ in 0..burn_in {
        current = step(g, cfg.kind, current, &mut rng)?;
    }
    let mut node_ids = Vec::with_capacity(cfg.length);
    node_ids.push(current);
    for _ in 1..cfg.length {
        current = step(g, cfg.kind, current, &mut rng)?;
        node_ids.push(current);
    }
    let degrees = DegreeSequence(node_ids.iter().map(|&v| g.degree(v)).collect());
    Ok(SampleTrace {
        node_ids,
        degrees,
        config: *cfg,
        burn_in,
    })
}

fn require(cfg: &SamplerConfig, ok: bool, expected: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(invalid("kind", format!("expected {expected} sampler, got {:?}", cfg.kind)))
    }
}

/// Simple random walk: the next node is a uniform neighbour. Started from
/// the degree-proportional law on the largest connected component.
pub fn random_walk(g: &Graph, cfg: &SamplerConfig) -> Result<SampleTrace> {
    require(cfg, matches!(cfg.kind, SamplerKind::Rw), "RW")?;
    sample(g, cfg)
}

/// PageRank walk: random-walk step with probability `c`, otherwise a jump
/// to a uniformly random node.
pub fn pagerank_walk(g: &Graph, cfg: &SamplerConfig) -> Result<SampleTrace> {
    require(cfg, matches!(cfg.kind, SamplerKind::Pr { .. }), "PR")?;
    sample(g, cfg)
}

/// Random walk with jumps: from a node of degree `d` jump uniformly with
/// probability `alpha / (d + alpha)`. Stationary occupancy is
/// `(d_i + alpha) / (2M + N alpha)`, which is also the start law.
pub fn rwj_walk(g: &Graph, cfg: &SamplerConfig) -> Result<SampleTrace> {
    require(cfg, matches!(cfg.kind, SamplerKind::Rwj { .. }), "RWJ")?;
    sample(g, cfg)
}

#[inline]
fn step<R: Rng>(g: &Graph, kind: SamplerKind, at: u32, rng: &mut R) -> Result<u32> {
    let d = g.degree(at);
    let jump = match kind {
        SamplerKind::Rw => false,
        SamplerKind::Pr { c } => c < 1.0 && (d == 0 || rng.gen::<f64>() >= c),
        SamplerKind::Rwj { alpha } => {
            alpha > 0.0 && (d == 0 || rng.gen::<f64>() * (f64::from(d) + alpha) < alpha)
        }
    };
    if jump {
        return Ok(rng.gen_range(0..g.node_count() as u32));
    }
    if d == 0 {
        return Err(Error::IsolatedNode(at));
    }
    let nb = g.neighbors(at);
    Ok(nb[rng.gen_range(0..nb.len())])
}

/// Half-edge table of a node subset, for degree-proportional draws.
struct Stubs {
    nodes: Vec<u32>,
    /// Cumulative degree, `cum[i]` = total degree of `nodes[..=i]`.
    cum: Vec<u64>,
}

impl Stubs {
    fn new(g: &Graph, nodes: &[u32]) -> Self {
        let mut total = 0u64;
        let cum = nodes
            .iter()
            .map(|&v| {
                total += u64::from(g.degree(v));
                total
            })
            .collect();
        Stubs {
            nodes: nodes.to_vec(),
            cum,
        }
    }

    fn total(&self) -> u64 {
        self.cum.last().copied().unwrap_or(0)
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> u32 {
        let s = rng.gen_range(0..self.total());
        self.nodes[self.cum.partition_point(|&c| c <= s)]
    }
}

enum StartLaw {
    DegreeProportional(Stubs),
    DegreePlusAlpha(Stubs, f64),
    Uniform,
}

impl StartLaw {
    fn draw<R: Rng>(&self, g: &Graph, rng: &mut R) -> u32 {
        let n = g.node_count() as u32;
        match self {
            StartLaw::DegreeProportional(stubs) => stubs.draw(rng),
            StartLaw::DegreePlusAlpha(stubs, alpha) => {
                // Mixture: degree part has weight 2M, uniform part N alpha.
                let degree_mass = stubs.total() as f64;
                let jump_mass = f64::from(n) * alpha;
                if stubs.total() > 0 && rng.gen::<f64>() * (degree_mass + jump_mass) < degree_mass {
                    stubs.draw(rng)
                } else {
                    rng.gen_range(0..n)
                }
            }
            StartLaw::Uniform => rng.gen_range(0..n),
        }
    }
}

/// Transition counts between consecutive degrees on a degree-bin grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelHistogram {
    pub bin_edges: Vec<f64>,
    /// `counts[a][b]`: transitions from a degree in bin `a` to one in bin `b`.
    pub counts: Vec<Vec<u64>>,
}

impl KernelHistogram {
    pub fn row_total(&self, row: usize) -> u64 {
        self.counts[row].iter().sum()
    }

    /// Estimated conditional density of the next degree given the current
    /// bin: row frequencies divided by bin width.
    pub fn conditional_density(&self, row: usize) -> Vec<f64> {
        let total = self.row_total(row) as f64;
        self.counts[row]
            .iter()
            .enumerate()
            .map(|(b, &c)| {
                if total == 0.0 {
                    0.0
                } else {
                    c as f64 / total / (self.bin_edges[b + 1] - self.bin_edges[b])
                }
            })
            .collect()
    }

    /// Row-normalised transition frequencies.
    pub fn conditional_frequency(&self, row: usize) -> Vec<f64> {
        let total = self.row_total(row) as f64;
        self.counts[row]
            .iter()
            .map(|&c| if total == 0.0 { 0.0 } else { c as f64 / total })
            .collect()
    }

    pub fn bin_of(&self, degree: f64) -> Option<usize> {
        bin_index(&self.bin_edges, degree)
    }
}

/// Histogram of `(d_t, d_{t+1})` pairs. `bin_edges` must be ascending;
/// degrees outside `[first, last)` are skipped.
pub fn kernel_histogram(degrees: &DegreeSequence, bin_edges: &[f64]) -> Result<KernelHistogram> {
    if degrees.len() < 2 {
        return Err(Error::TraceTooShort {
            needed: 2,
            got: degrees.len(),
        });
    }
    if bin_edges.len() < 2 || bin_edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("bins", "need at least two strictly ascending edges"));
    }
    let nb = bin_edges.len() - 1;
    let mut counts = vec![vec![0u64; nb]; nb];
    for w in degrees.as_slice().windows(2) {
        let a = bin_index(bin_edges, f64::from(w[0]));
        let b = bin_index(bin_edges, f64::from(w[1]));
        if let (Some(a), Some(b)) = (a, b) {
            counts[a][b] += 1;
        }
    }
    Ok(KernelHistogram {
        bin_edges: bin_edges.to_vec(),
        counts,
    })
}

/// `count + 1` log-spaced edges covering `[lo, hi]`.
pub fn log_bins(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let r = (hi / lo).ln();
    (0..=count)
        .map(|k| lo * (r * k as f64 / count as f64).exp())
        .collect()
}
