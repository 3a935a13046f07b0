#![allow(dead_code)]

use netei_core::generate::{configuration_model, metropolis_rewire, sample_degree_sequence};
use netei_core::{Graph, JointDegreeModel};

pub const MU: f64 = 10.0;
pub const SIGMA: f64 = 15.0;
pub const GAMMA: f64 = 1.2;
pub const NODES: usize = 5000;
pub const REWIRE_STEPS: u64 = 200_000;

pub fn reference_model() -> JointDegreeModel {
    JointDegreeModel::new(MU, SIGMA, GAMMA).unwrap()
}

/// Degree sequence, configuration model and Metropolis rewiring, each
/// stage with its own seed derived from `seed`.
pub fn reference_graph(seed: u64) -> Graph {
    let model = reference_model();
    let ds = sample_degree_sequence(&model, NODES, seed).unwrap();
    let (g, _) = configuration_model(&ds, seed ^ 0x5151).unwrap();
    metropolis_rewire(&g, &model, REWIRE_STEPS, seed ^ 0xa3a3).unwrap().0
}

/// Kolmogorov-Smirnov distance between a sample and a CDF.
pub fn ks_distance(sample: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sample.len() {
        let x = sample[i];
        let mut j = i;
        while j < sample.len() && sample[j] == x {
            j += 1;
        }
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs()).max((f - j as f64 / n).abs());
        i = j;
    }
    d
}

/// Composite Simpson rule with `intervals` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let mut s = f(a) + f(b);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + k as f64 * h);
    }
    s * h / 3.0
}

/// Kolmogorov-Smirnov distance between an integer sample and the CDF of an
/// integer-valued law, compared at every integer up to the sample maximum.
pub fn ks_integer(sample: &[u32], cdf: impl Fn(u32) -> f64) -> f64 {
    let max = *sample.iter().max().unwrap() as usize;
    let mut counts = vec![0u64; max + 1];
    for &x in sample {
        counts[x as usize] += 1;
    }
    let n = sample.len() as f64;
    let mut acc = 0u64;
    let mut d: f64 = 0.0;
    for (k, &c) in counts.iter().enumerate() {
        acc += c;
        d = d.max((acc as f64 / n - cdf(k as u32)).abs());
    }
    d
}

/// Max-autoregressive process `X_t = max(a X_{t-1}, (1 - a) Z_t)` with unit
/// Frechet innovations, started in its stationary law. Its extremal index
/// is `1 - a`.
pub fn armax(a: f64, n: usize, seed: u64) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut frechet = move || -1.0 / (1.0 - rng.gen::<f64>()).ln();
    let mut x = frechet();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(x);
        x = (a * x).max((1.0 - a) * frechet());
    }
    out
}

/// I.i.d. Pareto draws with tail `x^-delta` on `[1, inf)`.
pub fn iid_pareto(delta: f64, n: usize, seed: u64) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (1.0 - rng.gen::<f64>()).powf(-1.0 / delta)).collect()
}

pub fn levels(from: u32, to: u32) -> Vec<f64> {
    (from..=to).map(|k| f64::from(k) / 100.0).collect()
}

pub fn quantile(values: &[f64], level: f64) -> f64 {
    let mut s = values.to_vec();
    s.sort_by(f64::total_cmp);
    netei_core::estimators::empirical_quantile(&s, level)
}
