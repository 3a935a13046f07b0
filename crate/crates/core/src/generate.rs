//! Correlated random graph synthesis: node degrees drawn from the model's
//! node marginal, wired uniformly by the configuration model, then steered
//! toward the target neighbour-degree correlation by Metropolis edge swaps.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{DegreeSequence, Graph};
use crate::model::{JointDegreeDensity, JointDegreeModel, NodeDegreeTable};

/// Draws `n` node degrees by inverse transform on the tabulated node CDF,
/// rounding to the nearest integer (at least 1). An odd total is fixed by
/// bumping one uniformly chosen entry.
pub fn sample_degree_sequence(
    model: &JointDegreeModel,
    n: usize,
    seed: u64,
) -> Result<DegreeSequence> {
    let table = NodeDegreeTable::new(model.marginals()?);
    sample_degree_sequence_from(&table, n, seed)
}

pub fn sample_degree_sequence_from(
    table: &NodeDegreeTable,
    n: usize,
    seed: u64,
) -> Result<DegreeSequence> {
    if n < 2 {
        return Err(invalid("nodes", format!("need at least 2 nodes, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degrees: Vec<u32> = (0..n)
        .map(|_| {
            let p: f64 = rng.gen();
            let d = table.quantile(p).round();
            d.clamp(1.0, f64::from(u32::MAX - 1)) as u32
        })
        .collect();
    if degrees.iter().map(|&d| u64::from(d)).sum::<u64>() % 2 == 1 {
        let i = rng.gen_range(0..n);
        degrees[i] += 1;
    }
    Ok(DegreeSequence(degrees))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationReport {
    pub requested_stubs: u64,
    /// Stubs lost to self-loops and repeated edges.
    pub deleted_stubs: u64,
    pub self_loops: usize,
    pub multi_edges: usize,
    /// Nodes whose realised degree is below the requested one.
    pub nodes_changed: usize,
}

impl ConfigurationReport {
    pub fn deleted_fraction(&self) -> f64 {
        if self.requested_stubs == 0 {
            0.0
        } else {
            self.deleted_stubs as f64 / self.requested_stubs as f64
        }
    }
}

/// Uniform half-edge matching followed by simplification.
pub fn configuration_model(
    degrees: &DegreeSequence,
    seed: u64,
) -> Result<(Graph, ConfigurationReport)> {
    let total = degrees.sum();
    if total % 2 == 1 {
        return Err(Error::OddDegreeSum(total));
    }
    let mut stubs: Vec<u32> = Vec::with_capacity(total as usize);
    for (node, &d) in degrees.as_slice().iter().enumerate() {
        stubs.extend(std::iter::repeat_n(node as u32, d as usize));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    stubs.shuffle(&mut rng);
    let pairs = stubs.chunks_exact(2).map(|p| (p[0], p[1]));
    let (graph, simplify) = Graph::from_edges(degrees.len(), pairs)?;
    let realised = graph.degrees();
    let nodes_changed = realised
        .as_slice()
        .iter()
        .zip(degrees.as_slice())
        .filter(|(r, d)| r != d)
        .count();
    let report = ConfigurationReport {
        requested_stubs: total,
        deleted_stubs: total - 2 * graph.edge_count() as u64,
        self_loops: simplify.self_loops,
        multi_edges: simplify.duplicates,
        nodes_changed,
    };
    Ok((graph, report))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewireReport {
    pub proposals: u64,
    pub accepted: u64,
    /// Rejected by the Metropolis test.
    pub metropolis_rejected: u64,
    /// Rejected because the swap would create a self-loop or repeated edge.
    pub structural_rejected: u64,
}

impl RewireReport {
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposals == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposals as f64
        }
    }
}

#[inline]
fn edge_key(u: u32, v: u32) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    (u64::from(a) << 32) | u64::from(b)
}

/// Degree-preserving double-edge swaps with Metropolis acceptance.
///
/// Each of the `steps` proposals picks two distinct edges `(v1, w1)`,
/// `(v2, w2)` uniformly (the second one in a random orientation) and
/// replaces them by `(v1, v2)`, `(w1, w2)` with probability
/// `min(1, f(j1,j2) f(k1,k2) / (f(j1,k1) f(j2,k2)))`, where `j`, `k` are the
/// degrees of `v`, `w`. Swaps that would break simplicity are rejected.
pub fn metropolis_rewire<D: JointDegreeDensity + ?Sized>(
    g: &Graph,
    density: &D,
    steps: u64,
    seed: u64,
) -> Result<(Graph, RewireReport)> {
    let mut edges: Vec<(u32, u32)> = g.edges().collect();
    if edges.len() < 2 {
        return Err(Error::TooFewEdges {
            needed: 2,
            found: edges.len(),
        });
    }
    let degree: Vec<f64> = g.degrees().as_slice().iter().map(|&d| f64::from(d)).collect();
    let mut present: HashSet<u64> = edges.iter().map(|&(u, v)| edge_key(u, v)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = RewireReport::default();
    let m = edges.len();

    for _ in 0..steps {
        report.proposals += 1;
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let (v1, w1) = edges[i];
        let (v2, w2) = if rng.gen::<bool>() {
            edges[j]
        } else {
            (edges[j].1, edges[j].0)
        };

        if v1 == v2
            || w1 == w2
            || present.contains(&edge_key(v1, v2))
            || present.contains(&edge_key(w1, w2))
        {
            report.structural_rejected += 1;
            continue;
        }

        let (j1, k1) = (degree[v1 as usize], degree[w1 as usize]);
        let (j2, k2) = (degree[v2 as usize], degree[w2 as usize]);
        let log_ratio = density.ln_joint_density(j1, j2) + density.ln_joint_density(k1, k2)
            - density.ln_joint_density(j1, k1)
            - density.ln_joint_density(j2, k2);
        let y: f64 = rng.gen();
        if y.ln() > log_ratio {
            report.metropolis_rejected += 1;
            continue;
        }

        present.remove(&edge_key(v1, w1));
        present.remove(&edge_key(v2, w2));
        present.insert(edge_key(v1, v2));
        present.insert(edge_key(w1, w2));
        edges[i] = (v1, v2);
        edges[j] = (w1, w2);
        report.accepted += 1;
    }

    let (graph, _) = Graph::from_edges(g.node_count(), edges)?;
    Ok((graph, report))
}

/// Empirical `P(D1 >= d1, D2 >= d2)` over both orientations of every edge.
pub fn neighbor_pair_tail(g: &Graph, d1: u32, d2: u32) -> f64 {
    let mut hits = 0u64;
    for (u, v) in g.edges() {
        let (a, b) = (g.degree(u), g.degree(v));
        hits += u64::from(a >= d1 && b >= d2) + u64::from(b >= d1 && a >= d2);
    }
    hits as f64 / (2 * g.edge_count()) as f64
}

/// Counts of oriented edges whose end-point degrees fall in each
/// `(row, col)` cell of `bin_edges` (ascending, half-open bins; degrees
/// outside the range are dropped).
pub fn joint_degree_histogram(g: &Graph, bin_edges: &[f64]) -> Vec<Vec<u64>> {
    let nb = bin_edges.len().saturating_sub(1);
    let mut counts = vec![vec![0u64; nb]; nb];
    let bin = |d: u32| bin_index(bin_edges, f64::from(d));
    for (u, v) in g.edges() {
        if let (Some(a), Some(b)) = (bin(g.degree(u)), bin(g.degree(v))) {
            counts[a][b] += 1;
            counts[b][a] += 1;
        }
    }
    counts
}

pub(crate) fn bin_index(edges: &[f64], x: f64) -> Option<usize> {
    if edges.len() < 2 || x < edges[0] || x >= edges[edges.len() - 1] {
        return None;
    }
    Some(edges.partition_point(|&e| e <= x) - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Flat;
    impl JointDegreeDensity for Flat {
        fn ln_joint_density(&self, _: f64, _: f64) -> f64 {
            0.0
        }
    }

    fn ring(n: u32) -> Graph {
        Graph::from_edges(n as usize, (0..n).map(|i| (i, (i + 1) % n))).unwrap().0
    }

    fn assert_simple(g: &Graph) {
        for u in 0..g.node_count() as u32 {
            let nb = g.neighbors(u);
            assert!(nb.windows(2).all(|w| w[0] < w[1]));
            assert!(!nb.contains(&u));
        }
    }

    #[test]
    fn degree_sequence_is_even_and_positive() {
        let model = JointDegreeModel::new(10.0, 15.0, 1.2).unwrap();
        let table = NodeDegreeTable::new(model.marginals().unwrap());
        for seed in 0..20 {
            let s = sample_degree_sequence_from(&table, 101, seed).unwrap();
            assert_eq!(s.len(), 101);
            assert_eq!(s.sum() % 2, 0);
            assert!(s.as_slice().iter().all(|&d| d >= 1));
        }
        assert!(sample_degree_sequence_from(&table, 1, 0).is_err());
    }

    #[test]
    fn single_edge() {
        let (g, r) = configuration_model(&DegreeSequence(vec![1, 1]), 3).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(0, 1));
        assert_eq!(r.deleted_stubs, 0);
    }

    #[test]
    fn triangle_sequence_is_simple_and_bounded() {
        let req = [2u32, 2, 2];
        let mut full = 0;
        for seed in 0..200 {
            let (g, r) = configuration_model(&DegreeSequence(req.to_vec()), seed).unwrap();
            assert_simple(&g);
            for i in 0..3 {
                assert!(g.degree(i) <= req[i as usize]);
            }
            assert_eq!(r.deleted_stubs, 6 - 2 * g.edge_count() as u64);
            if g.edge_count() == 3 {
                full += 1;
            }
        }
        // Matching 6 stubs gives the triangle with probability 8/15.
        assert!(full > 70 && full < 150, "{full}");
    }

    #[test]
    fn odd_sum_rejected() {
        assert!(matches!(
            configuration_model(&DegreeSequence(vec![1, 2]), 0),
            Err(Error::OddDegreeSum(3))
        ));
    }

    #[test]
    fn zero_steps_is_identity() {
        let g = ring(10);
        let (h, r) = metropolis_rewire(&g, &Flat, 0, 1).unwrap();
        assert_eq!(g, h);
        assert_eq!(r.proposals, 0);
    }

    #[test]
    fn too_few_edges() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap().0;
        assert!(matches!(
            metropolis_rewire(&g, &Flat, 10, 0),
            Err(Error::TooFewEdges { found: 1, .. })
        ));
    }

    #[test]
    fn flat_density_accepts_every_legal_swap() {
        let g = ring(30);
        let (h, r) = metropolis_rewire(&g, &Flat, 500, 9).unwrap();
        assert_eq!(r.metropolis_rejected, 0);
        assert_eq!(r.accepted + r.structural_rejected, 500);
        assert!(r.accepted > 0);
        assert_eq!(g.degrees(), h.degrees());
        assert_simple(&h);
    }

    #[test]
    fn swaps_stay_simple_at_every_step() {
        let model = JointDegreeModel::new(2.0, 3.0, 1.0).unwrap();
        let seq = sample_degree_sequence(&model, 60, 4).unwrap();
        let (mut g, _) = configuration_model(&seq, 5).unwrap();
        let degrees = g.degrees();
        for step in 0..300 {
            let (h, _) = metropolis_rewire(&g, &model, 1, step).unwrap();
            assert_simple(&h);
            assert_eq!(h.degrees(), degrees);
            assert_eq!(h.edge_count(), g.edge_count());
            g = h;
        }
    }

    #[test]
    fn bins() {
        let e = [1.0, 2.0, 4.0];
        assert_eq!(bin_index(&e, 0.5), None);
        assert_eq!(bin_index(&e, 1.0), Some(0));
        assert_eq!(bin_index(&e, 3.9), Some(1));
        assert_eq!(bin_index(&e, 4.0), None);
    }

    proptest::proptest! {
        #[test]
        fn rewiring_preserves_degrees(seed in 0u64..1000, steps in 0u64..400) {
            let model = JointDegreeModel::new(3.0, 4.0, 1.5).unwrap();
            let seq = sample_degree_sequence(&model, 40, seed).unwrap();
            let (g, _) = configuration_model(&seq, seed + 1).unwrap();
            if g.edge_count() >= 2 {
                let (h, r) = metropolis_rewire(&g, &model, steps, seed + 2).unwrap();
                proptest::prop_assert_eq!(g.degrees(), h.degrees());
                proptest::prop_assert_eq!(
                    r.accepted + r.metropolis_rejected + r.structural_rejected,
                    steps
                );
                assert_simple(&h);
            }
        }
    }
}
