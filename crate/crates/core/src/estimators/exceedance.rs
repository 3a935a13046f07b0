//! Exceedance epochs, clusters of consecutive exceedances, the empirical
//! check of the local mixing condition, and first hitting times.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const DEFAULT_D2_LENGTHS: [usize; 4] = [5, 10, 15, 20];
pub const DEFAULT_D2_OCCURRENCES: usize = 2000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceedanceStats {
    pub threshold: f64,
    /// 1-based epochs `S_1 < ... < S_N` with `X_{S_i} > u`.
    pub epochs: Vec<usize>,
    /// `T_i = S_{i+1} - S_i`.
    pub interexceedance: Vec<usize>,
    /// Sizes of maximal runs of consecutive exceedances, in order.
    pub cluster_sizes: Vec<usize>,
    /// Upcrossings per exceedance, in percent.
    pub r_up: f64,
    /// Exceedances immediately preceded by an exceedance, per exceedance,
    /// in percent.
    pub r_cluster: f64,
}

impl ExceedanceStats {
    pub fn new(values: &[f64], threshold: f64) -> Self {
        let epochs: Vec<usize> = values
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > threshold)
            .map(|(i, _)| i + 1)
            .collect();
        let interexceedance: Vec<usize> = epochs.windows(2).map(|w| w[1] - w[0]).collect();
        let mut cluster_sizes = Vec::new();
        if !epochs.is_empty() {
            let mut run = 1;
            for &t in &interexceedance {
                if t == 1 {
                    run += 1;
                } else {
                    cluster_sizes.push(run);
                    run = 1;
                }
            }
            cluster_sizes.push(run);
        }
        let n = epochs.len();
        let consecutive = interexceedance.iter().filter(|&&t| t == 1).count();
        // An exceedance at epoch 1 has no predecessor, so it is neither.
        let upcrossings = n - consecutive - usize::from(epochs.first() == Some(&1));
        let pct = |k: usize| if n == 0 { 0.0 } else { 100.0 * k as f64 / n as f64 };
        ExceedanceStats {
            threshold,
            r_up: pct(upcrossings),
            r_cluster: pct(consecutive),
            epochs,
            interexceedance,
            cluster_sizes,
        }
    }

    pub fn exceedances(&self) -> usize {
        self.epochs.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSizeDistribution {
    /// `(size, probability)` for every observed size, ascending.
    pub pmf: Vec<(usize, f64)>,
    pub mean: f64,
    pub clusters: usize,
}

pub fn cluster_size_distribution(stats: &ExceedanceStats) -> Result<ClusterSizeDistribution> {
    let sizes = &stats.cluster_sizes;
    if sizes.is_empty() {
        return Err(Error::TooFewExceedances {
            threshold: stats.threshold,
            needed: 1,
            found: 0,
        });
    }
    let max = *sizes.iter().max().unwrap();
    let mut counts = vec![0usize; max + 1];
    for &s in sizes {
        counts[s] += 1;
    }
    let total = sizes.len() as f64;
    let pmf: Vec<(usize, f64)> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(j, &c)| (j, c as f64 / total))
        .collect();
    let mean = pmf.iter().map(|&(j, p)| j as f64 * p).sum();
    Ok(ClusterSizeDistribution {
        pmf,
        mean,
        clusters: sizes.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct D2Check {
    pub threshold: f64,
    /// Mean over windows and lengths, percent.
    pub r_up: f64,
    pub r_cluster: f64,
    /// `(length, r_up, r_cluster)` per window length.
    pub per_length: Vec<(usize, f64, f64)>,
    pub occurrences: usize,
}

/// Empirical check of the condition that rules out clusters formed by
/// repeated upcrossings.
///
/// For each window length `L`, `occurrences` non-overlapping windows are
/// taken, each starting at the next exceedance after the previous window
/// ends. Every exceedance `X_j > u` in a window is an upcrossing when
/// `X_{j-1} <= u` and a consecutive exceedance when `X_{j-1} > u` (the
/// predecessor may lie before the window; an exceedance at the very start of
/// the trace is neither). Both counts are divided by the number of
/// exceedances in the window; the ratios are averaged over windows, then
/// over lengths, and reported in percent.
pub fn d2_condition_check(
    values: &[f64],
    threshold: f64,
    lengths: &[usize],
    occurrences: usize,
) -> Result<D2Check> {
    if lengths.is_empty() || lengths.contains(&0) {
        return Err(invalid("lengths", "need at least one positive window length"));
    }
    if occurrences == 0 {
        return Err(invalid("occurrences", "must be positive"));
    }
    let exceeds: Vec<bool> = values.iter().map(|&x| x > threshold).collect();
    let total = exceeds.iter().filter(|&&e| e).count();
    if total == 0 {
        return Err(Error::TooFewExceedances {
            threshold,
            needed: 1,
            found: 0,
        });
    }

    let mut per_length = Vec::with_capacity(lengths.len());
    for &len in lengths {
        let (mut up_sum, mut cl_sum, mut windows) = (0.0, 0.0, 0usize);
        let mut pos = 0usize;
        while windows < occurrences {
            let Some(offset) = exceeds[pos..].iter().position(|&e| e) else { break };
            let start = pos + offset;
            if start + len > exceeds.len() {
                break;
            }
            let mut count = 0usize;
            let mut up = 0usize;
            let mut consecutive = 0usize;
            for j in (start..start + len).filter(|&j| exceeds[j]) {
                count += 1;
                match j.checked_sub(1).map(|i| exceeds[i]) {
                    Some(false) => up += 1,
                    Some(true) => consecutive += 1,
                    None => {}
                }
            }
            let count = count as f64;
            up_sum += up as f64 / count;
            cl_sum += consecutive as f64 / count;
            windows += 1;
            pos = start + len;
        }
        if windows < occurrences {
            return Err(Error::TooFewWindows {
                length: len,
                needed: occurrences,
                found: windows,
            });
        }
        per_length.push((
            len,
            100.0 * up_sum / windows as f64,
            100.0 * cl_sum / windows as f64,
        ));
    }
    let k = per_length.len() as f64;
    Ok(D2Check {
        threshold,
        r_up: per_length.iter().map(|p| p.1).sum::<f64>() / k,
        r_cluster: per_length.iter().map(|p| p.2).sum::<f64>() / k,
        per_length,
        occurrences,
    })
}

/// 1-based index of the first value above `threshold`; `None` if the trace
/// never gets there.
pub fn first_hitting_time(values: &[f64], threshold: f64) -> Option<usize> {
    values.iter().position(|&x| x > threshold).map(|i| i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats_of_small_trace() {
        let xs = [9.0, 9.0, 0.0, 9.0, 0.0, 0.0, 9.0, 9.0, 9.0];
        let s = ExceedanceStats::new(&xs, 5.0);
        assert_eq!(s.epochs, vec![1, 2, 4, 7, 8, 9]);
        assert_eq!(s.interexceedance, vec![1, 2, 3, 1, 1]);
        assert_eq!(s.cluster_sizes, vec![2, 1, 3]);
        assert_eq!(s.cluster_sizes.iter().sum::<usize>(), s.exceedances());
        // Upcrossings at 4 and 7; consecutive at 2, 8, 9.
        assert!((s.r_up - 200.0 / 6.0).abs() < 1e-12);
        assert!((s.r_cluster - 50.0).abs() < 1e-12);
    }

    #[test]
    fn cluster_distribution_by_counting() {
        let xs = [9.0, 9.0, 9.0, 0.0, 9.0, 0.0, 9.0, 9.0];
        let s = ExceedanceStats::new(&xs, 5.0);
        assert_eq!(s.cluster_sizes, vec![3, 1, 2]);
        let d = cluster_size_distribution(&s).unwrap();
        assert_eq!(d.pmf.len(), 3);
        for &(_, p) in &d.pmf {
            assert!((p - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!((d.mean - 2.0).abs() < 1e-12);
        let none = ExceedanceStats::new(&xs, 100.0);
        assert!(cluster_size_distribution(&none).is_err());
    }

    #[test]
    fn alternating_trace_violates_d2() {
        let xs: Vec<f64> = (0..10_000).map(|i| if i % 2 == 0 { 1.0 } else { 10.0 }).collect();
        let c = d2_condition_check(&xs, 5.0, &[5, 10, 15, 20], 100).unwrap();
        assert_eq!(c.r_up, 100.0);
        assert_eq!(c.r_cluster, 0.0);
    }

    #[test]
    fn d2_window_accounting() {
        // Window of 5 from the first exceedance: E E . E . -> 3 exceedances,
        // 2 upcrossings, 1 consecutive.
        let xs = [0.0, 9.0, 9.0, 0.0, 9.0, 0.0, 0.0];
        let c = d2_condition_check(&xs, 5.0, &[5], 1).unwrap();
        assert!((c.r_up - 200.0 / 3.0).abs() < 1e-12);
        assert!((c.r_cluster - 100.0 / 3.0).abs() < 1e-12);
        let ys = [9.0, 9.0, 9.0, 0.0, 0.0, 0.0];
        let c = d2_condition_check(&ys, 5.0, &[1, 2], 1).unwrap();
        // Length 1: window {0}, first sample of the trace: neither.
        assert_eq!((c.per_length[0].1, c.per_length[0].2), (0.0, 0.0));
        // Length 2: window {0, 1}: one consecutive out of two.
        assert_eq!((c.per_length[1].1, c.per_length[1].2), (0.0, 50.0));
        assert!(matches!(
            d2_condition_check(&xs, 5.0, &[5], 2),
            Err(Error::TooFewWindows { length: 5, needed: 2, found: 1 })
        ));
        assert!(d2_condition_check(&xs, 50.0, &[5], 1).is_err());
    }

    #[test]
    fn hitting_time() {
        assert_eq!(first_hitting_time(&[1.0, 2.0, 9.0], 5.0), Some(3));
        assert_eq!(first_hitting_time(&[1.0, 2.0], 5.0), None);
    }

    proptest::proptest! {
        #[test]
        fn ratios_and_partition(xs in proptest::collection::vec(0u32..10, 1..500), u in 0u32..10) {
            let v: Vec<f64> = xs.iter().map(|&x| f64::from(x)).collect();
            let s = ExceedanceStats::new(&v, f64::from(u));
            proptest::prop_assert!(s.r_up <= 100.0 && s.r_cluster <= 100.0);
            proptest::prop_assert_eq!(s.cluster_sizes.iter().sum::<usize>(), s.exceedances());
            proptest::prop_assert!(s.interexceedance.iter().all(|&t| t >= 1));
            if s.interexceedance.iter().all(|&t| t > 1) {
                proptest::prop_assert_eq!(s.r_cluster, 0.0);
            }
            if let Ok(d) = cluster_size_distribution(&s) {
                let total: f64 = d.pmf.iter().map(|&(j, p)| j as f64 * p * d.clusters as f64).sum();
                proptest::prop_assert!((total - s.exceedances() as f64).abs() < 1e-6);
            }
            if let Ok(c) = d2_condition_check(&v, f64::from(u), &[3, 6], 1) {
                proptest::prop_assert!(c.r_up <= 100.0 && c.r_cluster <= 100.0);
            }
        }
    }
}
