//! Intervals estimator of the extremal index from inter-exceedance times.

use serde::{Deserialize, Serialize};

use super::{EiEstimate, EstimateContext};
use crate::error::{invalid, Error, Result};

/// Maximum spread of estimates inside a plateau.
pub const DEFAULT_PLATEAU_SPREAD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalsBranch {
    /// `max T_i <= 2`: `2 (sum T)^2 / ((N-1) sum T^2)`.
    Plain,
    /// `max T_i > 2`: `2 (sum (T-1))^2 / ((N-1) sum (T-1)(T-2))`.
    BiasCorrected,
    /// Bias-corrected branch with a non-positive denominator; the plain
    /// formula was used instead.
    PlainFallback,
}

/// Intervals estimate from 1-based exceedance epochs `S_1 < ... < S_N`.
/// Returns `(theta_hat, branch)`.
pub fn intervals_from_epochs(epochs: &[usize]) -> Result<(f64, IntervalsBranch)> {
    if epochs.len() < 2 {
        return Err(Error::TooFewExceedances {
            threshold: f64::NAN,
            needed: 2,
            found: epochs.len(),
        });
    }
    let gaps: Vec<u64> = epochs.windows(2).map(|w| (w[1] - w[0]) as u64).collect();
    if gaps.contains(&0) {
        return Err(invalid("epochs", "must be strictly increasing"));
    }
    let pairs = (gaps.len()) as f64;
    let plain = || {
        let s: u64 = gaps.iter().sum();
        let s2: u64 = gaps.iter().map(|t| t * t).sum();
        2.0 * (s as f64).powi(2) / (pairs * s2 as f64)
    };
    let max_gap = *gaps.iter().max().unwrap();
    let (raw, branch) = if max_gap <= 2 {
        (plain(), IntervalsBranch::Plain)
    } else {
        let s: u64 = gaps.iter().map(|t| t - 1).sum();
        let s2: u64 = gaps.iter().map(|t| (t - 1) * t.saturating_sub(2)).sum();
        if s2 == 0 {
            (plain(), IntervalsBranch::PlainFallback)
        } else {
            (
                2.0 * (s as f64).powi(2) / (pairs * s2 as f64),
                IntervalsBranch::BiasCorrected,
            )
        }
    };
    Ok((raw.clamp(0.0, 1.0), branch))
}

fn exceedance_epochs(values: &[f64], threshold: f64) -> Vec<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > threshold)
        .map(|(i, _)| i + 1)
        .collect()
}

/// Intervals estimator at threshold `u` (exceedance means `X_i > u`).
pub fn intervals_estimator(values: &[f64], threshold: f64) -> Result<EiEstimate> {
    estimate_at(values, threshold, None)
}

fn estimate_at(values: &[f64], threshold: f64, level: Option<f64>) -> Result<EiEstimate> {
    let epochs = exceedance_epochs(values, threshold);
    if epochs.len() < 2 {
        return Err(Error::TooFewExceedances {
            threshold,
            needed: 2,
            found: epochs.len(),
        });
    }
    let (theta_hat, branch) = intervals_from_epochs(&epochs)?;
    Ok(EiEstimate {
        theta_hat,
        n: values.len(),
        context: EstimateContext::Intervals {
            threshold,
            quantile_level: level,
            exceedances: epochs.len(),
            branch,
        },
    })
}

/// Smallest sample value `x` with empirical CDF `F_n(x) >= level`.
pub fn empirical_quantile(sorted: &[f64], level: f64) -> f64 {
    let n = sorted.len();
    let k = ((level * n as f64).ceil() as usize).clamp(1, n);
    sorted[k - 1]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub level: f64,
    pub threshold: f64,
    pub estimate: std::result::Result<EiEstimate, String>,
}

impl SweepPoint {
    pub fn theta(&self) -> Option<f64> {
        self.estimate.as_ref().ok().map(|e| e.theta_hat)
    }
}

/// Longest run of consecutive sweep levels whose estimates differ by less
/// than the allowed spread.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plateau {
    pub first_level: f64,
    pub last_level: f64,
    pub levels: usize,
    /// Mean estimate over the run.
    pub value: f64,
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub points: Vec<SweepPoint>,
    pub plateau: Option<Plateau>,
}

/// Intervals estimates with thresholds at the empirical quantiles
/// `levels`. Per-level failures are kept inline.
pub fn intervals_sweep(values: &[f64], levels: &[f64]) -> Result<Sweep> {
    if values.is_empty() {
        return Err(Error::TraceTooShort { needed: 1, got: 0 });
    }
    if let Some(&bad) = levels.iter().find(|&&d| !(d > 0.0 && d < 1.0)) {
        return Err(invalid("levels", format!("quantile level {bad} outside (0, 1)")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let points: Vec<SweepPoint> = levels
        .iter()
        .map(|&level| {
            let threshold = empirical_quantile(&sorted, level);
            SweepPoint {
                level,
                threshold,
                estimate: estimate_at(values, threshold, Some(level)).map_err(|e| e.to_string()),
            }
        })
        .collect();
    let plateau = find_plateau(&points, DEFAULT_PLATEAU_SPREAD);
    Ok(Sweep { points, plateau })
}

/// Longest run (earliest on ties) of successful consecutive points with
/// `max - min < spread`.
pub(crate) fn find_plateau(points: &[SweepPoint], spread: f64) -> Option<Plateau> {
    let mut best: Option<(usize, usize)> = None;
    for start in 0..points.len() {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut end = start;
        while end < points.len() {
            let Some(t) = points[end].theta() else { break };
            let (nlo, nhi) = (lo.min(t), hi.max(t));
            if nhi - nlo >= spread {
                break;
            }
            lo = nlo;
            hi = nhi;
            end += 1;
        }
        if end > start && best.is_none_or(|(s, e)| end - start > e - s) {
            best = Some((start, end));
        }
    }
    best.map(|(s, e)| {
        let run: Vec<f64> = points[s..e].iter().filter_map(SweepPoint::theta).collect();
        let lo = run.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = run.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Plateau {
            first_level: points[s].level,
            last_level: points[e - 1].level,
            levels: e - s,
            value: run.iter().sum::<f64>() / run.len() as f64,
            spread: hi - lo,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn consecutive_epochs_clamp_to_one() {
        // T = {1,1,1}: 2 * 3^2 / (3 * 3) = 2, clamped.
        let (t, b) = intervals_from_epochs(&[1, 2, 3, 4]).unwrap();
        assert_eq!(t, 1.0);
        assert_eq!(b, IntervalsBranch::Plain);
    }

    #[test]
    fn bias_corrected_branch_by_hand() {
        // T = {1,1,7,1,9}: 2 * 14^2 / (5 * 86).
        let (t, b) = intervals_from_epochs(&[1, 2, 3, 10, 11, 20]).unwrap();
        assert!((t - 392.0 / 430.0).abs() < 1e-12);
        assert_eq!(b, IntervalsBranch::BiasCorrected);
    }

    #[test]
    fn plain_branch_always_clamps() {
        // With every gap in {1, 2}, (sum T)^2 / ((N-1) sum T^2) >= 8/9, so
        // the plain formula never drops below 16/9.
        let mut e: Vec<usize> = (1..=10).collect();
        e.push(12);
        let (t, b) = intervals_from_epochs(&e).unwrap();
        assert_eq!(b, IntervalsBranch::Plain);
        assert_eq!(t, 1.0);
    }

    #[test]
    fn needs_two_exceedances() {
        assert!(matches!(
            intervals_estimator(&[1.0, 5.0, 1.0], 3.0),
            Err(Error::TooFewExceedances { found: 1, .. })
        ));
        assert!(intervals_from_epochs(&[3, 3]).is_err());
    }

    #[test]
    fn estimator_reports_context() {
        let mut xs = vec![0.0; 16];
        for i in [0, 1, 2, 3, 13] {
            xs[i] = 9.0;
        }
        let e = intervals_estimator(&xs, 5.0).unwrap();
        match e.context {
            EstimateContext::Intervals { exceedances, branch, .. } => {
                assert_eq!(exceedances, 5);
                assert_eq!(branch, IntervalsBranch::BiasCorrected);
            }
            _ => unreachable!(),
        }
        // T = {1, 1, 1, 10}: 2 * 9^2 / (4 * 72).
        assert!((e.theta_hat - 162.0 / 288.0).abs() < 1e-12);
        assert_eq!(e.n, 16);
    }

    #[test]
    fn quantile_definition() {
        let s = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0];
        assert_eq!(empirical_quantile(&s, 0.9), 9.0);
        assert_eq!(empirical_quantile(&s, 0.91), 10.0);
        assert_eq!(empirical_quantile(&s, 0.05), 1.0);
    }

    fn point(level: f64, t: Option<f64>) -> SweepPoint {
        SweepPoint {
            level,
            threshold: 0.0,
            estimate: match t {
                Some(t) => Ok(EiEstimate {
                    theta_hat: t,
                    n: 0,
                    context: EstimateContext::Intervals {
                        threshold: 0.0,
                        quantile_level: Some(level),
                        exceedances: 2,
                        branch: IntervalsBranch::Plain,
                    },
                }),
                None => Err("too few".into()),
            },
        }
    }

    #[test]
    fn plateau_picks_longest_stable_run() {
        let pts = vec![
            point(0.90, Some(0.9)),
            point(0.91, Some(0.6)),
            point(0.92, Some(0.62)),
            point(0.93, Some(0.58)),
            point(0.94, None),
            point(0.95, Some(0.3)),
            point(0.96, Some(0.31)),
        ];
        let p = find_plateau(&pts, 0.05).unwrap();
        assert_eq!((p.first_level, p.last_level, p.levels), (0.91, 0.93, 3));
        assert!((p.value - 0.6).abs() < 1e-12);
        assert!((p.spread - 0.04).abs() < 1e-12);
        assert!(find_plateau(&[point(0.9, None)], 0.05).is_none());
    }

    #[test]
    fn sweep_rejects_bad_levels() {
        assert!(intervals_sweep(&[1.0, 2.0], &[1.0]).is_err());
        let s = intervals_sweep(&[1.0, 2.0, 3.0], &[0.99]).unwrap();
        assert!(s.points[0].estimate.is_err());
        assert!(s.plateau.is_none());
    }

    proptest::proptest! {
        #[test]
        fn estimate_in_unit_interval_and_shift_invariant(
            xs in proptest::collection::vec(0u32..50, 10..300),
            u in 0u32..50,
            shift in -100i32..100,
        ) {
            let a: Vec<f64> = xs.iter().map(|&x| f64::from(x)).collect();
            let b: Vec<f64> = a.iter().map(|&x| x + f64::from(shift)).collect();
            let ea = intervals_estimator(&a, f64::from(u));
            let eb = intervals_estimator(&b, f64::from(u) + f64::from(shift));
            match (ea, eb) {
                (Ok(ea), Ok(eb)) => {
                    proptest::prop_assert!((0.0..=1.0).contains(&ea.theta_hat));
                    proptest::prop_assert_eq!(ea.theta_hat, eb.theta_hat);
                }
                (Err(_), Err(_)) => {}
                _ => proptest::prop_assert!(false, "shift changed feasibility"),
            }
        }
    }
}
