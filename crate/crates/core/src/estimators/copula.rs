//! Empirical copula of lagged pairs and the diagonal-slope EI estimator.

use serde::{Deserialize, Serialize};

use super::{EiEstimate, EstimateContext};
use crate::error::{invalid, Error, Result};

pub const DEFAULT_LAG: usize = 5;
pub const DEFAULT_GRID_POINTS: usize = 100;
pub const DEFAULT_TAIL_POINTS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCopula {
    pub lag: usize,
    /// Number of `(X_{kL}, X_{kL+1})` pairs.
    pub pairs: usize,
    pub grid: Vec<f64>,
    /// `C_n(u, u)` at each grid point.
    pub diagonal: Vec<f64>,
    /// Length of the trace the pairs were taken from.
    pub trace_len: usize,
}

/// Uniform grid `1/points, 2/points, ..., 1`.
pub fn uniform_grid(points: usize) -> Vec<f64> {
    (1..=points).map(|j| j as f64 / points as f64).collect()
}

/// Average (mid) ranks, 1-based.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = mid;
        }
        i = j + 1;
    }
    ranks
}

/// Diagonal of the empirical copula of `(X_{kL}, X_{kL+1})`, `k = 0, 1, ...`.
///
/// Ranks are taken separately within the first and second coordinates,
/// ties get their average rank, and a pair counts toward `C_n(u, u)` when
/// both scaled ranks `R / (n + 1)` are at most `u`. `grid` defaults to
/// [`uniform_grid`]`(100)`.
pub fn empirical_copula(values: &[f64], lag: usize, grid: Option<&[f64]>) -> Result<EmpiricalCopula> {
    if lag == 0 {
        return Err(invalid("lag", "must be at least 1"));
    }
    let needed = 2 * lag + 2;
    if values.len() < needed {
        return Err(Error::TraceTooShort {
            needed,
            got: values.len(),
        });
    }
    if values.iter().all(|&v| v == values[0]) {
        return Err(Error::ConstantTrace);
    }
    let grid: Vec<f64> = match grid {
        Some(g) => g.to_vec(),
        None => uniform_grid(DEFAULT_GRID_POINTS),
    };
    if grid.iter().any(|&u| !(0.0..=1.0).contains(&u)) {
        return Err(invalid("grid", "points must lie in [0, 1]"));
    }

    let firsts: Vec<f64> = (0..).map(|k| k * lag).take_while(|&i| i + 1 < values.len()).map(|i| values[i]).collect();
    let seconds: Vec<f64> = (0..firsts.len()).map(|k| values[k * lag + 1]).collect();
    let pairs = firsts.len();
    let rx = average_ranks(&firsts);
    let ry = average_ranks(&seconds);
    let scale = (pairs + 1) as f64;
    let mut joint: Vec<f64> = rx.iter().zip(&ry).map(|(a, b)| a.max(*b) / scale).collect();
    joint.sort_by(f64::total_cmp);
    let diagonal = grid
        .iter()
        .map(|&u| joint.partition_point(|&m| m <= u) as f64 / pairs as f64)
        .collect();
    Ok(EmpiricalCopula {
        lag,
        pairs,
        grid,
        diagonal,
        trace_len: values.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "fit", rename_all = "kebab-case")]
pub enum DiagonalFit {
    /// Least-squares line through the last `points` grid values.
    LeastSquaresTail { points: usize },
    /// End slope of a natural cubic spline through the whole grid.
    Spline,
}

impl Default for DiagonalFit {
    fn default() -> Self {
        DiagonalFit::LeastSquaresTail {
            points: DEFAULT_TAIL_POINTS,
        }
    }
}

/// `theta_hat = C_n'(1, 1) - 1`, clamped to `[0, 1]`.
pub fn ei_copula_estimator(cop: &EmpiricalCopula, fit: DiagonalFit) -> Result<EiEstimate> {
    let slope = diagonal_slope_at_one(&cop.grid, &cop.diagonal, fit)?;
    Ok(EiEstimate {
        theta_hat: (slope - 1.0).clamp(0.0, 1.0),
        n: cop.trace_len,
        context: EstimateContext::Copula {
            lag: cop.lag,
            fit,
            pairs: cop.pairs,
        },
    })
}

pub(crate) fn diagonal_slope_at_one(grid: &[f64], diag: &[f64], fit: DiagonalFit) -> Result<f64> {
    if grid.len() < 10 || grid.len() != diag.len() {
        return Err(invalid("grid", "need at least 10 diagonal points"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("grid", "must be strictly increasing"));
    }
    match fit {
        DiagonalFit::LeastSquaresTail { points } => {
            if points < 2 || points > grid.len() {
                return Err(invalid("points", format!("need 2..={} tail points", grid.len())));
            }
            let xs = &grid[grid.len() - points..];
            let ys = &diag[diag.len() - points..];
            least_squares_slope(xs, ys)
        }
        DiagonalFit::Spline => {
            if diag.iter().all(|&y| y == diag[0]) {
                return Err(Error::DegenerateFit("all diagonal values are equal".into()));
            }
            Ok(natural_spline_end_slope(grid, diag))
        }
    }
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("tail grid points coincide".into()));
    }
    if ys.iter().all(|&y| y == ys[0]) {
        return Err(Error::DegenerateFit("all tail values are equal".into()));
    }
    Ok(sxy / sxx)
}

/// Derivative at the last knot of the natural cubic spline through
/// `(xs, ys)`.
fn natural_spline_end_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() - 1;
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    // Tridiagonal system for the interior second derivatives m[1..n].
    let mut diag = vec![0.0; n + 1];
    let mut rhs = vec![0.0; n + 1];
    for i in 1..n {
        diag[i] = 2.0 * (h[i - 1] + h[i]);
        rhs[i] = 6.0 * ((ys[i + 1] - ys[i]) / h[i] - (ys[i] - ys[i - 1]) / h[i - 1]);
    }
    // Thomas algorithm; sub- and super-diagonals are h[i-1] and h[i].
    for i in 2..n {
        let w = h[i - 1] / diag[i - 1];
        diag[i] -= w * h[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    let mut m = vec![0.0; n + 1];
    for i in (1..n).rev() {
        m[i] = (rhs[i] - h[i] * m[i + 1]) / diag[i];
    }
    let last = n - 1;
    (ys[n] - ys[last]) / h[last] + h[last] * (m[last] + 2.0 * m[n]) / 6.0
}
