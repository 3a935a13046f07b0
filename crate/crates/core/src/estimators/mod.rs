//! Extremal-index estimators for a stationary trace, plus exceedance and
//! cluster statistics.

mod copula;
mod exceedance;
mod intervals;

pub use copula::{
    ei_copula_estimator, empirical_copula, uniform_grid, DiagonalFit, EmpiricalCopula, DEFAULT_GRID_POINTS,
    DEFAULT_LAG, DEFAULT_TAIL_POINTS,
};
pub use exceedance::{
    cluster_size_distribution, d2_condition_check, first_hitting_time, ClusterSizeDistribution,
    D2Check, ExceedanceStats, DEFAULT_D2_LENGTHS, DEFAULT_D2_OCCURRENCES,
};
pub use intervals::{
    empirical_quantile, intervals_estimator, intervals_from_epochs, intervals_sweep,
    IntervalsBranch, Plateau, Sweep, SweepPoint, DEFAULT_PLATEAU_SPREAD,
};

use serde::{Deserialize, Serialize};

/// Default threshold quantile for single-number summaries.
pub const DEFAULT_QUANTILE: f64 = 0.97;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum EstimateContext {
    Copula {
        lag: usize,
        fit: DiagonalFit,
        pairs: usize,
    },
    Intervals {
        threshold: f64,
        /// Quantile level the threshold was taken at, when known.
        quantile_level: Option<f64>,
        exceedances: usize,
        branch: IntervalsBranch,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EiEstimate {
    /// Clamped to `[0, 1]`.
    pub theta_hat: f64,
    /// Length of the trace the estimate was computed from.
    pub n: usize,
    pub context: EstimateContext,
}

impl EiEstimate {
    pub fn method(&self) -> &'static str {
        match self.context {
            EstimateContext::Copula { .. } => "copula",
            EstimateContext::Intervals { .. } => "intervals",
        }
    }
}
