//! Bivariate Pareto model for the degrees at the two ends of an edge.
//!
//! The joint tail of the end-point degrees is
//! `P(D1 >= d1, D2 >= d2) = (1 + (d1 - mu)/sigma + (d2 - mu)/sigma)^-gamma`
//! for `d1, d2 >= mu`. Its marginal is the degree density of a node reached by
//! following a random edge; node degrees follow `f_d(d) = f(d) E[D] / d`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A symmetric joint density of neighbour degrees, as used by the
/// Metropolis rewiring step.
pub trait JointDegreeDensity {
    /// Natural log of the joint density at the (integer) degree pair.
    fn ln_joint_density(&self, d1: f64, d2: f64) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointDegreeModel {
    pub mu: f64,
    pub sigma: f64,
    pub gamma: f64,
}

impl JointDegreeModel {
    pub fn new(mu: f64, sigma: f64, gamma: f64) -> Result<Self> {
        if !(mu.is_finite() && mu >= 1.0) {
            return Err(invalid("mu", format!("must be finite and >= 1, got {mu}")));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(invalid("sigma", format!("must be positive, got {sigma}")));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(invalid("gamma", format!("must be positive, got {gamma}")));
        }
        Ok(JointDegreeModel { mu, sigma, gamma })
    }

    #[inline]
    fn base(&self, d1: f64, d2: f64) -> f64 {
        1.0 + (d1 - self.mu) / self.sigma + (d2 - self.mu) / self.sigma
    }

    /// `P(D1 >= d1, D2 >= d2)`; arguments below `mu` are treated as `mu`.
    pub fn joint_tail(&self, d1: f64, d2: f64) -> f64 {
        self.base(d1.max(self.mu), d2.max(self.mu)).powf(-self.gamma)
    }

    /// Mixed partial derivative of the joint tail; zero outside the support.
    pub fn joint_density(&self, d1: f64, d2: f64) -> f64 {
        if d1 < self.mu || d2 < self.mu {
            return 0.0;
        }
        let g = self.gamma;
        g * (g + 1.0) / (self.sigma * self.sigma) * self.base(d1, d2).powf(-g - 2.0)
    }

    /// Degree density at the end of a uniformly chosen edge.
    pub fn edge_density(&self, d: f64) -> f64 {
        if d < self.mu {
            return 0.0;
        }
        self.gamma / self.sigma * (1.0 + (d - self.mu) / self.sigma).powf(-self.gamma - 1.0)
    }

    pub fn edge_tail(&self, d: f64) -> f64 {
        if d <= self.mu {
            return 1.0;
        }
        (1.0 + (d - self.mu) / self.sigma).powf(-self.gamma)
    }

    /// Inverse of [`edge_tail`](Self::edge_tail): the degree whose tail
    /// probability is `t`.
    pub fn edge_tail_inverse(&self, t: f64) -> f64 {
        self.mu + self.sigma * (t.powf(-1.0 / self.gamma) - 1.0)
    }

    /// `E[D] = [∫∫ f(d1, d2) / d1]^-1`. The inner integral is the edge
    /// marginal; the outer one is taken in tail-probability coordinates
    /// where the integrand is bounded by `1/mu`.
    pub fn mean_degree(&self) -> Result<f64> {
        let inv = self.integrate_inverse_degree(1.0)?;
        if !(inv.is_finite() && inv > 0.0) {
            return Err(Error::Integration(format!(
                "inverse-degree integral is {inv}"
            )));
        }
        Ok(1.0 / inv)
    }

    /// `∫_{d(t) : t <= upper} f(d)/d dd`, i.e. `E[1/D; F̄(D) <= upper]` for
    /// the edge marginal.
    fn integrate_inverse_degree(&self, upper: f64) -> Result<f64> {
        if upper <= 0.0 {
            return Ok(0.0);
        }
        let integrand = |t: f64| {
            if t <= 0.0 {
                0.0
            } else {
                1.0 / self.edge_tail_inverse(t)
            }
        };
        let target = 1e-13 * upper / self.mu;
        let out = quadrature::integrate(integrand, 0.0, upper, target);
        if !out.integral.is_finite() || out.error_estimate > 1e-6 * out.integral.abs() {
            return Err(Error::Integration(format!(
                "integral {} with error estimate {}",
                out.integral, out.error_estimate
            )));
        }
        Ok(out.integral)
    }

    pub fn marginals(&self) -> Result<DegreeModelMarginals> {
        Ok(DegreeModelMarginals {
            model: *self,
            mean_degree: self.mean_degree()?,
        })
    }
}

impl JointDegreeDensity for JointDegreeModel {
    /// Degrees below `mu` (which simplification can produce) are evaluated
    /// at `mu`.
    fn ln_joint_density(&self, d1: f64, d2: f64) -> f64 {
        let g = self.gamma;
        (g * (g + 1.0) / (self.sigma * self.sigma)).ln()
            - (g + 2.0) * self.base(d1.max(self.mu), d2.max(self.mu)).ln()
    }
}

/// Edge and node marginals of a [`JointDegreeModel`], with its mean degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeModelMarginals {
    pub model: JointDegreeModel,
    pub mean_degree: f64,
}

impl DegreeModelMarginals {
    pub fn edge_density(&self, d: f64) -> f64 {
        self.model.edge_density(d)
    }

    pub fn edge_tail(&self, d: f64) -> f64 {
        self.model.edge_tail(d)
    }

    /// `f_d(d) = f(d) E[D] / d`.
    pub fn node_density(&self, d: f64) -> f64 {
        self.model.edge_density(d) * self.mean_degree / d
    }

    /// `P(D > d)` for a uniformly chosen node.
    pub fn node_tail(&self, d: f64) -> f64 {
        if d <= self.model.mu {
            return 1.0;
        }
        let upper = self.model.edge_tail(d);
        let v = self
            .model
            .integrate_inverse_degree(upper)
            .expect("integrand is bounded on a valid model");
        (self.mean_degree * v).clamp(0.0, 1.0)
    }

    /// Conditional density of the next degree for a random walk currently
    /// at degree `d_t`: `E[D] f(d_t, d_next) / (d_t f_d(d_t))`.
    pub fn rw_kernel(&self, d_t: f64, d_next: f64) -> f64 {
        let denom = d_t * self.node_density(d_t);
        if denom <= 0.0 {
            return 0.0;
        }
        self.mean_degree * self.model.joint_density(d_t, d_next) / denom
    }

    /// PageRank kernel: RW step with probability `c`, uniform node otherwise.
    pub fn pr_kernel(&self, c: f64, d_t: f64, d_next: f64) -> f64 {
        c * self.rw_kernel(d_t, d_next) + (1.0 - c) * self.node_density(d_next)
    }

    /// Random walk with jumps of weight `alpha`.
    pub fn rwj_kernel(&self, alpha: f64, d_t: f64, d_next: f64) -> f64 {
        let fd_t = self.node_density(d_t);
        let denom = (d_t + alpha) * fd_t;
        if denom <= 0.0 {
            return 0.0;
        }
        (self.mean_degree * self.model.joint_density(d_t, d_next)
            + alpha * fd_t * self.node_density(d_next))
            / denom
    }

    /// Stationary degree density of the random walk with jumps,
    /// `(d + alpha) f_d(d) / (E[D] + alpha)`.
    pub fn rwj_stationary_density(&self, alpha: f64, d: f64) -> f64 {
        (d + alpha) * self.node_density(d) / (self.mean_degree + alpha)
    }

    /// Tail of [`rwj_stationary_density`](Self::rwj_stationary_density).
    pub fn rwj_stationary_tail(&self, alpha: f64, d: f64) -> f64 {
        let e = self.mean_degree;
        (e * self.edge_tail(d) + alpha * self.node_tail(d)) / (e + alpha)
    }
}

/// Tabulated node-degree CDF for inverse-transform sampling.
///
/// The grid is log-spaced from `mu` up to the `1 - 1e-7` quantile; draws
/// past the last grid point are inverted by bisection on the exact tail.
#[derive(Debug, Clone)]
pub struct NodeDegreeTable {
    marginals: DegreeModelMarginals,
    degrees: Vec<f64>,
    cdf: Vec<f64>,
}

const TABLE_POINTS: usize = 4096;
const TABLE_TAIL_MASS: f64 = 1e-7;

impl NodeDegreeTable {
    pub fn new(marginals: DegreeModelMarginals) -> Self {
        let mu = marginals.model.mu;
        let mut top = 2.0 * mu;
        while marginals.node_tail(top) > TABLE_TAIL_MASS {
            top *= 2.0;
        }
        // Shrink to the quantile by bisection on a log scale.
        let (mut lo, mut hi) = (top / 2.0, top);
        for _ in 0..60 {
            let mid = (lo * hi).sqrt();
            if marginals.node_tail(mid) > TABLE_TAIL_MASS {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let ratio = (hi / mu).ln();
        let degrees: Vec<f64> = (0..TABLE_POINTS)
            .map(|k| mu * (ratio * k as f64 / (TABLE_POINTS - 1) as f64).exp())
            .collect();
        let mut cdf: Vec<f64> = degrees.iter().map(|&d| 1.0 - marginals.node_tail(d)).collect();
        cdf[0] = 0.0;
        // Quadrature noise must not break monotonicity.
        for k in 1..cdf.len() {
            if cdf[k] < cdf[k - 1] {
                cdf[k] = cdf[k - 1];
            }
        }
        NodeDegreeTable {
            marginals,
            degrees,
            cdf,
        }
    }

    pub fn marginals(&self) -> &DegreeModelMarginals {
        &self.marginals
    }

    /// Continuous node degree with CDF value `p` in `[0, 1)`.
    pub fn quantile(&self, p: f64) -> f64 {
        let last = *self.cdf.last().unwrap();
        if p >= last {
            return self.tail_quantile(1.0 - p);
        }
        // First index with cdf > p.
        let hi = self.cdf.partition_point(|&c| c <= p).max(1);
        let lo = hi - 1;
        let (c0, c1) = (self.cdf[lo], self.cdf[hi]);
        let (d0, d1) = (self.degrees[lo], self.degrees[hi]);
        if c1 <= c0 {
            return d0;
        }
        d0 + (d1 - d0) * (p - c0) / (c1 - c0)
    }

    fn tail_quantile(&self, tail: f64) -> f64 {
        let tail = tail.max(f64::MIN_POSITIVE);
        let mut lo = *self.degrees.last().unwrap();
        let mut hi = lo * 2.0;
        while self.marginals.node_tail(hi) > tail && hi < 1e300 {
            lo = hi;
            hi *= 2.0;
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.marginals.node_tail(mid) > tail {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Largest tabulated degree (the `1 - 1e-7` quantile).
    pub fn upper_degree(&self) -> f64 {
        *self.degrees.last().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> JointDegreeModel {
        JointDegreeModel::new(10.0, 15.0, 1.2).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(JointDegreeModel::new(0.5, 15.0, 1.2).is_err());
        assert!(JointDegreeModel::new(10.0, 0.0, 1.2).is_err());
        assert!(JointDegreeModel::new(10.0, 15.0, -1.0).is_err());
        assert!(JointDegreeModel::new(10.0, 15.0, f64::NAN).is_err());
    }

    #[test]
    fn mean_degree_of_reference_model() {
        let e = reference().mean_degree().unwrap();
        assert!((e - 21.0052).abs() < 0.01, "E[D] = {e}");
    }

    #[test]
    fn mean_degree_collapses_to_mu_for_huge_gamma() {
        let e = JointDegreeModel::new(10.0, 15.0, 1e4).unwrap().mean_degree().unwrap();
        assert!((e - 10.0).abs() < 0.01, "E[D] = {e}");
    }

    #[test]
    fn joint_tail_corner_and_symmetry() {
        let m = reference();
        assert_eq!(m.joint_tail(10.0, 10.0), 1.0);
        assert_eq!(m.joint_tail(12.0, 40.0), m.joint_tail(40.0, 12.0));
        assert!(m.joint_tail(20.0, 30.0) >= m.joint_tail(21.0, 30.0));
        assert_eq!(m.edge_tail(30.0), m.joint_tail(30.0, 10.0));
    }

    #[test]
    fn joint_density_integrates_to_edge_density() {
        let m = reference();
        let d1 = 27.0;
        let out = quadrature::integrate(|d2| m.joint_density(d1, d2), 10.0, 1e7, 1e-12);
        let rel = (out.integral - m.edge_density(d1)).abs() / m.edge_density(d1);
        assert!(rel < 1e-4, "rel error {rel}");
    }

    #[test]
    fn node_density_is_normalised() {
        let marg = reference().marginals().unwrap();
        let out = quadrature::integrate(|d| marg.node_density(d), 10.0, 1e9, 1e-12);
        assert!((out.integral - 1.0).abs() < 1e-4, "{}", out.integral);
        assert_eq!(marg.node_tail(10.0), 1.0);
    }

    #[test]
    fn rw_kernel_rows_integrate_to_one() {
        let marg = reference().marginals().unwrap();
        for &d in &[10.0, 30.0, 200.0] {
            let out = quadrature::integrate(|x| marg.rw_kernel(d, x), 10.0, 1e9, 1e-12);
            assert!((out.integral - 1.0).abs() < 1e-4, "row {d}: {}", out.integral);
            let out = quadrature::integrate(|x| marg.rwj_kernel(21.0, d, x), 10.0, 1e9, 1e-12);
            assert!((out.integral - 1.0).abs() < 1e-4, "rwj row {d}: {}", out.integral);
        }
    }

    #[test]
    fn table_quantiles_invert_the_tail() {
        let table = NodeDegreeTable::new(reference().marginals().unwrap());
        let marg = table.marginals();
        for &p in &[0.01, 0.3, 0.5, 0.9, 0.999, 0.9999999, 0.99999999] {
            let d = table.quantile(p);
            let got = 1.0 - marg.node_tail(d);
            assert!((got - p).abs() < 1e-5 * (1.0 - p).max(1e-3), "p={p} d={d} got={got}");
        }
        assert_eq!(table.quantile(0.0), 10.0);
        assert!((marg.node_tail(table.upper_degree()) - 1e-7).abs() < 1e-9);
    }
}
