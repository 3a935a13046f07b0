//! Closed-form extremal-index values and the extreme-value applications
//! built on them (maxima quantiles, largest degree, hitting time, cluster
//! size).

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::JointDegreeModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoryMethod {
    RwPareto,
    RwjPareto,
    PrLowerBound,
    Archimedean,
    CopulaDerivative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EiTheoryResult {
    pub theta: f64,
    pub method: TheoryMethod,
    /// Named inputs, e.g. `[("gamma", 1.2)]`.
    pub parameters: Vec<(String, f64)>,
}

impl EiTheoryResult {
    fn new(theta: f64, method: TheoryMethod, parameters: &[(&str, f64)]) -> Self {
        EiTheoryResult {
            theta: theta.clamp(0.0, 1.0),
            method,
            parameters: parameters.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        }
    }
}

fn positive(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && !x.is_nan() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be positive, got {x}")))
    }
}

fn unit_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta <= 1.0 {
        Ok(())
    } else {
        Err(invalid("theta", format!("must lie in (0, 1], got {theta}")))
    }
}

/// EI of the random-walk degree sequence under the bivariate Pareto
/// model: `1 - 2^-gamma`.
pub fn ei_rw_pareto(gamma: f64) -> Result<EiTheoryResult> {
    positive("gamma", gamma)?;
    Ok(EiTheoryResult::new(
        1.0 - (-gamma).exp2(),
        TheoryMethod::RwPareto,
        &[("gamma", gamma)],
    ))
}

/// EI of the random walk with jumps:
/// `1 - E[D] / (E[D] + alpha) * 2^-gamma`.
pub fn ei_rwj_pareto(gamma: f64, alpha: f64, mean_degree: f64) -> Result<EiTheoryResult> {
    positive("gamma", gamma)?;
    positive("mean_degree", mean_degree)?;
    if alpha.is_nan() || alpha < 0.0 {
        return Err(invalid("alpha", format!("must be >= 0, got {alpha}")));
    }
    let weight = if alpha.is_infinite() {
        0.0
    } else {
        mean_degree / (mean_degree + alpha)
    };
    Ok(EiTheoryResult::new(
        1.0 - weight * (-gamma).exp2(),
        TheoryMethod::RwjPareto,
        &[("gamma", gamma), ("alpha", alpha), ("mean_degree", mean_degree)],
    ))
}

/// Lower bound `1 - c` on the EI of any PageRank degree sequence.
pub fn ei_pr_lower_bound(c: f64) -> Result<EiTheoryResult> {
    if !(0.0..=1.0).contains(&c) {
        return Err(invalid("c", format!("must lie in [0, 1], got {c}")));
    }
    Ok(EiTheoryResult::new(1.0 - c, TheoryMethod::PrLowerBound, &[("c", c)]))
}

/// EI of a sequence whose survival copula is Archimedean with a regularly
/// varying generator of index `-beta`: `1 - 2^-beta`.
pub fn ei_archimedean(beta: f64) -> Result<EiTheoryResult> {
    positive("beta", beta)?;
    Ok(EiTheoryResult::new(
        1.0 - (-beta).exp2(),
        TheoryMethod::Archimedean,
        &[("beta", beta)],
    ))
}

/// Diagonal `C(u, u)` of the copula of consecutive RW degrees under the
/// continuous bivariate Pareto model.
pub fn theoretical_copula_diag(u: f64, gamma: f64) -> Result<f64> {
    positive("gamma", gamma)?;
    if !(0.0..=1.0).contains(&u) {
        return Err(invalid("u", format!("must lie in [0, 1], got {u}")));
    }
    if u == 1.0 {
        return Ok(1.0);
    }
    let survival = (1.0 + 2.0 * ((1.0 - u).powf(-1.0 / gamma) - 1.0)).powf(-gamma);
    Ok((survival + 2.0 * u - 1.0).clamp((2.0 * u - 1.0).max(0.0), u))
}

/// `C'(1,1) - 1` from a one-sided finite difference of
/// [`theoretical_copula_diag`] with step `1e-7`.
pub fn ei_copula_derivative(gamma: f64) -> Result<EiTheoryResult> {
    const H: f64 = 1e-7;
    let slope = (1.0 - theoretical_copula_diag(1.0 - H, gamma)?) / H;
    Ok(EiTheoryResult::new(
        slope - 1.0,
        TheoryMethod::CopulaDerivative,
        &[("gamma", gamma), ("step", H)],
    ))
}

fn check_quantile_args(n: f64, theta: f64, eta: f64) -> Result<()> {
    if n.is_nan() || n < 1.0 {
        return Err(invalid("n", format!("must be >= 1, got {n}")));
    }
    unit_theta(theta)?;
    if !(eta > 0.0 && eta < 1.0) {
        return Err(invalid("eta", format!("must lie in (0, 1), got {eta}")));
    }
    Ok(())
}

/// `(1 - eta)` quantile of the maximum of `n` samples with extremal index
/// `theta`: `F^-1((1 - eta)^(1 / (n theta)))`.
pub fn maxima_quantile<F: Fn(f64) -> f64>(
    marginal_inverse: F,
    n: f64,
    theta: f64,
    eta: f64,
) -> Result<f64> {
    check_quantile_args(n, theta, eta)?;
    Ok(marginal_inverse(((-eta).ln_1p() / (n * theta)).exp()))
}

/// [`maxima_quantile`] for the Pareto edge marginal of `model`:
/// `mu + sigma ((1 - (1 - eta)^(1/(n theta)))^(-1/gamma) - 1)`.
pub fn maxima_quantile_pareto(
    model: &JointDegreeModel,
    n: f64,
    theta: f64,
    eta: f64,
) -> Result<f64> {
    check_quantile_args(n, theta, eta)?;
    let tail = -((-eta).ln_1p() / (n * theta)).exp_m1();
    Ok(model.mu + model.sigma * (tail.powf(-1.0 / model.gamma) - 1.0))
}

/// Median-based estimate of the largest of `n` values with Pareto tail
/// `C x^-delta` and extremal index `theta`:
/// `(n theta)^(1/delta) (C / ln 2)^(1/delta)`.
pub fn largest_degree_estimate(c_coeff: f64, delta: f64, n: f64, theta: f64) -> Result<f64> {
    positive("c_coeff", c_coeff)?;
    positive("delta", delta)?;
    if n.is_nan() || n < 1.0 {
        return Err(invalid("n", format!("must be >= 1, got {n}")));
    }
    unit_theta(theta)?;
    Ok((n * theta * c_coeff / std::f64::consts::LN_2).powf(1.0 / delta))
}

/// Largest degree of `n` i.i.d. Pareto degrees with tail index `delta`,
/// `K n^(1/delta)`.
pub fn iid_largest_degree(k: f64, n: f64, delta: f64) -> Result<f64> {
    positive("k", k)?;
    positive("delta", delta)?;
    if n.is_nan() || n < 1.0 {
        return Err(invalid("n", format!("must be >= 1, got {n}")));
    }
    Ok(k * n.powf(1.0 / delta))
}

/// Limit of `E[T_n / n]` for the first hitting time of the level with
/// `n (1 - F(u_n)) -> tau`: `1 / (theta tau)`.
pub fn expected_hitting_fraction(theta: f64, tau: f64) -> Result<f64> {
    unit_theta(theta)?;
    positive("tau", tau)?;
    Ok(1.0 / (theta * tau))
}

/// Limiting mean size of a cluster of exceedances, `1 / theta`.
pub fn mean_cluster_size(theta: f64) -> Result<f64> {
    unit_theta(theta)?;
    Ok(1.0 / theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rw_values() {
        assert_eq!(ei_rw_pareto(1.0).unwrap().theta, 0.5);
        let t = ei_rw_pareto(1.2).unwrap().theta;
        assert!((t - 0.564_724_718_351_937_9).abs() < 1e-12);
        assert!(ei_rw_pareto(1e-9).unwrap().theta < 1e-8);
        assert_eq!(ei_rw_pareto(200.0).unwrap().theta, 1.0);
        assert!(ei_rw_pareto(0.0).is_err());
        assert!(ei_rw_pareto(-1.0).is_err());
    }

    #[test]
    fn rwj_values() {
        let e = 21.0052;
        assert_eq!(
            ei_rwj_pareto(1.2, 0.0, e).unwrap().theta,
            ei_rw_pareto(1.2).unwrap().theta
        );
        assert_eq!(ei_rwj_pareto(1.2, f64::INFINITY, e).unwrap().theta, 1.0);
        // 1 - (21.0052 / 42.0052) * 2^-1.2, evaluated by hand.
        let t = ei_rwj_pareto(1.2, 21.0, e).unwrap().theta;
        assert!((t - 0.782_335_416_9).abs() < 1e-9, "{t}");
        assert!(ei_rwj_pareto(1.2, -1.0, e).is_err());
        assert!(ei_rwj_pareto(1.2, 1.0, 0.0).is_err());
    }

    #[test]
    fn pr_and_archimedean() {
        assert_eq!(ei_pr_lower_bound(0.0).unwrap().theta, 1.0);
        assert_eq!(ei_pr_lower_bound(1.0).unwrap().theta, 0.0);
        assert!((ei_pr_lower_bound(0.85).unwrap().theta - 0.15).abs() < 1e-15);
        assert!(ei_pr_lower_bound(1.1).is_err());
        assert_eq!(ei_archimedean(1.0).unwrap().theta, 0.5);
        assert_eq!(ei_archimedean(2.0).unwrap().theta, 0.75);
        assert_eq!(
            ei_archimedean(1.2).unwrap().theta,
            ei_rw_pareto(1.2).unwrap().theta
        );
    }

    #[test]
    fn copula_diag_boundaries() {
        assert_eq!(theoretical_copula_diag(0.0, 1.2).unwrap(), 0.0);
        assert_eq!(theoretical_copula_diag(1.0, 1.2).unwrap(), 1.0);
        assert!(theoretical_copula_diag(1.1, 1.2).is_err());
        assert!(theoretical_copula_diag(0.5, 0.0).is_err());
    }

    #[test]
    fn copula_diag_matches_joint_law() {
        // P(D1 <= q, D2 <= q) = 1 - 2 F̄(q) + F̄(q, q) from the joint tail,
        // with q the 0.9 quantile of the edge marginal.
        let m = JointDegreeModel::new(10.0, 15.0, 1.2).unwrap();
        let u: f64 = 0.9;
        let q = m.mu + m.sigma * ((1.0 - u).powf(-1.0 / m.gamma) - 1.0);
        assert!((m.edge_tail(q) - 0.1).abs() < 1e-12);
        let joint = 1.0 - 2.0 * m.edge_tail(q) + m.joint_tail(q, q);
        let closed = theoretical_copula_diag(u, 1.2).unwrap();
        assert!((joint - closed).abs() < 1e-9, "{joint} vs {closed}");
    }

    #[test]
    fn copula_derivative_recovers_ei() {
        for &g in &[0.5, 1.0, 1.2, 2.0] {
            let d = ei_copula_derivative(g).unwrap().theta;
            let t = ei_rw_pareto(g).unwrap().theta;
            assert!((d - t).abs() < 1e-3, "gamma {g}: {d} vs {t}");
        }
    }

    #[test]
    fn maxima_quantile_cases() {
        let m = JointDegreeModel::new(10.0, 15.0, 1.2).unwrap();
        let inv = |p: f64| m.edge_tail_inverse(1.0 - p);
        let plain = maxima_quantile(inv, 1.0, 1.0, 0.1).unwrap();
        assert!((plain - inv(0.9)).abs() < 1e-9);
        let a = maxima_quantile_pareto(&m, 2000.0, 0.25, 0.1).unwrap();
        let b = maxima_quantile_pareto(&m, 1000.0, 0.5, 0.1).unwrap();
        assert!((a - b).abs() < 1e-9 * a);
        // Direct evaluation: tail = 1 - 0.9^(1/5647.247...).
        let nt: f64 = 1e4 * 0.5647;
        let tail = 1.0 - 0.9f64.powf(1.0 / nt);
        let direct = 10.0 + 15.0 * (tail.powf(-1.0 / 1.2) - 1.0);
        let got = maxima_quantile_pareto(&m, 1e4, 0.5647, 0.1).unwrap();
        assert!((got - direct).abs() < 1e-6 * direct, "{got} vs {direct}");
        assert!((got - maxima_quantile(inv, 1e4, 0.5647, 0.1).unwrap()).abs() < 1e-6 * got);
        assert!(maxima_quantile_pareto(&m, 10.0, 0.0, 0.1).is_err());
        assert!(maxima_quantile_pareto(&m, 10.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn largest_degree_identity() {
        let m = largest_degree_estimate(std::f64::consts::LN_2, 1.0, 12345.0, 1.0).unwrap();
        assert!((m - 12345.0).abs() < 1e-6);
        assert!(largest_degree_estimate(1.0, 1.0, 10.0, 0.0).is_err());
        assert!(iid_largest_degree(1.0, 10.0, 0.0).is_err());
    }

    #[test]
    fn hitting_and_cluster() {
        assert_eq!(expected_hitting_fraction(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(expected_hitting_fraction(0.5, 1.0).unwrap(), 2.0);
        let h = expected_hitting_fraction(0.5647, 2.0).unwrap();
        assert!((h - 1.0 / 1.1294).abs() < 1e-12);
        assert!(expected_hitting_fraction(0.0, 1.0).is_err());
        assert!(expected_hitting_fraction(0.5, 0.0).is_err());
        assert_eq!(mean_cluster_size(1.0).unwrap(), 1.0);
        assert_eq!(mean_cluster_size(0.5).unwrap(), 2.0);
        assert!((mean_cluster_size(0.5647).unwrap() - 1.770_851_78).abs() < 1e-7);
        assert!(mean_cluster_size(0.0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn ei_values_in_unit_interval(g in 1e-3f64..50.0, a in 0f64..1e6, e in 1e-2f64..1e4, c in 0f64..=1.0) {
            for t in [
                ei_rw_pareto(g).unwrap().theta,
                ei_rwj_pareto(g, a, e).unwrap().theta,
                ei_pr_lower_bound(c).unwrap().theta,
                ei_archimedean(g).unwrap().theta,
            ] {
                proptest::prop_assert!((0.0..=1.0).contains(&t));
            }
        }

        #[test]
        fn copula_diag_frechet_and_monotone(g in 0.05f64..10.0, u in 0f64..1.0, du in 0f64..0.1) {
            let c = theoretical_copula_diag(u, g).unwrap();
            proptest::prop_assert!(c >= (2.0 * u - 1.0).max(0.0) - 1e-12 && c <= u + 1e-12);
            let v = (u + du).min(1.0);
            proptest::prop_assert!(theoretical_copula_diag(v, g).unwrap() >= c - 1e-12);
        }

        #[test]
        fn maxima_quantile_grows_with_n(n in 1f64..1e6, k in 1.0f64..10.0, th in 0.01f64..=1.0, eta in 0.01f64..0.99) {
            let m = JointDegreeModel::new(10.0, 15.0, 1.2).unwrap();
            let a = maxima_quantile_pareto(&m, n, th, eta).unwrap();
            let b = maxima_quantile_pareto(&m, n * k, th, eta).unwrap();
            proptest::prop_assert!(b >= a * (1.0 - 1e-12));
        }
    }
}
