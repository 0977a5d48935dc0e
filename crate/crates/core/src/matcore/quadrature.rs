//! Gauss–Legendre quadrature of matrix-valued integrands over `[0, 1]`.

use std::sync::OnceLock;

use super::eig::{eigh_symmetrized, hermitian_eig};
use super::funcs::{psd_tolerance, ScalarFunctionSpec};
use super::matrix::CMatrix;
use super::svd::spectral_norm;
use crate::error::{Error, Result};

pub const MIN_NODES: usize = 8;
pub const MAX_NODES: usize = 1024;

/// Nodes and weights of the `n`-point rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi's initial guess, then Newton on P_n
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Shared rule for `n = 8 * 2^k`.
    pub fn cached(n: usize) -> &'static GaussLegendre {
        static RULES: [OnceLock<GaussLegendre>; 8] = [const { OnceLock::new() }; 8];
        let level = (n / MIN_NODES).trailing_zeros() as usize;
        assert!(n == MIN_NODES << level && level < RULES.len(), "unsupported rule size {n}");
        RULES[level].get_or_init(|| GaussLegendre::new(n))
    }

    /// Nodes mapped to `[0, 1]` with weights summing to one.
    pub fn unit_interval(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| (0.5 * (x + 1.0), 0.5 * w))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `∫₀¹ f(t)` for a scalar integrand, doubling nodes until successive
/// estimates agree within `tol`.
pub fn integrate_unit(mut f: impl FnMut(f64) -> f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    let mut prev: Option<f64> = None;
    let mut n = MIN_NODES;
    let mut last_change = f64::INFINITY;
    while n <= MAX_NODES {
        let est: f64 = GaussLegendre::cached(n).unit_interval().map(|(t, w)| w * f(t)).sum();
        if let Some(p) = prev {
            last_change = (est - p).abs();
            if last_change <= tol {
                return Ok(est);
            }
        }
        prev = Some(est);
        n *= 2;
    }
    Err(Error::NoConvergence { nodes: MAX_NODES, last_change })
}

fn require_psd(m: &CMatrix) -> Result<()> {
    let sys = hermitian_eig(m)?;
    let tol = psd_tolerance(sys.max_abs_eigenvalue());
    let min = sys.eigenvalues[0];
    if min < -tol {
        return Err(Error::NotPsd { min_eigenvalue: min, tolerance: tol });
    }
    Ok(())
}

/// `∫₀¹ f(tA + (1-t)B) dt` for Hermitian PSD `A`, `B`.
pub fn segment_function_integral(a: &CMatrix, b: &CMatrix, f: &ScalarFunctionSpec, tol: f64) -> Result<CMatrix> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { left: a.n(), right: b.n() });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    require_psd(a)?;
    require_psd(b)?;
    let n = a.n();
    let mut prev: Option<CMatrix> = None;
    let mut nodes = MIN_NODES;
    let mut last_change = f64::INFINITY;
    while nodes <= MAX_NODES {
        let mut acc = CMatrix::zeros(n);
        for (t, w) in GaussLegendre::cached(nodes).unit_interval() {
            let m = &a.scale_real(t) + &b.scale_real(1.0 - t);
            let sys = eigh_symmetrized(m.as_dmatrix())?;
            acc = &acc + &sys.recompose_with(|lam| w * f.eval(lam.max(0.0)));
        }
        if let Some(p) = &prev {
            last_change = spectral_norm(&(&acc - p));
            if last_change <= tol {
                return Ok(acc.symmetrized());
            }
        }
        prev = Some(acc);
        nodes *= 2;
    }
    Err(Error::NoConvergence { nodes: MAX_NODES, last_change })
}

/// `∫₀¹ (tA + (1-t)B)^r dt` for `1 <= r <= 2`.
pub fn segment_power_integral(a: &CMatrix, b: &CMatrix, r: f64, tol: f64) -> Result<CMatrix> {
    let f = ScalarFunctionSpec::operator_convex_power(r)?;
    segment_function_integral(a, b, &f, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_integrate_polynomials_exactly() {
        for n in [8, 16, 64] {
            let rule = GaussLegendre::new(n);
            assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            // degree 2n-1 is exact
            let deg = 2 * n - 1;
            let est: f64 = rule.unit_interval().map(|(t, w)| w * t.powi(deg as i32)).sum();
            assert!((est - 1.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn odd_rule_has_center_node() {
        let rule = GaussLegendre::new(5);
        assert_eq!(rule.nodes[2], 0.0);
        assert!((rule.weights[2] - 128.0 / 225.0).abs() < 1e-14);
    }

    #[test]
    fn scalar_integral_converges() {
        let v = integrate_unit(|t| t.powf(1.5), 1e-12).unwrap();
        assert!((v - 0.4).abs() < 1e-11);
    }

    #[test]
    fn constant_integrand() {
        let i = CMatrix::identity(3);
        let out = segment_power_integral(&i, &i, 1.7, 1e-12).unwrap();
        assert!(out.max_abs_diff(&i) < 1e-13);
    }

    #[test]
    fn rejects_bad_inputs() {
        let i = CMatrix::identity(2);
        assert!(matches!(
            segment_power_integral(&i, &CMatrix::identity(3), 1.5, 1e-10),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            segment_power_integral(&i, &CMatrix::diag_real(&[-1.0, 1.0]), 1.5, 1e-10),
            Err(Error::NotPsd { .. })
        ));
        assert!(segment_power_integral(&i, &i, 2.5, 1e-10).is_err());
        assert!(segment_power_integral(&i, &i, 1.5, 0.0).is_err());
    }

    #[test]
    fn tiny_tolerance_reports_no_convergence() {
        let a = CMatrix::diag_real(&[0.0, 1.0]);
        let b = CMatrix::diag_real(&[1.0, 0.0]);
        assert!(matches!(segment_power_integral(&a, &b, 1.01, 1e-30), Err(Error::NoConvergence { .. })));
    }
}
