//! Spectral calculus on Hermitian positive semidefinite matrices.

use super::eig::{eigh_symmetrized, hermitian_eig, EigenSystem};
use super::matrix::CMatrix;
use super::svd::svd;
use crate::error::{Error, Result};

/// Piecewise-linear, nondecreasing, convex map on `[0, ∞)` given by knots.
///
/// Beyond the last knot the final segment is extended linearly; before the
/// first knot the first segment is.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedFunction {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl TabulatedFunction {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::InvalidSpec("table needs at least two (x, y) knots".into()));
        }
        if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) || xs[0] < 0.0 {
            return Err(Error::InvalidSpec("knots must be finite with x >= 0".into()));
        }
        let mut prev_slope = f64::NEG_INFINITY;
        for k in 1..xs.len() {
            if xs[k] <= xs[k - 1] {
                return Err(Error::InvalidSpec("knot abscissae must increase strictly".into()));
            }
            let slope = (ys[k] - ys[k - 1]) / (xs[k] - xs[k - 1]);
            if slope < 0.0 {
                return Err(Error::InvalidSpec("table is not monotone".into()));
            }
            if slope < prev_slope {
                return Err(Error::InvalidSpec("table is not convex".into()));
            }
            prev_slope = slope;
        }
        Ok(Self { xs, ys })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let k = match self.xs.iter().position(|&xk| xk >= x) {
            Some(0) => 1,
            Some(k) => k,
            None => n - 1,
        };
        let (x0, x1, y0, y1) = (self.xs[k - 1], self.xs[k], self.ys[k - 1], self.ys[k]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// Scalar map applied through the spectral theorem.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarFunctionSpec {
    /// `x ↦ x^p` with the convention `0^0 = 1`.
    Power(f64),
    Custom(TabulatedFunction),
}

impl ScalarFunctionSpec {
    /// `x^r` restricted to the operator convex range `1 <= r <= 2`.
    pub fn operator_convex_power(r: f64) -> Result<Self> {
        if !(1.0..=2.0).contains(&r) {
            return Err(Error::ParameterOutOfRange { name: "r", value: r, range: "[1, 2]" });
        }
        Ok(Self::Power(r))
    }

    pub fn power(p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 0.0) {
            return Err(Error::ParameterOutOfRange { name: "p", value: p, range: "[0, inf)" });
        }
        Ok(Self::Power(p))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Power(p) => x.powf(*p),
            Self::Custom(t) => t.eval(x),
        }
    }

    pub fn is_operator_convex_power(&self) -> bool {
        matches!(self, Self::Power(p) if (1.0..=2.0).contains(p))
    }
}

/// Clamping window for roundoff-negative eigenvalues.
pub fn psd_tolerance(norm: f64) -> f64 {
    1e-10 * norm.max(1.0)
}

fn check_psd(sys: &EigenSystem) -> Result<()> {
    let tol = psd_tolerance(sys.max_abs_eigenvalue());
    let min = sys.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -tol {
        return Err(Error::NotPsd { min_eigenvalue: min, tolerance: tol });
    }
    Ok(())
}

/// `f(H)` for Hermitian PSD `H`; eigenvalues in `[-τ, 0)` are clamped to 0.
pub fn psd_function(h: &CMatrix, f: &ScalarFunctionSpec) -> Result<CMatrix> {
    let sys = hermitian_eig(h)?;
    check_psd(&sys)?;
    Ok(sys.recompose_with(|lam| f.eval(lam.max(0.0))))
}

/// Like [`psd_function`] with a power map, skipping the asymmetry check.
/// For matrices that are Hermitian by construction.
pub(crate) fn psd_power(h: &CMatrix, p: f64) -> Result<CMatrix> {
    let sys = eigh_symmetrized(h.as_dmatrix())?;
    check_psd(&sys)?;
    Ok(sys.recompose_with(|lam| lam.max(0.0).powf(p)))
}

/// `|T| = (T*T)^{1/2}`, assembled from the SVD as `V Σ V*`.
pub fn abs_operator(t: &CMatrix) -> Result<CMatrix> {
    let s = svd(t)?;
    let sys = EigenSystem { eigenvalues: s.sigma.clone(), eigenvectors: s.v };
    Ok(sys.recompose())
}
