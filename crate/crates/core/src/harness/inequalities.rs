//! Gaps of the auxiliary inequalities the bounds rest on. Each function
//! returns `lhs - rhs`; the inequality holds when the gap is `<= 0` up to
//! roundoff.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::Result;
use crate::matcore::{hermitian_eig, integrate_unit, psd_power, segment_power_integral, CMatrix};
use crate::transforms::polar;

fn form(m: &CMatrix, x: &DVector<Complex64>) -> f64 {
    m.quadratic_form(x).re
}

/// `|⟨Ax, y⟩|² - ⟨|A|^{2α} x, x⟩ ⟨|A*|^{2(1-α)} y, y⟩`.
pub fn cauchy_schwarz_gap(a: &CMatrix, x: &DVector<Complex64>, y: &DVector<Complex64>, alpha: f64) -> Result<f64> {
    let parts = polar(a)?;
    let ax = a.as_dmatrix() * x;
    let lhs = y.dotc(&ax).norm_sqr();
    let rhs = form(&parts.abs_power(2.0 * alpha), x) * form(&parts.abs_adjoint_power(2.0 * (1.0 - alpha)), y);
    Ok(lhs - rhs)
}

/// `⟨Hx, x⟩^r - ⟨H^r x, x⟩` for PSD `H` and `r >= 1`.
pub fn jensen_gap(h: &CMatrix, x: &DVector<Complex64>, r: f64) -> Result<f64> {
    let hr = psd_power(h, r)?;
    Ok(form(h, x).max(0.0).powf(r) - form(&hr, x))
}

/// Gaps of `f((a+b)/2) <= ∫₀¹ f(ta + (1-t)b) dt <= (f(a) + f(b))/2` for
/// `f(x) = x^r` on `a, b >= 0`.
pub fn hermite_hadamard_gaps(a: f64, b: f64, r: f64) -> Result<(f64, f64)> {
    let f = |x: f64| x.max(0.0).powf(r);
    let scale = f(a.max(b)).max(1.0);
    let integral = integrate_unit(|t| f(t * a + (1.0 - t) * b), 1e-14 * scale)?;
    Ok((f(0.5 * (a + b)) - integral, integral - 0.5 * (f(a) + f(b))))
}

/// The same chain in the Loewner order for PSD `A`, `B` and `1 <= r <= 2`,
/// where `x^r` is operator convex. Gaps are the largest eigenvalues of
/// `lhs - rhs`.
pub fn operator_hermite_hadamard_gaps(a: &CMatrix, b: &CMatrix, r: f64) -> Result<(f64, f64)> {
    // a shared kernel direction makes the integrand behave like t^r at an
    // endpoint, so Gauss-Legendre converges slowly; stay well under the gate
    let scale = crate::matcore::spectral_norm(a).max(crate::matcore::spectral_norm(b)).max(1.0).powf(r);
    let integral = segment_power_integral(a, b, r, 1e-11 * scale)?;
    let mid = psd_power(&(a + b).scale_real(0.5), r)?;
    let ends = (&psd_power(a, r)? + &psd_power(b, r)?).scale_real(0.5);
    let top = |m: CMatrix| -> Result<f64> { Ok(hermite(&m)?.eigenvalues.last().copied().unwrap_or(0.0)) };
    Ok((top(&mid - &integral)?, top(&integral - &ends)?))
}

fn hermite(m: &CMatrix) -> Result<crate::matcore::EigenSystem> {
    hermitian_eig(&m.symmetrized())
}
