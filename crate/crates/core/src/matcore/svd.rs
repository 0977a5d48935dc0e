use nalgebra::{DMatrix, DVector, SVD};
use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::error::{Error, Result};

const MAX_ITERS: usize = 10_000;
const JACOBI_SWEEPS: usize = 64;

/// Singular value decomposition `A = W diag(σ) V*`, σ descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub w: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

pub fn svd(a: &CMatrix) -> Result<Svd> {
    // nalgebra's complex Golub-Kahan returns mismatched singular vectors on
    // some rank-deficient inputs, so vectors come from one-sided Jacobi.
    let n = a.n();
    let mut cols = a.as_dmatrix().clone();
    let mut v = DMatrix::<Complex64>::identity(n, n);
    let mut converged = n < 2;
    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = cols.column(p).norm_squared();
                let beta = cols.column(q).norm_squared();
                let gamma = cols.column(p).dotc(&cols.column(q));
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                rotate(&mut cols, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure("singular value decomposition"));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|k| cols.column(k).norm()).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma: Vec<f64> = order.iter().map(|&k| norms[k]).collect();
    let v = DMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    let floor = sigma.first().copied().unwrap_or(0.0) * f64::EPSILON;
    let mut w = DMatrix::<Complex64>::zeros(n, n);
    let mut filled = 0;
    for (j, &k) in order.iter().enumerate() {
        if sigma[j] > floor && sigma[j] > 0.0 {
            w.set_column(j, &(cols.column(k) / Complex64::from(sigma[j])));
            filled = j + 1;
        } else {
            break;
        }
    }
    // complete the left basis on the numerical kernel
    let mut e = 0;
    while filled < n {
        let mut x = DVector::<Complex64>::zeros(n);
        x[e] = Complex64::from(1.0);
        e += 1;
        for _ in 0..2 {
            for j in 0..filled {
                let proj = w.column(j).dotc(&x);
                x -= w.column(j) * proj;
            }
        }
        let norm = x.norm();
        if norm > 0.5 {
            w.set_column(filled, &(x / Complex64::from(norm)));
            filled += 1;
        }
    }
    Ok(Svd { w: CMatrix::from_dmatrix_unchecked(w), sigma, v: CMatrix::from_dmatrix_unchecked(v) })
}

/// Applies the complex plane rotation to columns `p`, `q`.
fn rotate(m: &mut DMatrix<Complex64>, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let a = m.column(p).clone_owned();
    let b = m.column(q) * phase.conj();
    m.set_column(p, &(&a * Complex64::from(c) - &b * Complex64::from(s)));
    m.set_column(q, &(a * Complex64::from(s) + b * Complex64::from(c)));
}

/// Singular values only, descending.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    let dec = SVD::try_new(a.as_dmatrix().clone(), false, false, f64::EPSILON, MAX_ITERS)
        .ok_or(Error::ConvergenceFailure("singular value decomposition"))?;
    Ok(dec.singular_values.iter().copied().collect())
}

/// Operator 2-norm, the largest singular value.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    if a.as_dmatrix().iter().all(|z| z.norm_sqr() == 0.0) {
        return 0.0;
    }
    singular_values(a)
        .map(|s| s[0])
        // Golub-Kahan on a finite matrix of this size does not stall in
        // practice; fall back to the Frobenius norm rather than panic.
        .unwrap_or_else(|_| a.frobenius_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::c64;

    #[test]
    fn shift_singular_values() {
        let t = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let s = svd(&t).unwrap();
        assert!((s.sigma[0] - 1.0).abs() < 1e-15);
        assert!(s.sigma[1].abs() < 1e-15);
    }

    #[test]
    fn rank_deficient_reconstructs() {
        // rank one; nalgebra's complex SVD mixes up the vectors on this input
        let t = CMatrix::from_rows(&[
            vec![c64(-0.7893623664531187, -0.24910768079172943), c64(-1.155876669597555, 0.6220442968181336)],
            vec![c64(1.2702681682920003, -0.6660344255266689), c64(0.6470904249890532, -2.1805092202410257)],
        ])
        .unwrap();
        for m in [t.clone(), CMatrix::zeros(3), CMatrix::diag_real(&[0.0, 2.0, 0.0])] {
            let s = svd(&m).unwrap();
            let back = &(&s.w * &CMatrix::diag_real(&s.sigma)) * &s.v.adjoint();
            assert!(back.max_abs_diff(&m) < 1e-14);
            let id = CMatrix::identity(m.n());
            assert!((&s.w.adjoint() * &s.w).max_abs_diff(&id) < 1e-14);
            assert!((&s.v.adjoint() * &s.v).max_abs_diff(&id) < 1e-14);
            assert!(s.sigma.windows(2).all(|p| p[0] >= p[1]));
        }
        let s = svd(&t).unwrap();
        assert!(s.sigma[1] < 1e-15);
    }

    #[test]
    fn norms() {
        assert_eq!(spectral_norm(&CMatrix::identity(3)), 1.0);
        let t = CMatrix::from_real_rows(&[vec![0.0, 2.0], vec![3.0, 0.0]]).unwrap();
        assert!((spectral_norm(&t) - 3.0).abs() < 1e-14);
        assert_eq!(spectral_norm(&CMatrix::zeros(2)), 0.0);
    }
}
