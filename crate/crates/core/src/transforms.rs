//! Cartesian and polar decompositions, the t-Aluthge transform, and
//! off-diagonal block assembly.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{c64, svd, CMatrix, EigenSystem, UNIT_ROUNDOFF};

/// `(Re T, Im T)` with `Re T = (T + T*)/2` and `Im T = (T - T*)/(2i)`.
pub fn cartesian(t: &CMatrix) -> (CMatrix, CMatrix) {
    let adj = t.adjoint();
    let re = (t + &adj).scale_real(0.5);
    let im = (t - &adj).scale(c64(0.0, -0.5));
    (re, im)
}

/// Polar factors `T = U P` with `P = |T|` and `U` a partial isometry that
/// vanishes on the numerical kernel of `T`.
#[derive(Clone, Debug)]
pub struct PolarParts {
    pub u: CMatrix,
    pub p: CMatrix,
    /// Singular values at or below this cutoff are treated as zero.
    pub rank_tol: f64,
    /// Singular values of `T`, descending.
    pub singular_values: Vec<f64>,
    pub rank: usize,
    right_vectors: CMatrix,
    left_vectors: CMatrix,
}

impl PolarParts {
    /// `|T|^p`, using the truncated spectrum so kernel directions stay in the
    /// kernel; `p = 0` gives the identity.
    pub fn abs_power(&self, p: f64) -> CMatrix {
        EigenSystem { eigenvalues: self.truncated(), eigenvectors: self.right_vectors.clone() }
            .recompose_with(|s| s.powf(p))
    }

    /// `|T*|^p = U |T|^p U*` for `p > 0`, with the same truncation; `p = 0`
    /// gives the identity.
    pub fn abs_adjoint_power(&self, p: f64) -> CMatrix {
        EigenSystem { eigenvalues: self.truncated(), eigenvectors: self.left_vectors.clone() }
            .recompose_with(|s| s.powf(p))
    }

    fn truncated(&self) -> Vec<f64> {
        self.singular_values.iter().map(|&s| if s > self.rank_tol { s } else { 0.0 }).collect()
    }

    /// Orthogonal projection `U*U` onto the range of `P`.
    pub fn initial_projection(&self) -> CMatrix {
        &self.u.adjoint() * &self.u
    }
}

pub fn polar(t: &CMatrix) -> Result<PolarParts> {
    let dec = svd(t)?;
    let n = t.n();
    let sigma_max = dec.sigma.first().copied().unwrap_or(0.0);
    let rank_tol = n as f64 * UNIT_ROUNDOFF * sigma_max;
    let rank = dec.sigma.iter().filter(|&&s| s > rank_tol).count();

    let w = dec.w.as_dmatrix();
    let v = dec.v.as_dmatrix();
    let mut w_trunc = w.clone();
    for k in rank..n {
        w_trunc.column_mut(k).fill(Complex64::new(0.0, 0.0));
    }
    let u = CMatrix::from_dmatrix_unchecked(&w_trunc * v.adjoint());

    let p = EigenSystem { eigenvalues: dec.sigma.clone(), eigenvectors: dec.v.clone() }.recompose();
    Ok(PolarParts { u, p, rank_tol, singular_values: dec.sigma, rank, right_vectors: dec.v, left_vectors: dec.w })
}

fn check_unit_parameter(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::ParameterOutOfRange { name: "t", value: t, range: "[0, 1]" });
    }
    Ok(())
}

/// `|T|^t U |T|^{1-t}` from precomputed polar factors.
pub fn aluthge_from_polar(parts: &PolarParts, t: f64) -> Result<CMatrix> {
    check_unit_parameter(t)?;
    Ok(&(&parts.abs_power(t) * &parts.u) * &parts.abs_power(1.0 - t))
}

/// The t-Aluthge transform `|T|^t U |T|^{1-t}`, `0 <= t <= 1`.
pub fn aluthge_t(t_mat: &CMatrix, t: f64) -> Result<CMatrix> {
    check_unit_parameter(t)?;
    aluthge_from_polar(&polar(t_mat)?, t)
}

/// `[[0, X], [Y, 0]]`.
pub fn offdiag_block(x: &CMatrix, y: &CMatrix) -> Result<CMatrix> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch { left: x.n(), right: y.n() });
    }
    let n = x.n();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, n), (n, n)).copy_from(x.as_dmatrix());
    m.view_mut((n, 0), (n, n)).copy_from(y.as_dmatrix());
    Ok(CMatrix::from_dmatrix_unchecked(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::spectral_norm;

    fn shift() -> CMatrix {
        CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap()
    }

    #[test]
    fn cartesian_of_identity_and_shift() {
        let (re, im) = cartesian(&CMatrix::identity(2));
        assert_eq!(re, CMatrix::identity(2));
        assert_eq!(im, CMatrix::zeros(2));

        let (re, im) = cartesian(&shift());
        assert!(re.max_abs_diff(&CMatrix::from_real_rows(&[vec![0.0, 0.5], vec![0.5, 0.0]]).unwrap()) < 1e-16);
        assert_eq!(im.get(0, 1), c64(0.0, -0.5));
        assert_eq!(im.get(1, 0), c64(0.0, 0.5));
        assert!((spectral_norm(&re) - 0.5).abs() < 1e-15);
        assert!((spectral_norm(&im) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn polar_of_diagonal() {
        let parts = polar(&CMatrix::diag_real(&[2.0, -3.0])).unwrap();
        assert!(parts.u.max_abs_diff(&CMatrix::diag_real(&[1.0, -1.0])) < 1e-14);
        assert!(parts.p.max_abs_diff(&CMatrix::diag_real(&[2.0, 3.0])) < 1e-14);
        assert_eq!(parts.rank, 2);
    }

    #[test]
    fn polar_of_shift_is_canonical() {
        let parts = polar(&shift()).unwrap();
        assert!(parts.u.max_abs_diff(&shift()) < 1e-15);
        assert!(parts.p.max_abs_diff(&CMatrix::diag_real(&[0.0, 1.0])) < 1e-15);
        assert_eq!(parts.rank, 1);
        assert!(parts.initial_projection().max_abs_diff(&CMatrix::diag_real(&[0.0, 1.0])) < 1e-15);
    }

    #[test]
    fn adjoint_powers() {
        let t = shift();
        let parts = polar(&t).unwrap();
        // |T*| = diag(1, 0) for the shift
        assert!(parts.abs_adjoint_power(1.0).max_abs_diff(&CMatrix::diag_real(&[1.0, 0.0])) < 1e-15);
        assert!(parts.abs_adjoint_power(0.0).max_abs_diff(&CMatrix::identity(2)) < 1e-15);
        let g =
            CMatrix::from_rows(&[vec![c64(1.0, 0.5), c64(-2.0, 0.0)], vec![c64(0.3, -1.0), c64(0.0, 0.7)]]).unwrap();
        let parts = polar(&g).unwrap();
        let tt = &g * &g.adjoint();
        assert!(parts.abs_adjoint_power(2.0).max_abs_diff(&tt) < 1e-13);
    }

    #[test]
    fn aluthge_of_shift_vanishes() {
        let a = aluthge_t(&shift(), 0.5).unwrap();
        assert!(a.max_abs_diff(&CMatrix::zeros(2)) < 1e-15);
    }

    #[test]
    fn aluthge_endpoints() {
        let t = shift();
        // t = 0 gives U|T| = T; t = 1 gives |T|U
        assert!(aluthge_t(&t, 0.0).unwrap().max_abs_diff(&t) < 1e-15);
        assert!(aluthge_t(&t, 1.0).unwrap().max_abs_diff(&CMatrix::zeros(2)) < 1e-15);
        let d = CMatrix::diag_real(&[2.0, -3.0]);
        for s in [0.0, 0.3, 1.0] {
            assert!(aluthge_t(&d, s).unwrap().max_abs_diff(&d) < 1e-13);
        }
        assert!(aluthge_t(&d, 1.5).is_err());
    }

    #[test]
    fn offdiag_assembly() {
        let one = CMatrix::identity(1);
        let m = offdiag_block(&one, &one).unwrap();
        assert_eq!(m, CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap());
        assert!(matches!(offdiag_block(&one, &CMatrix::identity(2)), Err(Error::DimensionMismatch { .. })));
    }
}
