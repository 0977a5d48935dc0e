use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::error::{Error, Result};

/// Unit roundoff for `f64`.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

const MAX_SWEEPS: usize = 10_000;

/// Eigenvalues in ascending order with matching unitary eigenvector columns.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl EigenSystem {
    /// `Q diag(f(λ)) Q*`.
    pub fn recompose_with(&self, mut f: impl FnMut(f64) -> f64) -> CMatrix {
        let q = self.eigenvectors.as_dmatrix();
        let n = q.nrows();
        let mut scaled = q.clone();
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let fk = f(lam);
            for i in 0..n {
                scaled[(i, k)] *= fk;
            }
        }
        let mut out = &scaled * q.adjoint();
        // the product is Hermitian in exact arithmetic
        for i in 0..n {
            out[(i, i)].im = 0.0;
            for j in 0..i {
                let avg = (out[(i, j)] + out[(j, i)].conj()) * 0.5;
                out[(i, j)] = avg;
                out[(j, i)] = avg.conj();
            }
        }
        CMatrix::from_dmatrix_unchecked(out)
    }

    pub fn recompose(&self) -> CMatrix {
        self.recompose_with(|x| x)
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Factors the Hermitian part of `h` without checking its asymmetry.
pub(crate) fn eigh_symmetrized(h: &DMatrix<Complex64>) -> Result<EigenSystem> {
    let sym = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, MAX_SWEEPS)
        .ok_or(Error::ConvergenceFailure("hermitian eigendecomposition"))?;
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(EigenSystem { eigenvalues, eigenvectors: CMatrix::from_dmatrix_unchecked(vectors) })
}

/// Eigenvalues and eigenvectors of a Hermitian matrix in solver order.
pub(crate) fn eigh_unsorted(h: &DMatrix<Complex64>) -> Result<(DVector<f64>, DMatrix<Complex64>)> {
    let eig = SymmetricEigen::try_new(h.clone(), f64::EPSILON, MAX_SWEEPS)
        .ok_or(Error::ConvergenceFailure("hermitian eigendecomposition"))?;
    Ok((eig.eigenvalues, eig.eigenvectors))
}

/// Largest eigenvalue of a Hermitian matrix and a unit eigenvector for it.
pub(crate) fn top_eigenpair(h: &DMatrix<Complex64>) -> Result<(f64, DVector<Complex64>)> {
    let (values, vectors) = eigh_unsorted(h)?;
    let k = values.imax();
    Ok((values[k], vectors.column(k).into_owned()))
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized as `(H + H*)/2` first; asymmetry larger than
/// `1e-10 * ‖H‖` is rejected.
pub fn hermitian_eig(h: &CMatrix) -> Result<EigenSystem> {
    let sys = eigh_symmetrized(h.as_dmatrix())?;
    let norm = sys.max_abs_eigenvalue();
    let skew = (h.as_dmatrix() - h.as_dmatrix().adjoint()) * Complex64::new(0.0, 0.5);
    // i(H - H*)/2 is Hermitian; its spectral norm is the asymmetry
    let asym = if skew.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        0.0
    } else {
        eigh_symmetrized(&skew)?.max_abs_eigenvalue()
    };
    let tolerance = 1e-10 * norm;
    if asym > tolerance {
        return Err(Error::NotHermitian { asymmetry: asym, tolerance });
    }
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::matrix::c64;

    #[test]
    fn diagonal_sorted() {
        let sys = hermitian_eig(&CMatrix::diag_real(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(sys.eigenvalues, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_x() {
        let x = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let sys = hermitian_eig(&x).unwrap();
        assert!((sys.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((sys.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let t = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eig(&t), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn tolerates_roundoff_asymmetry() {
        let h = CMatrix::from_rows(&[vec![c64(2.0, 0.0), c64(1.0, 1.0)], vec![c64(1.0, -1.0 + 1e-14), c64(-1.0, 0.0)]])
            .unwrap();
        assert!(hermitian_eig(&h).is_ok());
    }
}
