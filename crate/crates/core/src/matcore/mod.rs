//! Dense complex matrix kernel: arithmetic, Hermitian eigensystems, SVD,
//! spectral calculus on PSD matrices, and segment quadrature.

mod eig;
mod funcs;
mod matrix;
mod quadrature;
mod svd;

pub(crate) use eig::{eigh_unsorted, top_eigenpair};
pub use eig::{hermitian_eig, EigenSystem, UNIT_ROUNDOFF};
pub(crate) use funcs::psd_power;
pub use funcs::{abs_operator, psd_function, psd_tolerance, ScalarFunctionSpec, TabulatedFunction};
pub use matrix::{c64, matrix_to_json, parse_matrix_json, CMatrix, MatrixJson};
pub use quadrature::{
    integrate_unit, segment_function_integral, segment_power_integral, GaussLegendre, MAX_NODES, MIN_NODES,
};
pub use svd::{singular_values, spectral_norm, svd, Svd};

/// Conjugate transpose.
pub fn adjoint(a: &CMatrix) -> CMatrix {
    a.adjoint()
}
