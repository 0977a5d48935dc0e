//! Matrix-valued Gauss-Legendre quadrature along a segment of PSD matrices,
//! and the scalar and operator Hermite-Hadamard chains it feeds.

use opradius::harness::{hermite_hadamard_gaps, operator_hermite_hadamard_gaps};
use opradius::matcore::{integrate_unit, segment_power_integral, spectral_norm};
use opradius::CMatrix;

fn main() -> opradius::Result<()> {
    let a = CMatrix::diag_real(&[0.0, 1.0]);
    let b = CMatrix::diag_real(&[1.0, 0.0]);
    for r in [1.0, 1.5, 2.0] {
        let m = segment_power_integral(&a, &b, r, 1e-12)?;
        let exact = CMatrix::identity(2).scale_real(1.0 / (r + 1.0));
        println!("r = {r}: error against I/(r+1) = {:.1e}", m.max_abs_diff(&exact));
    }

    let pi = integrate_unit(|t| 4.0 / (1.0 + t * t), 1e-14)?;
    println!("∫ 4/(1+t²) = {pi:.15}");

    let (lo, hi) = hermite_hadamard_gaps(0.5, 3.0, 1.7)?;
    println!("scalar gaps (<= 0): {lo:.3e}, {hi:.3e}");

    let t = CMatrix::from_real_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]])?;
    let (gram, cogram) = (&t.adjoint() * &t, &t * &t.adjoint());
    let (lo, hi) = operator_hermite_hadamard_gaps(&gram, &cogram, 1.5)?;
    println!("operator gaps (<= 0): {lo:.3e}, {hi:.3e}");
    let integral = segment_power_integral(&gram, &cogram, 1.5, 1e-12)?;
    println!("||∫ (tT*T + (1-t)TT*)^1.5|| = {:.10}", spectral_norm(&integral));
    Ok(())
}
