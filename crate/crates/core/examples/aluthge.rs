//! Polar factors and the t-Aluthge family. The transforms keep the trace of
//! every power and never raise the numerical radius.

use opradius::bounds::{evaluate, BoundId, Inputs, Params};
use opradius::radii::numerical_radius;
use opradius::transforms::{aluthge_t, polar};
use opradius::{c64, CMatrix};

fn main() -> opradius::Result<()> {
    let t = CMatrix::from_rows(&[
        vec![c64(0.0, 0.0), c64(2.0, 0.0), c64(0.0, 1.0)],
        vec![c64(0.0, 0.0), c64(0.5, 0.0), c64(1.0, 0.0)],
        vec![c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)],
    ])?;
    let parts = polar(&t)?;
    println!("singular values {:?}, numerical rank {}", parts.singular_values, parts.rank);
    println!("|| U|T| - T || = {:.1e}", (&parts.u * &parts.p).max_abs_diff(&t));

    let w = numerical_radius(&t, 1e-10)?;
    println!("w(T) = {:.10}", w.upper);
    for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let a = aluthge_t(&t, s)?;
        let wa = numerical_radius(&a, 1e-10)?;
        println!(
            "t = {s:<4}  w = {:.10}  tr(A²) - tr(T²) = {:.1e}",
            wa.upper,
            (a.pow(2).trace() - t.pow(2).trace()).norm()
        );
    }

    for id in [BoundId::WUpperAluthgeHalf, BoundId::WUpperAluthgeT, BoundId::WUpperQt] {
        let b = evaluate(id, Inputs::Single(&t), &Params { t: 0.3, r: 1.5 })?;
        println!("{id}: {:.10}", b.value);
    }
    Ok(())
}
