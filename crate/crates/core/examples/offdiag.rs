//! Bounds on the numerical radius of an off-diagonal block matrix.

use opradius::bounds::{BoundId, Evaluator, Inputs, Params};
use opradius::radii::numerical_radius;
use opradius::transforms::offdiag_block;
use opradius::{c64, CMatrix};

fn main() -> opradius::Result<()> {
    let x = CMatrix::from_rows(&[vec![c64(1.0, 0.0), c64(0.0, 2.0)], vec![c64(0.0, 0.0), c64(1.0, -1.0)]])?;
    let y = CMatrix::from_rows(&[vec![c64(0.5, 0.0), c64(0.0, 0.0)], vec![c64(1.0, 0.0), c64(0.0, 0.0)]])?;

    let m = offdiag_block(&x, &y)?;
    let w = numerical_radius(&m, 1e-10)?;
    let swapped = numerical_radius(&offdiag_block(&y, &x)?, 1e-10)?;
    println!("w([[0,X],[Y,0]]) = {:.10}, swapped {:.10}", w.upper, swapped.upper);

    let ev = Evaluator::new();
    let ids = BoundId::ALL.iter().filter(|id| id.name().starts_with("offdiag"));
    for &id in ids {
        let b = ev.evaluate(id, Inputs::Pair(&x, &y), &Params::default())?;
        println!("{:<22} {:?} {:.10}", id.name(), b.kind, b.value);
    }
    Ok(())
}
