//! Certified enclosure of the numerical radius, with the witness vector.

use opradius::radii::{numerical_radius, w_objective};
use opradius::{c64, CMatrix};

fn main() -> opradius::Result<()> {
    let t = CMatrix::from_rows(&[
        vec![c64(1.0, 0.0), c64(2.0, -1.0), c64(0.0, 0.0)],
        vec![c64(0.0, 0.0), c64(0.0, 1.0), c64(1.0, 0.0)],
        vec![c64(0.5, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)],
    ])?;
    let enc = numerical_radius(&t, 1e-10)?;
    println!("w(T) in [{:.12}, {:.12}]", enc.lower, enc.upper);
    println!("width {:.1e}, {} Hermitian eigenproblems", enc.width(), enc.evaluations);

    let x = enc.witness.to_vector();
    println!("|<Tx, x>| at the witness = {:.12} (theta = {:.6})", w_objective(&t, &x), enc.witness.angles[0]);

    // the nilpotent shift has w = 1/2 exactly
    let shift = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]])?;
    let enc = numerical_radius(&shift, 1e-12)?;
    println!("w(shift) in [{}, {}]", enc.lower, enc.upper);
    Ok(())
}
