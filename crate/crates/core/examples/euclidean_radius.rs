//! The Euclidean operator radius of a pair, against a sampling oracle.

use opradius::radii::{euclidean_radius, numerical_radius, we_oracle};
use opradius::{c64, CMatrix};

fn main() -> opradius::Result<()> {
    let b = CMatrix::from_rows(&[vec![c64(1.0, 0.0), c64(1.0, 1.0)], vec![c64(0.0, 0.0), c64(-0.5, 0.0)]])?;
    let c = CMatrix::from_rows(&[vec![c64(0.0, 1.0), c64(0.0, 0.0)], vec![c64(2.0, 0.0), c64(0.3, 0.0)]])?;

    let enc = euclidean_radius(&b, &c, 1e-9)?;
    println!("w_e(B, C) in [{:.10}, {:.10}]", enc.lower, enc.upper);
    println!("sampled: {:.10}", we_oracle(&b, &c, 10_000, 1));

    let (wb, wc) = (numerical_radius(&b, 1e-9)?, numerical_radius(&c, 1e-9)?);
    println!("max(w(B), w(C)) = {:.10}", wb.upper.max(wc.upper));
    println!("sqrt(w(B)² + w(C)²) = {:.10}", wb.upper.hypot(wc.upper));

    // B = C = I: w_e = sqrt(2), strictly above sqrt(w(B² + C²)/2) = 1
    let i = CMatrix::identity(2);
    let enc = euclidean_radius(&i, &i, 1e-12)?;
    println!("w_e(I, I) in [{:.12}, {:.12}]", enc.lower, enc.upper);
    Ok(())
}
