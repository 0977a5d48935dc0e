//! Equality-case predicates of the lower bounds, including inputs where a
//! consequent holds without its premise.

use opradius::harness::{check_equality_conditions, EqualityInput};
use opradius::{c64, CMatrix};

fn show(label: &str, input: EqualityInput<'_>) {
    println!("{label}");
    for c in check_equality_conditions(input) {
        let mut note = "";
        if c.converse_counterexample() {
            note = "  <- consequent without premise";
        } else if c.contradicts_claim() {
            note = "  <- contradicts the claim";
        }
        println!("  {:<28} {:?}: premise {}, consequent {}{note}", c.id, c.claim, c.premise, c.consequent);
    }
}

fn main() -> opradius::Result<()> {
    let shift = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]])?;
    show("nilpotent shift", EqualityInput::Single(&shift));
    show("identity", EqualityInput::Single(&CMatrix::identity(3)));
    show("diag(1, i)", EqualityInput::Single(&CMatrix::diag(&[c64(1.0, 0.0), c64(0.0, 1.0)])));
    let i = CMatrix::identity(2);
    show("B = C = I", EqualityInput::Pair(&i, &i));
    Ok(())
}
