//! Every registered bound on one pair of matrices, next to the certified
//! reference values.

use opradius::bounds::{list_bounds, BoundKind, Evaluator, Inputs, Params, Target};
use opradius::harness::{trial_inputs, EnsembleKind, EnsembleSpec};
use opradius::radii::{euclidean_radius, numerical_radius};
use opradius::transforms::offdiag_block;

fn main() -> opradius::Result<()> {
    let spec = EnsembleSpec::new(EnsembleKind::Ginibre, 3, 2024, 1);
    let inputs = trial_inputs(&spec, 0)?;
    let (t, c) = (&inputs.t, &inputs.c);

    let w = numerical_radius(t, 1e-10)?.midpoint();
    let we = euclidean_radius(t, c, 1e-10)?.midpoint();
    let wo = numerical_radius(&offdiag_block(t, c)?, 1e-10)?.midpoint();
    println!("w(T) = {w:.8}   w_e(T, C) = {we:.8}   w([[0,T],[C,0]]) = {wo:.8}\n");

    let ev = Evaluator::new();
    let params = Params { t: 0.5, r: 1.5 };
    println!("{:<22} {:>6} {:>12} {:>12}  formula", "id", "kind", "value", "slack");
    for entry in list_bounds() {
        let id = entry.id;
        let input = if id.signature().is_single() { Inputs::Single(t) } else { Inputs::Pair(t, c) };
        let res = match ev.evaluate(id, input, &params) {
            Ok(r) => r,
            Err(e) => {
                println!("{:<22} skipped: {e}", id.name());
                continue;
            }
        };
        let reference = match res.target {
            Target::W => w,
            Target::We => we,
            Target::WOffdiag => wo,
        };
        let slack = match res.kind {
            BoundKind::Upper => res.value - reference,
            BoundKind::Lower | BoundKind::TwoSided => reference - res.value,
        };
        println!(
            "{:<22} {:>6} {:>12.8} {:>12.2e}  {}",
            id.name(),
            res.kind.to_string(),
            res.value,
            slack,
            entry.anchor
        );
    }
    Ok(())
}
