//! Registry of closed-form lower and upper bounds for `w(T)`, `w_e(B, C)`
//! and the numerical radius of the off-diagonal block `[[0, X], [Y, 0]]`.
//!
//! Every value is reported in the units of its target radius; inequalities
//! naturally stated for a square (or fourth power) are rooted, and the
//! squared form is kept in the breakdown where it is informative. Numerical
//! radii appearing inside a formula are certified enclosures at tolerance
//! `1e-10 * scale`: the formula is evaluated at their midpoints, and the
//! propagated half-width is stored as `breakdown["w_uncertainty"]`.

mod formulas;
mod interval;
mod registry;

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use registry::{list_bounds, BoundId, BoundKind, RegistryEntry, Signature, Target};

use crate::error::{Error, Result};
use crate::matcore::CMatrix;
use crate::radii::{numerical_radius, Enclosure};
use interval::Val;

/// Matrices handed to [`evaluate`]. Pair ids read the pair as `(B, C)` or
/// `(X, Y)` according to their target.
#[derive(Clone, Copy, Debug)]
pub enum Inputs<'a> {
    Single(&'a CMatrix),
    Pair(&'a CMatrix, &'a CMatrix),
}

/// Scalar parameters. Only ids whose signature names them read them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    /// In `[0, 1]`.
    pub t: f64,
    /// In `[1, 2]`.
    pub r: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self { t: 0.5, r: 1.5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub id: BoundId,
    pub kind: BoundKind,
    pub target: Target,
    /// The bound; for two-sided ids the lower side.
    pub value: f64,
    /// Upper side of a two-sided id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<f64>,
    pub breakdown: BTreeMap<String, f64>,
    pub inputs_digest: String,
}

impl BoundResult {
    pub fn uncertainty(&self) -> f64 {
        self.breakdown.get("w_uncertainty").copied().unwrap_or(0.0)
    }

    /// The side that must lie below the target radius, if any.
    pub fn lower_side(&self) -> Option<f64> {
        match self.kind {
            BoundKind::Lower | BoundKind::TwoSided => Some(self.value),
            BoundKind::Upper => None,
        }
    }

    /// The side that must lie above the target radius, if any.
    pub fn upper_side(&self) -> Option<f64> {
        match self.kind {
            BoundKind::Upper => Some(self.value),
            BoundKind::TwoSided => self.upper,
            BoundKind::Lower => None,
        }
    }
}

/// Relative tolerance of every inner numerical-radius evaluation.
pub const INNER_TOLERANCE: f64 = 1e-10;

/// Evaluates bounds while memoising inner numerical radii, so that ids
/// sharing a sub-expression (and the caller's own reference computations)
/// pay for it once. Not `Sync`; use one per thread.
#[derive(Default)]
pub struct Evaluator {
    cache: RefCell<HashMap<Vec<u64>, Enclosure>>,
}

fn matrix_key(m: &CMatrix) -> Vec<u64> {
    let mut key = Vec::with_capacity(1 + 2 * m.n() * m.n());
    key.push(m.n() as u64);
    key.extend(m.as_dmatrix().iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]));
    key
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Certified `w(m)` at tolerance `1e-10 * ||m||_F`, memoised.
    pub fn w(&self, m: &CMatrix) -> Result<Enclosure> {
        let key = matrix_key(m);
        if let Some(e) = self.cache.borrow().get(&key) {
            return Ok(e.clone());
        }
        let tol = INNER_TOLERANCE * m.frobenius_norm().max(f64::MIN_POSITIVE);
        let e = numerical_radius(m, tol)?;
        self.cache.borrow_mut().insert(key, e.clone());
        Ok(e)
    }

    pub(crate) fn wv(&self, m: &CMatrix) -> Result<Val> {
        Ok(Val::enclosure(&self.w(m)?))
    }

    pub fn evaluate(&self, id: BoundId, inputs: Inputs<'_>, params: &Params) -> Result<BoundResult> {
        let sig = id.signature();
        let shape_err = || Error::WrongInputShape { id: id.name().to_string(), expected: sig.as_str() };
        match (inputs, sig.is_single()) {
            (Inputs::Single(_), true) | (Inputs::Pair(..), false) => {}
            _ => return Err(shape_err()),
        }
        if let Inputs::Pair(a, b) = inputs {
            if a.n() != b.n() {
                return Err(Error::DimensionMismatch { left: a.n(), right: b.n() });
            }
        }
        if sig.uses_t() && !(0.0..=1.0).contains(&params.t) {
            return Err(Error::ParameterOutOfRange { name: "t", value: params.t, range: "[0, 1]" });
        }
        if sig.uses_r() && !(1.0..=2.0).contains(&params.r) {
            return Err(Error::ParameterOutOfRange { name: "r", value: params.r, range: "[1, 2]" });
        }

        let mut out = formulas::Out::default();
        let (value, upper) = match inputs {
            Inputs::Single(t) => formulas::single(self, id, t, params, &mut out)?,
            Inputs::Pair(a, b) if id.target() == Target::We => formulas::pair(self, id, a, b, params, &mut out)?,
            Inputs::Pair(x, y) => formulas::offdiag(self, id, x, y, &mut out)?,
        };
        let mut unc = value.uncertainty();
        if let Some(u) = upper {
            unc = unc.max(u.uncertainty());
            out.breakdown.insert("upper".into(), u.mid);
        }
        out.breakdown.insert("w_uncertainty".into(), unc);
        Ok(BoundResult {
            id,
            kind: id.kind(),
            target: id.target(),
            value: value.mid,
            upper: upper.map(|u| u.mid),
            breakdown: out.breakdown,
            inputs_digest: inputs_digest(inputs, id, params),
        })
    }
}

/// [`Evaluator::evaluate`] with a fresh cache.
pub fn evaluate(id: BoundId, inputs: Inputs<'_>, params: &Params) -> Result<BoundResult> {
    Evaluator::new().evaluate(id, inputs, params)
}

/// SHA-256 over the input matrices (dimension and IEEE bits of every entry)
/// and whichever parameters the id reads.
pub fn inputs_digest(inputs: Inputs<'_>, id: BoundId, params: &Params) -> String {
    let mut h = Sha256::new();
    let mut feed = |m: &CMatrix| {
        h.update((m.n() as u64).to_le_bytes());
        for z in m.as_dmatrix().iter() {
            h.update(z.re.to_le_bytes());
            h.update(z.im.to_le_bytes());
        }
    };
    match inputs {
        Inputs::Single(t) => feed(t),
        Inputs::Pair(a, b) => {
            feed(a);
            feed(b);
        }
    }
    let sig = id.signature();
    if sig.uses_t() {
        h.update(b"t");
        h.update(params.t.to_le_bytes());
    }
    if sig.uses_r() {
        h.update(b"r");
        h.update(params.r.to_le_bytes());
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests;
