//! Equality cases of the lower bounds.
//!
//! Each check evaluates a premise ("the bound is attained") and a consequent
//! at relative tolerance `1e-8`, and records the residuals of both.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bounds::Evaluator;
use crate::error::Result;
use crate::matcore::{spectral_norm, CMatrix};
use crate::radii::{euclidean_radius, Enclosure};
use crate::transforms::cartesian;

/// Relative tolerance of every equality test.
pub const EQUALITY_TOLERANCE: f64 = 1e-8;

/// What is known about a condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    /// premise ⇒ consequent; the converse fails in general.
    Implication,
    /// premise ⇔ consequent.
    Biconditional,
    /// premise ⇒ consequent; the converse is not settled.
    OpenConverse,
    /// Not an implication: `consequent` reports whether a chain of
    /// inequalities is tight at every step.
    Tightness,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EqualityCheck {
    pub id: String,
    pub claim: Claim,
    pub premise: bool,
    pub consequent: bool,
    /// `premise ⇒ consequent` (for tightness checks, the tightness itself).
    pub holds: bool,
    /// `consequent ⇒ premise`.
    pub converse_holds: bool,
    pub residuals: BTreeMap<String, f64>,
}

impl EqualityCheck {
    /// The check contradicts what is claimed about it.
    pub fn contradicts_claim(&self) -> bool {
        match self.claim {
            Claim::Implication | Claim::OpenConverse => !self.holds,
            Claim::Biconditional => !self.holds || !self.converse_holds,
            Claim::Tightness => false,
        }
    }

    /// A consequent without its premise where the converse is open.
    pub fn converse_counterexample(&self) -> bool {
        self.claim == Claim::OpenConverse && !self.converse_holds
    }
}

#[derive(Clone, Copy, Debug)]
pub enum EqualityInput<'a> {
    Single(&'a CMatrix),
    Pair(&'a CMatrix, &'a CMatrix),
}

struct Builder {
    tol: f64,
    residuals: BTreeMap<String, f64>,
}

impl Builder {
    fn new(scale: f64) -> Self {
        Self { tol: EQUALITY_TOLERANCE * scale.max(f64::MIN_POSITIVE), residuals: BTreeMap::new() }
    }

    /// Records `|a - b|` and tests it against the tolerance.
    fn equal(&mut self, name: &str, a: f64, b: f64) -> bool {
        let r = (a - b).abs();
        self.residuals.insert(name.to_string(), r);
        r <= self.tol
    }

    fn finish(self, id: &str, claim: Claim, premise: bool, consequent: bool) -> EqualityCheck {
        let holds = if claim == Claim::Tightness { consequent } else { !premise || consequent };
        EqualityCheck {
            id: id.to_string(),
            claim,
            premise,
            consequent,
            holds,
            converse_holds: !consequent || premise,
            residuals: self.residuals,
        }
    }
}

/// All conditions for one input. Conditions whose inner radii fail to
/// compute are left out.
pub fn check_equality_conditions(input: EqualityInput<'_>) -> Vec<EqualityCheck> {
    let ev = Evaluator::new();
    let out = match input {
        EqualityInput::Single(t) => single_checks(&ev, t),
        EqualityInput::Pair(b, c) => {
            let scale = b.frobenius_norm().hypot(c.frobenius_norm());
            euclidean_radius(b, c, 1e-10 * scale.max(f64::MIN_POSITIVE)).and_then(|we| pair_checks(&ev, b, c, &we))
        }
    };
    out.unwrap_or_default()
}

pub(crate) fn pair_checks(ev: &Evaluator, b: &CMatrix, c: &CMatrix, we: &Enclosure) -> Result<Vec<EqualityCheck>> {
    let scale = b.frobenius_norm().hypot(c.frobenius_norm());
    let we = we.midpoint();
    let wb = ev.w(b)?.midpoint();
    let wc = ev.w(c)?.midpoint();
    let wsq = ev.w(&(b * b + c * c))?.midpoint();
    let mut checks = Vec::with_capacity(2);

    let dragomir = (0.5 * wsq).sqrt();
    let mut k = Builder::new(scale);
    let premise = k.equal("premise", we, dragomir);
    let c1 = k.equal("consequent_w_B", wb, dragomir);
    let c2 = k.equal("consequent_w_C", wc, dragomir);
    checks.push(k.finish("we_lower_dragomir_equality", Claim::Implication, premise, c1 && c2));

    let gap = (0.5 * wsq + 0.5 * (wb * wb - wc * wc).abs()).sqrt();
    // the square identity is compared in units of the radius
    let mut k = Builder::new(scale);
    let premise = k.equal("premise", we, gap);
    let c1 = k.equal("consequent_square_sum", wsq.sqrt(), (wb * wb + wc * wc).sqrt());
    let c2 = k.equal("consequent_max", we, wb.max(wc));
    checks.push(k.finish("we_lower_21iii_equality", Claim::Biconditional, premise, c1 && c2));
    Ok(checks)
}

pub(crate) fn single_checks(ev: &Evaluator, t: &CMatrix) -> Result<Vec<EqualityCheck>> {
    let scale = t.frobenius_norm();
    let w = ev.w(t)?.midpoint();
    let (r, i) = cartesian(t);
    let ts = t.adjoint();
    let (nt, nr, ni) = (spectral_norm(t), spectral_norm(&r), spectral_norm(&i));
    let n = spectral_norm(&(&ts * t + t * &ts));
    let (ns, nd) = (spectral_norm(&(&r + &i)), spectral_norm(&(&r - &i)));
    let mut checks = Vec::with_capacity(5);

    let mut k = Builder::new(scale);
    let premise = k.equal("premise", w, (0.25 * n + 0.5 * (nr * nr - ni * ni).abs()).sqrt());
    let c1 = k.equal("consequent_norm", (0.5 * n).sqrt(), (nr * nr + ni * ni).sqrt());
    let c2 = k.equal("consequent_max", w, nr.max(ni));
    checks.push(k.finish("w_lower_laa21_29_equality", Claim::Biconditional, premise, c1 && c2));

    let mut k = Builder::new(scale);
    let premise = k.equal("premise", w, (0.25 * n + 0.25 * (ns * ns - nd * nd).abs()).sqrt());
    let c1 = k.equal("consequent_norm", n.sqrt(), (ns * ns + nd * nd).sqrt());
    let c2 = k.equal("consequent_max", w, ns.max(nd) / std::f64::consts::SQRT_2);
    checks.push(k.finish("w_lower_psk1_23_equality", Claim::Biconditional, premise, c1 && c2));

    let half = 0.5 * nt;
    let (r1, r2) = ((nr - half).abs(), (ni - half).abs());
    let (q1, q2) = (nr.max(half), ni.max(half));
    let mut k = Builder::new(scale);
    let premise = k.equal("premise", w, half + 0.25 * (r1 + r2));
    let consequent = k.equal("consequent_q", q1, q2);
    checks.push(k.finish("w_lower_hks_equality", Claim::OpenConverse, premise, consequent));

    let mut k = Builder::new(scale);
    let premise = k.equal("premise", w, half + 0.5 * (nr - ni).abs());
    let c1 = k.equal("consequent_norm", nt, nr + ni);
    let c2 = k.equal("consequent_max", w, nr.max(ni));
    checks.push(k.finish("w_lower_laa21_21_equality", Claim::Biconditional, premise, c1 && c2));

    // steps of the chain from w(T) down to the refined bound
    let steps = [
        w,
        q1.max(q2),
        0.25 * nt + 0.25 * (nr + ni) + 0.25 * (r1 + r2) + 0.5 * (q1 - q2).abs(),
        half + 0.25 * (r1 + r2) + 0.5 * (q1 - q2).abs(),
        0.25 * nt + 0.25 * (nr + ni) + 0.5 * (nr - ni).abs(),
    ];
    let mut k = Builder::new(scale);
    let mut tight = true;
    for (j, pair) in steps.windows(2).enumerate() {
        tight &= k.equal(&format!("step_{}", j + 1), pair[0], pair[1]);
    }
    checks.push(k.finish("w_lower_th214_chain", Claim::Tightness, true, tight));
    Ok(checks)
}
