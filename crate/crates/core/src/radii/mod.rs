//! Certified enclosures of `w(T)` and `w_e(B, C)`, plus sampling oracles
//! that approach both values from below.
//!
//! Both radii are maxima of a support function. For Hermitian generators
//! `H_1, .., H_d` let `h(u) = λ_max(Σ u_i H_i)`; then
//!
//! * `w(T) = max_{|u| = 1} h(u)` with generators `(Re T, Im T)`,
//! * `w_e(B, C) = max_{|u| = 1} h(u)` with generators
//!   `(Re B, Im B, Re C, Im C)`.
//!
//! `h` is convex and positively homogeneous, so the linear interpolant of
//! `h` through the corners of any simplicial cone of directions dominates
//! `h` on that cone. That gives a certified upper bound per cell; every
//! evaluation also yields an attained value `|⟨Tx, x⟩|` (resp. its
//! Euclidean analogue), which is the certified lower bound.

mod euclidean;
mod grading;
mod oracle;
mod rotation;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use euclidean::euclidean_radius;
pub use oracle::{w_oracle, we_oracle};
pub use rotation::numerical_radius;

use crate::error::{Error, Result};
use crate::matcore::CMatrix;

/// Where the lower end of an enclosure is attained.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Unit vector `x`, entries as `[re, im]`.
    pub vector: Vec<[f64; 2]>,
    /// `[θ]` for `w`, `[s, φ]` for `w_e`.
    pub angles: Vec<f64>,
}

impl Witness {
    pub(crate) fn from_vector(x: &nalgebra::DVector<Complex64>, angles: Vec<f64>) -> Self {
        Self { vector: x.iter().map(|z| [z.re, z.im]).collect(), angles }
    }

    pub fn to_vector(&self) -> nalgebra::DVector<Complex64> {
        nalgebra::DVector::from_iterator(self.vector.len(), self.vector.iter().map(|p| Complex64::new(p[0], p[1])))
    }
}

/// Certified interval `[lower, upper]` for a radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Enclosure {
    pub lower: f64,
    pub upper: f64,
    pub tol_requested: f64,
    pub evaluations: usize,
    pub witness: Witness,
}

impl Enclosure {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64, slack: f64) -> bool {
        value >= self.lower - slack && value <= self.upper + slack
    }
}

pub(crate) fn check_tolerance(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    Ok(())
}

/// `|⟨Tx, x⟩|` at the witness vector.
pub fn w_objective(t: &CMatrix, x: &nalgebra::DVector<Complex64>) -> f64 {
    t.quadratic_form(x).norm()
}

/// `sqrt(|⟨Bx, x⟩|² + |⟨Cx, x⟩|²)` at `x`.
pub fn we_objective(b: &CMatrix, c: &CMatrix, x: &nalgebra::DVector<Complex64>) -> f64 {
    b.quadratic_form(x).norm().hypot(c.quadratic_form(x).norm())
}

/// Default enclosure tolerance `1e-8 * max(1, scale)`.
pub fn default_tolerance(scale: f64) -> f64 {
    1e-8 * scale.max(1.0)
}
