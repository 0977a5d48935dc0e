//! Certified enclosures of the numerical radius `w(T)` and the Euclidean
//! operator radius `w_e(B, C)` of dense complex matrices, together with a
//! registry of closed-form lower and upper bounds for both and a
//! property-verification harness over random matrix ensembles.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod harness;
pub mod matcore;
pub mod radii;
pub mod transforms;

pub use error::{Error, Result};
pub use matcore::{c64, CMatrix};
