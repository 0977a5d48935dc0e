use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: asymmetry {asymmetry:e} exceeds {tolerance:e}")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {min_eigenvalue:e} below -{tolerance:e}")]
    NotPsd { min_eigenvalue: f64, tolerance: f64 },

    #[error("iteration failed to converge in {0}")]
    ConvergenceFailure(&'static str),

    #[error("quadrature did not converge with {nodes} nodes (last change {last_change:e})")]
    NoConvergence { nodes: usize, last_change: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("bound `{id}` expects inputs {expected}")]
    WrongInputShape { id: String, expected: &'static str },

    #[error("parameter {name} = {value} outside {range}")]
    ParameterOutOfRange { name: &'static str, value: f64, range: &'static str },

    #[error("bound `{id}` not applicable: {reason}")]
    NotApplicable { id: String, reason: String },

    #[error("invalid ensemble spec: {0}")]
    InvalidSpec(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
