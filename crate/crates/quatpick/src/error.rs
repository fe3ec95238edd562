use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular to working precision (pivot {index})")]
    Singular { index: usize },
    #[error("series diverges: |a|·|b| = {0} ≥ 1")]
    Divergent(f64),
    #[error("series is not star-invertible: |f₀| = {0}")]
    NotInvertible(f64),
    #[error("pole in pointwise evaluation: {0}")]
    Pole(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degenerate interpolation data: {0}")]
    DegenerateData(String),
    #[error("parameter is not in the Schur class: {0}")]
    InvalidParameter(String),
    #[error("rank or sphere assumption violated: {0}")]
    Assumption(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
