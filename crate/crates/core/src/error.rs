use thiserror::Error;

/// Errors produced by the numerical kernels and the inequality checkers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds bound {bound:.3e}")]
    NotHermitian { defect: f64, bound: f64 },

    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:.6e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("map has no Kraus form: {0}")]
    NoKrausForm(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
