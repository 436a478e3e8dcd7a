use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not Hermitian (relative residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("eigenvalue {eigenvalue} lies outside the function domain {domain}")]
    Domain { eigenvalue: f64, domain: String },

    #[error("matrix is not regular: {0}")]
    Regularity(String),

    #[error("ill-conditioned trial (condition number {0:.3e})")]
    IllConditioned(f64),

    #[error("invalid positive map: {0}")]
    MapSpec(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown inequality id `{0}`")]
    UnknownIneq(String),
}
