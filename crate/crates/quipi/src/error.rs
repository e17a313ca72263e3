use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{what} {size} exceeds limit {limit}")]
    LimitExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("bond distance {requested} not in table; nearest available: {nearest}")]
    MissingBond { requested: f64, nearest: String },
    #[error("shift leaves a non-positive eigenvalue ({min_eigenvalue})")]
    InvalidShift { min_eigenvalue: f64 },
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("projection failed: residue norm is zero")]
    ProjectionFailure,
    #[error("quadrature did not converge (error estimate {0:e})")]
    Quadrature(f64),
    #[error("root finding failed (polynomial residual {0:e})")]
    RootFinding(f64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short stable identifier, used by the CLI's one-line error output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::LimitExceeded { .. } => "limit_exceeded",
            Error::MissingBond { .. } => "missing_bond",
            Error::InvalidShift { .. } => "invalid_shift",
            Error::NotNormalized(_) => "not_normalized",
            Error::ProjectionFailure => "projection_failure",
            Error::Quadrature(_) => "quadrature",
            Error::RootFinding(_) => "root_finding",
            Error::Unsupported(_) => "unsupported",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
        }
    }
}
