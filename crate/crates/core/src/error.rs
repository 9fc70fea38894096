use thiserror::Error;

/// Errors raised by the workbench.
///
/// Each variant belongs to one of four families (see [`ErrorKind`]) which the
/// command-line frontend maps to process exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zero polynomial has all roots")]
    ZeroPolynomial,

    #[error("zero operator")]
    ZeroOperator,

    #[error("indicial equation undefined at irregular singularity {point}")]
    IrregularSingularity { point: String },

    #[error("point {point} is singular")]
    SingularPoint { point: String },

    #[error("math domain error: {0}")]
    Domain(String),

    #[error("root finding did not converge (residual {residual:e})")]
    RootsDidNotConverge { residual: f64 },

    #[error("analytic continuation failed near {location}: {message}")]
    Continuation { location: String, message: String },

    #[error("eigenvalue {eigenvalue} is not quasi-unipotent within tolerance")]
    NotQuasiUnipotent { eigenvalue: String },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("unknown corpus entry `{0}`")]
    UnknownCorpusEntry(String),

    #[error("verification mismatch: {0}")]
    Verification(String),
}

/// Coarse classification of an [`Error`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed text, JSON or command arguments.
    Usage,
    /// The mathematics does not apply (irregular point, zero operator, ...).
    Domain,
    /// A numerical procedure failed to reach its tolerance.
    Numeric,
    /// Recomputed data disagrees with stored expectations.
    Verification,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Syntax { .. }
            | Error::Schema { .. }
            | Error::InvalidArgument(_)
            | Error::UnknownCorpusEntry(_) => ErrorKind::Usage,
            Error::ZeroPolynomial
            | Error::ZeroOperator
            | Error::IrregularSingularity { .. }
            | Error::SingularPoint { .. }
            | Error::Domain(_) => ErrorKind::Domain,
            Error::RootsDidNotConverge { .. }
            | Error::Continuation { .. }
            | Error::NotQuasiUnipotent { .. }
            | Error::Numeric(_) => ErrorKind::Numeric,
            Error::Verification(_) => ErrorKind::Verification,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
