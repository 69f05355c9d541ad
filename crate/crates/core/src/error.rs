use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("empty operand: {0}")]
    EmptyOperand(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("enumeration budget exceeded for {what}: needs {needed}, cap is {cap}")]
    BudgetExceeded {
        what: &'static str,
        needed: String,
        cap: u64,
    },

    #[error("the zero polynomial is not accepted here")]
    ZeroPolynomial,

    #[error("polynomial is not degenerate (d(F) = n = {0})")]
    NonDegenerate(usize),

    #[error("polynomial is degenerate (d(F) = {rank} < n = {nvars})")]
    Degenerate { rank: usize, nvars: usize },

    #[error("set contains zero, but a subset of the nonzero rationals is required")]
    ContainsZero,

    #[error("exponent basis is singular")]
    SingularBasis,

    #[error("could not factor {cofactor} within the factorization budget")]
    FactorizationFailed { cofactor: String },

    #[error("unit equation target must be nonzero")]
    ZeroTarget,

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub(crate) fn budget(what: &'static str, needed: impl ToString, cap: u64) -> Self {
        Error::BudgetExceeded {
            what,
            needed: needed.to_string(),
            cap,
        }
    }
}
