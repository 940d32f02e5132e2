use thiserror::Error;

/// Errors raised by the algebra kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("empty support: the input is zero")]
    EmptySupport,

    #[error("composition requires a substituted series of positive order")]
    CompositionDomain,

    #[error("lifting precondition failed: {0}")]
    LiftingPrecondition(String),

    #[error("degenerate composition: the eliminating resultant vanishes")]
    DegenerateComposition,

    #[error("separability failure: the T-derivative vanishes on the series")]
    Separability,

    #[error("series is not regular in variable {axis} below the truncation")]
    NotRegular { axis: usize },

    #[error("empty divisor list")]
    EmptyDivisors,

    #[error("leading coefficient is not invertible")]
    NonInvertibleLeading,

    #[error("precision error: requested {requested}, available {available}")]
    Precision { requested: u64, available: u64 },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Coarse category used by the command-line front end for exit codes.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Parse { .. } | Error::UnknownVariable(_) => "parse",
            Error::Resource(_) => "resource",
            Error::Internal(_) => "internal",
            _ => "precondition",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
