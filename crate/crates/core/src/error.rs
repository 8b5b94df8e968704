use thiserror::Error;

/// Errors produced by the numerical and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("moment undefined: {0}")]
    MomentUndefined(String),

    #[error("unsupported distribution pair: {0}")]
    UnsupportedPair(String),

    #[error("quadrature tolerance {tol:e} not met on [{a}, {b}]")]
    QuadratureTolerance { a: f64, b: f64, tol: f64 },

    #[error("series truncation at {nmax} terms leaves tail bound {tail:e}")]
    TruncationInsufficient { nmax: usize, tail: f64 },

    #[error("invalid horizon: {0}")]
    InvalidHorizon(String),

    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("invalid job: {0}")]
    Job(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
