use thiserror::Error;

/// Errors raised by moment evaluation, hypothesis checks and simulation setup.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("moment is not finite: {0}")]
    NonFinite(String),
    #[error("division by zero at n = {n}: {what}")]
    DivisionByZero { n: usize, what: String },
    #[error("no positive root: {0}")]
    NoRoot(String),
    #[error("operation requires an i.i.d. noise model")]
    NotIid,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("positivity violated at n = {n}: bound {bound}")]
    Positivity { n: usize, bound: f64 },
    #[error("state overflowed at step {n}")]
    Overflow { n: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("quadrature did not converge (estimated error {0:e})")]
    Quadrature(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Attaches a step index to a positivity error raised without one.
    pub(crate) fn at_index(self, n: usize) -> Self {
        match self {
            Error::Positivity { n: 0, bound } => Error::Positivity { n, bound },
            other => other,
        }
    }
}
