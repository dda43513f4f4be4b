use thiserror::Error;

/// Errors raised by the evaluation library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A parameter is outside the domain of the requested operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The exponent `r` does not match the parity class of the symmetric function.
    #[error("parity mismatch: r = {r} but the symmetric function is {parity}")]
    ParityMismatch { r: u32, parity: &'static str },

    /// The rational function h_r has a pole at t = 1.
    #[error("h_r has a pole at t = 1")]
    Pole,

    /// A work budget (term count, coefficient size) would be exceeded.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A square root of a negative number was requested.
    #[error("negative square-root argument in exact constant")]
    NegativeSqrt,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
