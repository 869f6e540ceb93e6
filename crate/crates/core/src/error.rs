use thiserror::Error;

/// Errors raised by the summation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A compactly supported kernel does not fit inside one period.
    #[error("support of width {width} does not fit in one period 2π")]
    SupportExceedsPeriod { width: f64 },

    /// Requested harmonics cannot be resolved on the sample grid.
    #[error("aliasing: N = {order} requires more than {samples} samples (N < M/2)")]
    Aliasing { order: usize, samples: usize },

    /// `t0` is not a recorded jump of the function.
    #[error("t = {0} is not a recorded jump of the function")]
    NotAJump(f64),

    /// The function cannot be evaluated pointwise.
    #[error("function cannot be evaluated pointwise: {0}")]
    Unresolvable(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
