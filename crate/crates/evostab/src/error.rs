//! Error type shared by the whole crate.

use thiserror::Error;

/// Everything that can go wrong while building caches, evaluating norms or
/// assembling certificates. Construction-time validation is strict so that
/// the numeric kernels can stay assertion-free.
#[derive(Debug, Error)]
pub enum Error {
    /// A family definition or input window contained a NaN/inf entry, or a
    /// cached product overflowed during construction.
    #[error("non-finite value while {context} (index {index})")]
    NonFinite { context: &'static str, index: usize },

    /// Scalar and diagonal families are kept in log-magnitude form, which
    /// cannot represent a zero step; use a matrix-list family for nilpotent
    /// dynamics.
    #[error("zero step entry at index {index}; log-domain families must have nonzero steps")]
    ZeroStep { index: usize },

    /// Vector or matrix dimensions do not agree.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// An `(m, n)` query left the cached triangle `0 <= n <= m <= N`.
    #[error("evolution index out of range: m = {m}, n = {n}, horizon = {horizon}")]
    IndexOutOfRange { m: usize, n: usize, horizon: usize },

    /// A matrix-list family has fewer steps than the requested horizon.
    #[error("family provides {available} steps but horizon {horizon} needs that many")]
    NotEnoughSteps { available: usize, horizon: usize },

    /// Slot 0 of an input window must vanish for generator solves and
    /// membership questions.
    #[error("window slot 0 must be zero ({context})")]
    NonzeroInitialSlot { context: &'static str },

    /// A parameter failed its documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The window ends before the quantity of interest settles; enlarging
    /// the horizon may resolve it.
    #[error("inconclusive (horizon too small): {0}")]
    HorizonTooSmall(String),

    /// The inverse-norm upper bound diverged on this window, so no decay
    /// certificate can be issued from it.
    #[error("not certifiable on this window: {0}")]
    NotCertifiable(String),

    /// Dense cache memory guard (the triangle is quadratic in the horizon).
    #[error("dense cache would need about {bytes} bytes; lower the horizon")]
    CacheTooLarge { bytes: u128 },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
