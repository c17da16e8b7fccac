//! Error types.

use thiserror::Error;

/// Rejected input to a mean or margin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DomainError {
    /// A component is NaN or infinite.
    #[error("argument is not finite")]
    NonFinite,
    /// A component is zero or negative.
    #[error("argument must be strictly positive")]
    NonPositive,
    /// A component is subnormal.
    #[error("argument is subnormal")]
    Subnormal,
    /// `max / min` does not fit in binary64.
    #[error("ratio max(x, y) / min(x, y) overflows binary64")]
    RatioOverflow,
}

/// The hypothesis of the four-number power-sum lemma that failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LemmaError {
    /// One of `a, b, c, d` is not a positive finite real.
    #[error("lemma arguments must be positive finite reals")]
    NonPositive,
    /// `a + b <= c + d` does not hold.
    #[error("hypothesis a + b <= c + d violated")]
    SumHypothesis,
    /// `a * b >= c * d` does not hold.
    #[error("hypothesis a * b >= c * d violated")]
    ProductHypothesis,
}

/// Failure to evaluate a margin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MarginError {
    /// The inequality needs an exponent and none was given.
    #[error("inequality requires an exponent")]
    MissingExponent,
    /// An exponent was given for an inequality that has none.
    #[error("inequality does not take an exponent")]
    UnexpectedExponent,
    /// The exponent is NaN or infinite.
    #[error("exponent must be finite")]
    NonFiniteExponent,
    /// The lemma margin only exists for integer exponents.
    #[error("exponent must be an integer for this inequality")]
    NonIntegerExponent,
    /// The margin or one of its sides is not representable in binary64.
    #[error("margin is out of the binary64 range")]
    OutOfRange,
    /// Lemma precondition failed.
    #[error(transparent)]
    Lemma(#[from] LemmaError),
}

/// Failure inside the extended-precision oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OracleError {
    /// Working precision outside the supported range.
    #[error("unsupported digit count {0} (supported: {min}..={max})", min = crate::oracle::MIN_DIGITS, max = crate::oracle::MAX_DIGITS)]
    UnsupportedDigits(u32),
    /// Invalid margin request.
    #[error(transparent)]
    Margin(#[from] MarginError),
    /// The arbitrary-precision backend produced NaN or an infinity.
    #[error("extended-precision arithmetic failed")]
    Arithmetic,
}

/// Failure of a search operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ExploreError {
    /// The search configuration is malformed.
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    /// Bracketing endpoints do not carry certified opposite signs.
    #[error("bracket endpoints do not have certified opposite signs")]
    SameSign,
    /// Margin evaluation failed.
    #[error(transparent)]
    Margin(#[from] MarginError),
    /// Oracle evaluation failed.
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
