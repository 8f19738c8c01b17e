//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the library.
///
/// Variant names are stable and machine-readable (see [`Error::name`]); the
/// CLI echoes them verbatim so scripts can dispatch on them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The values do not form a bijection of `1..=n`.
    #[error("not a bijection of 1..={n}: {detail}")]
    NotABijection { n: usize, detail: String },

    /// No tokens in the input text.
    #[error("empty input")]
    EmptyInput,

    /// A token could not be parsed as a positive integer.
    #[error("token {0:?} is not a positive integer")]
    InvalidToken(String),

    /// A value lies outside `1..=n`.
    #[error("value {value} outside 1..={n}")]
    ValueOutOfRange { value: usize, n: usize },

    /// An operation that needs at least one element got none.
    #[error("empty sequence")]
    EmptySequence,

    /// Exhaustive enumeration requested beyond the supported cap.
    #[error("n={n} exceeds the exhaustive-enumeration cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    /// Checked integer arithmetic overflowed.
    #[error("integer overflow in exact arithmetic")]
    Overflow,

    /// Parameters outside the domain of a formula or operation.
    #[error("domain error: {0}")]
    DomainError(String),

    /// The joint k-peak probability formula has a vanishing denominator.
    #[error("joint peak probability undefined for n-k <= 2 (n={n}, k={k})")]
    DegenerateDenominator { n: usize, k: usize },

    /// Unrecognized statistic selector.
    #[error("unknown statistic selector {0:?}")]
    InvalidSelector(String),

    /// Too few Monte Carlo samples for the requested estimate.
    #[error("{got} samples given, at least {min} required")]
    TooFewSamples { min: u64, got: u64 },

    /// Standardization impossible: the statistic has zero spread.
    #[error("standardization scale is zero (constant statistic)")]
    DegenerateScale,
}

impl Error {
    /// Stable name of the variant, e.g. `"NotABijection"`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotABijection { .. } => "NotABijection",
            Error::EmptyInput => "EmptyInput",
            Error::InvalidToken(_) => "InvalidToken",
            Error::ValueOutOfRange { .. } => "ValueOutOfRange",
            Error::EmptySequence => "EmptySequence",
            Error::TooLarge { .. } => "TooLarge",
            Error::Overflow => "Overflow",
            Error::DomainError(_) => "DomainError",
            Error::DegenerateDenominator { .. } => "DegenerateDenominator",
            Error::InvalidSelector(_) => "InvalidSelector",
            Error::TooFewSamples { .. } => "TooFewSamples",
            Error::DegenerateScale => "DegenerateScale",
        }
    }
}
