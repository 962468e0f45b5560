//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid detector setting {0}: must be 1, 2, or 3")]
    InvalidSetting(u8),

    #[error("invalid setting-pair index {0}: must be 1..=9")]
    InvalidPairIndex(usize),

    #[error("cannot parse {0:?} as a setting pair (expected e.g. \"23\")")]
    ParsePair(String),

    #[error("cannot parse {0:?} as a color (expected \"R\" or \"G\")")]
    ParseColor(String),

    #[error("cannot parse {0:?} as an instruction set (expected e.g. \"RRG\")")]
    ParseInstructionSet(String),

    #[error("cannot parse distribution literal: {0}")]
    ParseDistribution(String),

    #[error("distribution is empty (total weight is zero)")]
    EmptyDistribution,

    #[error("distribution weight for {set} is negative: {weight}")]
    NegativeWeight { set: String, weight: String },

    #[error("number of trials must be at least 1")]
    ZeroTrials,

    #[error("p_minus must lie in [0, 1], got {0}")]
    InvalidProbability(f64),

    #[error("unknown functional-relation label {0:?} (expected one of the twelve row-pair digraphs, e.g. \"23\")")]
    UnknownRelation(String),

    #[error("domain value {0} is malformed: must be -1 or +1")]
    InvalidDomainValue(i8),

    #[error("inconsistent tally: {0}")]
    InconsistentTally(String),

    #[error("ratio undefined: distribution contains no two-color vectors")]
    RatioUndefined,

    #[error("hull target component for case (a) pair {pair} is {value}, must be exactly 1")]
    CaseATargetNotUnit { pair: String, value: String },

    #[error("hull vertex set is degenerate: equality system is underdetermined")]
    DegenerateVertices,

    #[error("csv: {0}")]
    Csv(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
