//! Error type shared by every module.

use thiserror::Error;

/// Failures raised by the engine. Sampling-related variants are
/// recoverable by resampling with a fresh seed.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HiggsError {
    /// Malformed or out-of-range input (bad partition, unsorted twists, …).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A Higgs field failed the nilpotency test.
    #[error("Higgs field is not nilpotent")]
    NotNilpotent,
    /// A sampled quotient showed a non-generic torsion shape; resample.
    #[error("non-generic sample: {0}")]
    NotGeneric(String),
    /// Requested more sections than `rk_k` of the kernel allows.
    #[error("rank too small: requested {requested} sections but rk_k = {available}")]
    RankTooSmall { requested: usize, available: usize },
    /// Not enough rational points for distinct torsion supports.
    #[error("field F_{q} too small for {needed} distinct points")]
    FieldTooSmall { q: u64, needed: usize },
    /// Finite-field counts do not fit a single polynomial in q.
    #[error("point counts do not fit a polynomial of degree ≤ {bound}: {detail}")]
    InterpolationInconsistent { bound: usize, detail: String },
    /// Enumeration would exceed the configured budget.
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    /// The word shape is outside what the point-count oracle enumerates.
    #[error("unsupported word shape: {0}")]
    UnsupportedWord(String),
    /// Bounded search for a crystal preimage found nothing.
    #[error("search exhausted for {0}; increase the search radius")]
    SearchExhausted(String),
    /// Bounded search found several preimages (a sampling fault).
    #[error("preimage not unique for {0}")]
    NotUnique(String),
    /// No path to the empty component above the given floor.
    #[error("no path to the empty component within floor {0}")]
    NoPathWithinFloor(i64),
    /// A vector is not in the span of the ordered basis.
    #[error("element not in the span of the ordered basis")]
    NotInSpan,
    /// Repeated resampling never produced a generic sample.
    #[error("sampling failed after {attempts} attempts: {last}")]
    SamplingExhausted { attempts: usize, last: String },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, HiggsError>;
