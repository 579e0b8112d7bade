//! Exact-arithmetic toolkit for higher modular groups.
//!
//! The crate provides integral Clifford algebras and their Clifford groups,
//! quadratic and quaternion orders, 2x2 Vahlen matrices with the associated
//! membership tests and determinants, words in the elementary generators
//! `E(x)` / `D(mu)` / `[mu, nu]` with a constructive Euclidean decomposition,
//! and finite presentations with relator verification, Smith-normal-form
//! abelianization and disjoint-generator amalgam splitting.
//!
//! Everything is computed over arbitrary-precision rationals; no floating
//! point is used anywhere.

pub mod clifford;
pub mod element;
pub mod matrix;
pub mod parse;
pub mod presentations;
pub mod rat;
pub mod rings;
pub mod snf;
pub mod units;
pub mod words;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: n = {0} vs n = {1}")]
    DimensionMismatch(u32, u32),
    #[error("context mismatch: {0} vs {1}")]
    ContextMismatch(String, String),
    #[error("generator i{0} does not exist in dimension n = {1}")]
    InvalidGenerator(u32, u32),
    #[error("dimension n = {0} outside supported range {1}..={2}")]
    DimensionOutOfRange(u32, u32, u32),
    #[error("element is not invertible in the Clifford group (a*conj(a) is not a nonzero scalar)")]
    NotInvertibleInGamma,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("element is not a vector")]
    NotAVector,
    #[error("element is not integral in its order")]
    NonIntegral,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("matrix is not a member of the required group")]
    NotAMember,
    #[error("euclidean reduction stalled on {0}; this indicates a bug or an invalid input")]
    ReductionStalled(String),
    #[error("operation not supported for context {0}")]
    UnsupportedContext(String),
    #[error("short-vector bound must be positive")]
    BoundNotPositive,
    #[error("unknown presentation kind `{0}`")]
    UnknownKind(String),
    #[error("presentation has no matrix model")]
    MissingModel,
    #[error("no image provided for generator `{0}`")]
    MissingImage(String),
    #[error("partition parts are not disjoint away from the amalgamated set")]
    PartitionNotDisjoint,
    #[error("relator `{0}` mentions generators from both factors")]
    RelatorCrossesFactors(String),
    #[error("relator mentions undeclared generator `{0}`")]
    UndeclaredGenerator(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
