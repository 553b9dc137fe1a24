//! Decides vanishing of twisted Witt groups of split flag varieties G/P over
//! algebraically closed fields, entirely through exact integer/rational
//! linear algebra on Dynkin diagram data.
//!
//! The pipeline: parse a diagram and a parabolic subset Θ, compute the twist
//! vectors of the self-dual simple roots, reduce mod 2, and answer vanishing
//! questions as GF(2) linear algebra.  Independent oracles (Weyl-group
//! dominance walks, brute-force monomial enumeration, Tate cohomology of
//! K₀-modules) cross-check every formula-driven route.
//!
//! All arithmetic is exact: `i64`/`i128` integers, `Ratio<i64>` rationals,
//! bit-packed GF(2) vectors.  No floats anywhere.

pub mod dynkin;
pub mod marks;
pub mod gf2;
pub mod repring;
pub mod snf;
pub mod sweep;
pub mod tate;
pub mod twists;
pub mod weyl;

use thiserror::Error;

/// Crate-wide error type.  Internal invariant violations panic instead;
/// anything here is reachable from bad user input or undersized windows.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown node id `{0}`")]
    UnknownNode(String),
    #[error("rank out of range: {0}")]
    RankRange(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("iteration cap exceeded in {0}")]
    IterationCap(&'static str),
    #[error("support cap exceeded in {0}")]
    SupportCap(&'static str),
    #[error("non-integral twist entry for node {0} (classification bug?)")]
    NonIntegralTwist(String),
    #[error("marking rule has no case for {0}")]
    UnreachableRule(String),
    #[error("type A single-component ambient required, got {0}")]
    NotTypeA(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("invalid twist unit: {0}")]
    InvalidTwistUnit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
