//! Combinatorics and exact arithmetic for sector renormalization of
//! rotation numbers.
//!
//! The central object is the two-branch interval map
//! `theta -> theta/(1-theta)` on `(0, 1/2]` and `theta -> (2 theta - 1)/theta`
//! on `[1/2, 1)`.  Words over the branch alphabet turn into integer matrices,
//! periodic points into quadratic surds, and the expansion rate of a word into
//! the square of the leading eigenvalue.  On top of that sit the power-triple
//! semigroup, the translation tilings of the line it indexes, and the
//! cardioid-side scaling reports.
//!
//! Everything that can be exact is exact: rationals are arbitrary-precision,
//! quadratic irrationals are `(p + q*sqrt(D))/r` with big-integer components,
//! and comparisons never round.

pub mod cardioid;
pub mod hp;
pub mod powertriple;
pub mod rotnum;
pub mod surd;
pub mod tiling;

/// Errors shared by all modules of this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("mixed surd fields: sqrt({0}) vs sqrt({1})")]
    MixedField(u64, u64),
    #[error("float comparison ambiguous: value {value} with error bound {err} straddles {pivot}")]
    Ambiguous { value: f64, err: f64, pivot: f64 },
    #[error("word does not define a hyperbolic matrix: {0}")]
    NotHyperbolic(String),
    #[error("rotation number is not periodic under the renormalization map")]
    NotPeriodic,
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("level {0} outside the configured range")]
    LevelRange(i64),
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("pullback diverges: {0}")]
    Divergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
