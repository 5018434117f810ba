//! Exact arithmetic for residue-class alternating binomial sums.
//!
//! The library computes sums of the form
//!
//! ```text
//!     sum over 0 <= k <= n, k = r (mod p^beta)  of  C(n,k) * (-1)^k * w(k)
//! ```
//!
//! for several weight families `w` (integer-valued polynomials in
//! `floor((k-r)/p^alpha)`, Bernoulli polynomial values, geometric weights,
//! gcd-scaled polynomials), together with proven lower bounds on the p-adic
//! valuation of each sum (Fleck, Weisman, Wan, and their common polynomial
//! generalization). Everything is exact: big integers and big rationals
//! throughout, no floating point anywhere.
//!
//! The [`sweep`] module drives grid verification of the bounds and produces
//! deterministic JSON reports; [`selftest`] bundles the classical identity
//! checks the bounds rest on.

pub mod arith;
pub mod bernoulli;
pub mod congruence;
pub mod poly;
pub mod selftest;
pub mod sweep;

pub use arith::{Prime, Valuation};
pub use congruence::{BoundKind, BoundReport, SumSpec, Weight};
pub use poly::IvPoly;

/// Error type shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    /// The integrality precondition `f(Z) subset Z_p` failed; reported
    /// separately from range errors so sweeps can tell the two apart.
    #[error("coefficient {index} of the weight polynomial has negative {p}-adic valuation")]
    NotZpValued { p: u64, index: usize },
    #[error("weight {weight} cannot be checked against the {bound} bound")]
    WeightMismatch { weight: String, bound: String },
    #[error("invalid config: {0}")]
    Config(String),
}

impl Error {
    /// Stable, value-free key used to group sweep skip reasons.
    pub fn reason_key(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not prime",
            Error::OutOfRange(_) => "precondition out of range",
            Error::Overflow(_) => "arithmetic overflow",
            Error::NotZpValued { .. } => "weight not Z_p-valued",
            Error::WeightMismatch { .. } => "weight/bound mismatch",
            Error::Config(_) => "invalid config",
        }
    }
}
