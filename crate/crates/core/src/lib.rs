//! Exact-arithmetic toolkit for deciding whether a candidate Néron–Severi
//! intersection matrix of a projective K3 surface forces every integral
//! pseudoeffective divisor to have an integral Zariski decomposition.
//!
//! The pipeline runs entirely over arbitrary-precision integers and
//! rationals: p-adic Hilbert symbols ([`hilbert`]), local invariants and
//! Hasse-Minkowski isotropy of quadratic forms ([`quadform`]), exact
//! Zariski-Fujita decomposition ([`zariski`]), the six-case lattice
//! classifier ([`classify`]), and brute-force oracles that cross-validate
//! every analytic verdict ([`oracle`]).
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod arith;
pub mod classify;
pub mod hilbert;
pub mod oracle;
pub mod quadform;
pub mod selfcheck;
pub mod zariski;

use thiserror::Error as ThisError;

/// Arbitrary-precision signed integer.
pub type Int = num_bigint::BigInt;
/// Normalized arbitrary-precision fraction (denominator positive, reduced).
pub type Rat = num_rational::BigRational;

/// Convenience constructor for a reduced rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Convenience constructor for an integer rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("zero input where a nonzero value is required")]
    ZeroInput,
    #[error("{0} is not prime")]
    NotPrime(Int),
    #[error("degenerate quadratic form (zero discriminant)")]
    Degenerate,
    #[error("divisor has a negative coefficient; only effective combinations are accepted")]
    NotEffective,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
