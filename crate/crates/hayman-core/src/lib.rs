//! Exact-arithmetic classification of the transcendental meromorphic
//! solutions of Hayman's equation
//!
//! ```text
//! w''w - w'^2 + a w'w + b w^2 = alpha w + beta w' + gamma
//! ```
//!
//! with rational-function coefficients, together with order/hyper-order
//! analysis and a numeric series verifier. The crate is `no_std` (alloc
//! required); IO, parsing and reporting live in the companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod classify;
pub mod error;
pub mod growth;
pub mod linalg;
pub mod poly;
pub mod ratfunc;
pub mod resultant;
pub mod series;
pub mod toolkit;

/// Arbitrary-precision rational scalar.
pub type Q = num_rational::BigRational;

pub use num_complex::Complex64;

/// Shorthand for small integer rationals.
pub fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Rational `n/d`.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Lossy conversion for the numeric verifier.
pub fn q_to_f64(q: &Q) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        // Fall back to a ratio of leading digits for out-of-range parts.
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}
