//! Exact arithmetic substrate for the workspace.
//!
//! Provides the number types every other crate builds on:
//!
//! * [`padic::Padic`] — capped-absolute-precision p-adic numbers (p ≥ 3),
//!   with Hensel square roots, (p−1)/2-th roots, Teichmüller lifts,
//!   logarithm and exponential.
//! * [`unram::UnramElem`] — elements of the unramified extension of Q_p of
//!   degree ≤ 3, in a fixed polynomial basis.
//! * [`numfield::NfElem`] — elements of Q, an imaginary quadratic field, or a
//!   totally real field of degree ≤ 3, with exact rational coordinates, plus
//!   [`numfield::BiElem`] for the compositum K·E of an imaginary quadratic K
//!   and a totally real E.
//! * [`bigfloat::BigFloat`] / [`bigcomplex::BigComplex`] — arbitrary-precision
//!   binary floating point with the transcendental functions needed for
//!   period and L-value computations (exp, ln, sin/cos, atan, Γ, AGM).
//! * [`linalg`] — exact dense and sparse linear algebra over any
//!   [`linalg::Field`].
//! * [`lll`] — integral LLL reduction and algebraic-number recognition.
//! * [`rubin::rubin_coefficients`] — the finite-difference extrapolation
//!   coefficients c_j = Σ_{i=j}^{B} (−1)^{j−1} C(i−1, j−1).
//!
//! All values are immutable and all operations are pure, so everything here
//! is safe to share across threads without coordination.

pub mod bigcomplex;
pub mod bigfloat;
pub mod linalg;
pub mod lll;
pub mod numfield;
pub mod padic;
pub mod primes;
pub mod rubin;
pub mod unram;

pub use num_bigint::{BigInt, BigUint, Sign};
pub use num_rational::BigRational;

use thiserror::Error;

/// Errors raised by the arithmetic substrate.
///
/// Recognition and precision failures are first-class errors: callers must
/// handle them, the library never silently guesses.
#[derive(Debug, Error)]
pub enum ArithError {
    #[error("element is not a square: {0}")]
    NotASquare(String),
    #[error("residue choice {choice} does not match a ≡ {actual} (mod {p})")]
    BadResidueChoice { choice: u64, actual: u64, p: u64 },
    #[error("no {n}-th root with the requested residue exists")]
    NoRoot { n: u64 },
    #[error("division by zero (or by a value indistinguishable from zero at precision O({p}^{prec}))")]
    DivisionByZero { p: u64, prec: i64 },
    #[error("incompatible primes or precision contexts: {0}")]
    Incompatible(String),
    #[error("embedding image does not satisfy the minimal polynomial: residual valuation {residual} < required {required}")]
    BadEmbedding { residual: i64, required: i64 },
    #[error("algebraic recognition failed: best residual {residual} exceeds tolerance {tolerance} (degree ≤ {degree}, denominator ≤ {denom_bound})")]
    RecognitionFailed {
        residual: String,
        tolerance: String,
        degree: usize,
        denom_bound: String,
    },
    #[error("precision underflow: {0}")]
    Precision(String),
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, ArithError>;
