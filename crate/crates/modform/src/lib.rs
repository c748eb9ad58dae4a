//! Modular forms on `Gamma_0(N)` as exact truncated q-expansions.
//!
//! The crate supplies four layers. [`qexp`] holds the basic series
//! arithmetic over `Q`. [`eisenstein`] produces the quasi-modular `E_2`,
//! the level-one `E_4`, `E_6`, the weight-two Eisenstein series on
//! `Gamma_0(N)`, and the Serre derivative and first Rankin-Cohen bracket.
//! [`spaces`] computes dimensions, Sturm bounds, and echelonized bases of
//! the weight-two spaces from modular symbols. [`graded`] assembles a
//! generating set for the even-weight graded ring in weight at most six
//! and expresses forms in exact monomial coordinates. [`newforms`] wraps
//! Hecke eigenforms as serializable coefficient records with
//! Atkin-Lehner data and ordinarity tests.

pub mod eisenstein;
pub mod graded;
pub mod nearly;
pub mod newforms;
pub mod qexp;
pub mod spaces;

pub use graded::{GradedPoly, GradedRing, Generator};
pub use nearly::NearlyHolomorphic;
pub use newforms::{load_newform, LoadOptions, NewformRecord};
pub use qexp::QExpansion;

use num_bigint::BigInt;

/// Errors produced while building spaces, rings, or newform records.
#[derive(Debug, thiserror::Error)]
pub enum ModformError {
    #[error("malformed newform label `{0}`")]
    BadLabel(String),
    #[error("label `{0}` requests orbit {1} but the level-{2} newspace has only {3} orbits")]
    NoSuchOrbit(String, usize, u64, usize),
    #[error("only weight-two trivial-character newforms are supported, got `{0}`")]
    UnsupportedLabel(String),
    #[error("level {0} is not squarefree or an odd prime square; weight-two Eisenstein completion is not implemented for it")]
    UnsupportedLevel(u64),
    #[error("weight-{weight} candidates span rank {achieved} but the space has dimension {needed}")]
    RankDeficient {
        weight: i64,
        achieved: usize,
        needed: usize,
    },
    #[error("series lies outside the span of the weight-{weight} monomials (residual starts at q^{residual_from})")]
    NotInSpan { weight: i64, residual_from: usize },
    #[error("series has order {have} but the computation needs order {need}")]
    OrderTooSmall { have: usize, need: usize },
    #[error("coefficient file holds {have} coefficients but {need} were requested")]
    InsufficientCoefficients { have: usize, need: usize },
    #[error("invalid coefficient record: {0}")]
    BadRecord(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn big(n: i64) -> BigInt {
    BigInt::from(n)
}
