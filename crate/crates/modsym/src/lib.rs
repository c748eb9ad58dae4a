//! Modular symbols for Γ₀(N) in weight 2: the Manin symbol presentation,
//! Hecke and Atkin-Lehner operators, newform orbit discovery, eigensymbols
//! with values in the Hecke eigenvalue field, overconvergent lifting, and
//! p-adic L-series.

pub mod hecke;
pub mod newforms;
pub mod oms;
pub mod p1;
pub mod space;

pub use newforms::{decompose, EigenSymbol, NewformDecomposition};
pub use oms::{
    mtt_series, overconvergent_lift, padic_l_series, plus_symbol_data, plus_symbol_sum,
    OverconvergentSymbol, PadicLSeries,
};
pub use p1::P1;
pub use space::{Cusp, ManinSymbolSpace};

#[derive(Debug, thiserror::Error)]
pub enum ModSymError {
    #[error("eigenspace for orbit {orbit} at level {level} has dimension {dim}, expected 1")]
    EigenspaceDimension { level: u64, orbit: usize, dim: usize },
    #[error("orbit {orbit} at level {level} has eigenvalue field of degree {degree}, beyond the supported range")]
    FieldDegree { level: u64, orbit: usize, degree: usize },
    #[error("the form is not ordinary at {p} under the chosen embedding at level {level}")]
    NotOrdinary { level: u64, p: u64 },
    #[error(transparent)]
    Arith(#[from] chabauty_arith::ArithError),
}
