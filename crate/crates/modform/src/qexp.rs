//! Exact truncated q-expansions.

use crate::ModformError;
use chabauty_arith::bigcomplex::BigComplex;
use chabauty_arith::bigfloat::BigFloat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// A q-expansion `sum coeffs[n] q^n + O(q^{order+1})` with exact rational
/// coefficients, tagged with a level and a weight.
///
/// The level records the smallest `Gamma_0(N)` the series is known to live
/// on and only participates through least common multiples under
/// arithmetic. The weight is a bookkeeping tag as well: `E_2` carries
/// weight 2 even though it is only quasi-modular, and derivatives raise
/// the tag by 2 without producing a modular form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    level: u64,
    weight: i64,
    coeffs: Vec<BigRational>,
}

impl QExpansion {
    /// Wraps explicit coefficients `a_0, ..., a_order`.
    pub fn new(level: u64, weight: i64, coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a q-expansion needs at least a_0");
        assert!(level > 0, "level must be positive");
        QExpansion {
            level,
            weight,
            coeffs,
        }
    }

    /// Builds a series from integer coefficients.
    pub fn from_ints(level: u64, weight: i64, coeffs: &[i64]) -> Self {
        let coeffs = coeffs
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        QExpansion::new(level, weight, coeffs)
    }

    /// The zero series known to order `order`.
    pub fn zero(level: u64, weight: i64, order: usize) -> Self {
        QExpansion::new(level, weight, vec![BigRational::zero(); order + 1])
    }

    /// The constant series `c + O(q^{order+1})` in weight 0.
    pub fn constant(level: u64, c: BigRational, order: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); order + 1];
        coeffs[0] = c;
        QExpansion::new(level, 0, coeffs)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// Index of the last known coefficient.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `q^n`; panics past the known order.
    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero known coefficient.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Retags the weight without touching coefficients.
    pub fn with_weight(mut self, weight: i64) -> Self {
        self.weight = weight;
        self
    }

    /// Retags the level without touching coefficients.
    pub fn with_level(mut self, level: u64) -> Self {
        self.level = level;
        self
    }

    /// Drops coefficients past `order`.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(
            order <= self.order(),
            "cannot extend a series by truncation: have order {}, asked for {}",
            self.order(),
            order
        );
        QExpansion::new(
            self.level,
            self.weight,
            self.coeffs[..=order].to_vec(),
        )
    }

    /// Checks the series is known at least to `order`.
    pub fn require_order(&self, order: usize) -> Result<(), ModformError> {
        if self.order() < order {
            Err(ModformError::OrderTooSmall {
                have: self.order(),
                need: order,
            })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &QExpansion) -> QExpansion {
        assert_eq!(
            self.weight, other.weight,
            "cannot add weight {} to weight {}",
            self.weight, other.weight
        );
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|n| &self.coeffs[n] + &other.coeffs[n])
            .collect();
        QExpansion::new(self.level.lcm(&other.level), self.weight, coeffs)
    }

    pub fn neg(&self) -> QExpansion {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        QExpansion::new(self.level, self.weight, coeffs)
    }

    pub fn sub(&self, other: &QExpansion) -> QExpansion {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> QExpansion {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        QExpansion::new(self.level, self.weight, coeffs)
    }

    pub fn scale_int(&self, c: i64) -> QExpansion {
        self.scale(&BigRational::from_integer(BigInt::from(c)))
    }

    /// Product of two truncated series.
    ///
    /// The product of `f = O(q^{v_f}) (+ tail known to o_f)` and `g` is
    /// trustworthy to order `min(o_f + v_g, o_g + v_f)`: unknown
    /// coefficients of one factor first matter when multiplied by the
    /// lowest nonzero coefficient of the other.
    pub fn mul(&self, other: &QExpansion) -> QExpansion {
        let vf = self.first_nonzero().unwrap_or(self.order() + 1);
        let vg = other.first_nonzero().unwrap_or(other.order() + 1);
        let order = (self.order() + vg).min(other.order() + vf);
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > order {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        QExpansion::new(
            self.level.lcm(&other.level),
            self.weight + other.weight,
            coeffs,
        )
    }

    pub fn pow(&self, e: u32) -> QExpansion {
        let mut out = QExpansion::constant(self.level, BigRational::one(), self.order());
        for _ in 0..e {
            out = out.mul(self);
        }
        if e == 0 {
            out
        } else {
            out.with_weight(self.weight * e as i64)
        }
    }

    /// The operator `q d/dq`, raising the weight tag by 2.
    pub fn derive(&self) -> QExpansion {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| a * BigRational::from_integer(BigInt::from(n)))
            .collect();
        QExpansion::new(self.level, self.weight + 2, coeffs)
    }

    /// Zeroes every coefficient with index divisible by `p`.
    pub fn p_deplete(&self, p: u64) -> QExpansion {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| {
                if (n as u64) % p == 0 {
                    BigRational::zero()
                } else {
                    a.clone()
                }
            })
            .collect();
        QExpansion::new(self.level, self.weight, coeffs)
    }

    /// The map `f(q) -> f(q^d)`, multiplying the level by `d`.
    pub fn embed(&self, d: u64) -> QExpansion {
        assert!(d > 0);
        let order = self.order() * d as usize + d as usize - 1;
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (n, a) in self.coeffs.iter().enumerate() {
            coeffs[n * d as usize] = a.clone();
        }
        QExpansion::new(self.level * d, self.weight, coeffs)
    }

    /// Evaluates the truncated polynomial at a complex point by Horner's
    /// rule. The caller is responsible for choosing an order that makes
    /// the tail negligible at `|q|`.
    pub fn eval_complex(&self, q: &BigComplex) -> BigComplex {
        let prec = q.prec();
        let mut acc = BigComplex::from_real(BigFloat::zero(prec));
        for a in self.coeffs.iter().rev() {
            acc = acc.mul(q);
            if !a.is_zero() {
                acc = acc.add(&BigComplex::from_real(BigFloat::from_rational(a, prec)));
            }
        }
        acc
    }

    /// Compares the overlapping known prefixes of two series.
    pub fn agrees_with(&self, other: &QExpansion) -> bool {
        let order = self.order().min(other.order());
        (0..=order).all(|n| self.coeffs[n] == other.coeffs[n])
    }
}

impl fmt::Display for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            match n {
                0 => write!(f, "{}", a)?,
                1 => write!(f, "{}*q", a)?,
                _ => write!(f, "{}*q^{}", a, n)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(coeffs: &[i64]) -> QExpansion {
        QExpansion::from_ints(1, 2, coeffs)
    }

    #[test]
    fn product_order_tracks_valuations() {
        let f = series(&[0, 1, 2, 3, 4]);
        let g = series(&[0, 0, 1, 1, 1, 1, 1]);
        let h = f.mul(&g);
        assert_eq!(h.order(), 5.min(4 + 2).min(6 + 1));
        assert!(h.coeff(3).is_zero() == false);
        assert_eq!(*h.coeff(3), BigRational::from_integer(BigInt::from(1)));
        assert_eq!(*h.coeff(4), BigRational::from_integer(BigInt::from(3)));
        assert_eq!(*h.coeff(5), BigRational::from_integer(BigInt::from(6)));
    }

    #[test]
    fn depletion_zeroes_multiples() {
        let f = series(&[1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]);
        let g = f.p_deplete(3);
        for n in 0..=10 {
            assert_eq!(g.coeff(n).is_zero(), n % 3 == 0, "index {}", n);
        }
    }

    #[test]
    fn embedding_spaces_out_coefficients() {
        let f = series(&[1, 2, 3]);
        let g = f.embed(3);
        assert_eq!(g.level(), 3);
        assert_eq!(g.order(), 8);
        assert_eq!(*g.coeff(0), BigRational::from_integer(BigInt::from(1)));
        assert!(g.coeff(1).is_zero());
        assert_eq!(*g.coeff(3), BigRational::from_integer(BigInt::from(2)));
        assert_eq!(*g.coeff(6), BigRational::from_integer(BigInt::from(3)));
    }

    #[test]
    fn derivative_multiplies_by_index() {
        let f = series(&[5, 1, 1, 1]);
        let g = f.derive();
        assert_eq!(g.weight(), 4);
        assert!(g.coeff(0).is_zero());
        assert_eq!(*g.coeff(3), BigRational::from_integer(BigInt::from(3)));
    }
}
