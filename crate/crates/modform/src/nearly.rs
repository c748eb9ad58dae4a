//! Nearly holomorphic forms as polynomials in `Y = 1/(4 pi y)` with
//! q-expansion coefficients, and the Shimura-Maass raising operator.

use crate::eisenstein::e2;
use crate::qexp::QExpansion;
use chabauty_arith::bigcomplex::BigComplex;
use chabauty_arith::bigfloat::{pi, BigFloat};
use num_rational::BigRational;
use std::ops::Neg;

/// A nearly holomorphic form `sum_j layers[j] Y^j` of a fixed total
/// weight, where `Y = 1/(4 pi y)` and layer `j` carries weight tag
/// `weight - 2j`.
///
/// The operators `D = q d/dq` and multiplication by `Y` act on such
/// polynomials through `D(Y) = Y^2`, so the Shimura-Maass derivative
/// `delta_k = D - kY` stays inside the space while raising the weight
/// by two.
#[derive(Clone, Debug)]
pub struct NearlyHolomorphic {
    weight: i64,
    layers: Vec<QExpansion>,
}

impl NearlyHolomorphic {
    /// A holomorphic form viewed as the single layer `j = 0`.
    pub fn from_form(f: &QExpansion) -> Self {
        NearlyHolomorphic {
            weight: f.weight(),
            layers: vec![f.clone()],
        }
    }

    /// The weight-two completion `E_2 - 12 Y` of the quasi-modular
    /// Eisenstein series.
    pub fn e2_star(order: usize) -> Self {
        let twelve = BigRational::from_integer(12.into()).neg();
        NearlyHolomorphic {
            weight: 2,
            layers: vec![e2(order), QExpansion::constant(1, twelve, order)],
        }
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn layers(&self) -> &[QExpansion] {
        &self.layers
    }

    /// One application of `delta_k = D - kY` at the current weight `k`.
    pub fn delta(&self) -> Self {
        let k = self.weight;
        let depth = self.layers.len();
        let mut layers = Vec::with_capacity(depth + 1);
        for j in 0..=depth {
            let mut layer = if j < depth {
                self.layers[j].derive()
            } else {
                QExpansion::zero(
                    self.layers[0].level(),
                    k + 2 - 2 * j as i64,
                    self.layers[depth - 1].order(),
                )
            };
            if j > 0 {
                let c = j as i64 - 1 - k;
                layer = layer.add(&self.layers[j - 1].scale_int(c));
            }
            layers.push(layer);
        }
        NearlyHolomorphic {
            weight: k + 2,
            layers,
        }
    }

    /// `r`-fold application of the Shimura-Maass operator.
    pub fn delta_iter(&self, r: usize) -> Self {
        let mut out = self.clone();
        for _ in 0..r {
            out = out.delta();
        }
        out
    }

    /// Numeric value at `tau` given `q = exp(2 pi i tau)` and
    /// `y = Im(tau) > 0`, by Horner evaluation in `Y = 1/(4 pi y)`.
    pub fn eval(&self, q: &BigComplex, y: &BigFloat) -> BigComplex {
        let prec = q.prec();
        let four_pi_y = pi(prec).mul(y).mul_2exp(2);
        let yy = BigFloat::from_i64(1, prec).div(&four_pi_y);
        let mut acc = BigComplex::from_real(BigFloat::zero(prec));
        for layer in self.layers.iter().rev() {
            acc = acc.mul_real(&yy).add(&layer.eval_complex(q));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::e4;

    #[test]
    fn first_derivative_layers() {
        let f = e4(12);
        let d = NearlyHolomorphic::from_form(&f).delta();
        assert_eq!(d.weight(), 6);
        assert_eq!(d.layers().len(), 2);
        assert!(d.layers()[0].agrees_with(&f.derive()));
        assert!(d.layers()[1].agrees_with(&f.scale_int(-4)));
    }

    #[test]
    fn second_derivative_matches_closed_form() {
        let f = e4(12);
        let d2 = NearlyHolomorphic::from_form(&f).delta_iter(2);
        assert_eq!(d2.weight(), 8);
        let dd = f.derive().derive();
        assert!(d2.layers()[0].agrees_with(&dd));
        assert!(d2.layers()[1].agrees_with(&f.derive().scale_int(-10)));
        assert!(d2.layers()[2].agrees_with(&f.scale_int(20)));
    }
}
