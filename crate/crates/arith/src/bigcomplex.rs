//! Arbitrary-precision complex arithmetic over [`BigFloat`].
//!
//! Provides the field operations plus sqrt, exp, and the arithmetic-geometric
//! mean. The AGM follows the optimal-branch convention: at each step the
//! square root b' of ab is chosen with |a' - b'| <= |a' + b'|, breaking ties
//! toward Im(b'/a') > 0. With that rule the iteration converges quadratically
//! for any pair of nonzero complex numbers with a/b not on the negative real
//! axis, which is what period-lattice computations need.

use crate::bigfloat::{pi, BigFloat};
use num_rational::BigRational;
use std::cmp::Ordering;
use std::fmt;

/// Complex number with BigFloat components.
#[derive(Clone)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex { re: BigFloat::zero(prec), im: BigFloat::zero(prec) }
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        BigComplex { re: BigFloat::from_i64(n, prec), im: BigFloat::zero(prec) }
    }

    pub fn from_real(re: BigFloat) -> Self {
        let prec = re.prec();
        BigComplex { re, im: BigFloat::zero(prec) }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        BigComplex { re: BigFloat::from_rational(q, prec), im: BigFloat::zero(prec) }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        BigComplex { re: BigFloat::from_f64(re, prec), im: BigFloat::from_f64(im, prec) }
    }

    pub fn i(prec: u32) -> Self {
        BigComplex { re: BigFloat::zero(prec), im: BigFloat::from_i64(1, prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex { re: self.re.with_prec(prec), im: self.im.with_prec(prec) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn neg(&self) -> Self {
        BigComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn add(&self, other: &Self) -> Self {
        BigComplex { re: self.re.add(&other.re), im: self.im.add(&other.im) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        BigComplex { re: self.re.sub(&other.re), im: self.im.sub(&other.im) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let re = self.re.mul(&other.re).sub(&self.im.mul(&other.im));
        let im = self.re.mul(&other.im).add(&self.im.mul(&other.re));
        BigComplex { re, im }
    }

    pub fn mul_real(&self, s: &BigFloat) -> Self {
        BigComplex { re: self.re.mul(s), im: self.im.mul(s) }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        BigComplex { re: self.re.mul_i64(k), im: self.im.mul_i64(k) }
    }

    pub fn mul_2exp(&self, k: i64) -> Self {
        BigComplex { re: self.re.mul_2exp(k), im: self.im.mul_2exp(k) }
    }

    /// |z|².
    pub fn norm_sq(&self) -> BigFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sq().sqrt()
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sq();
        assert!(!n.is_zero(), "inverse of zero BigComplex");
        BigComplex { re: self.re.div(&n), im: self.im.div(&n).neg() }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// Principal square root (branch cut along the negative real axis).
    pub fn sqrt(&self) -> Self {
        let prec = self.prec();
        if self.is_zero() {
            return Self::zero(prec);
        }
        let r = self.abs();
        // sqrt(z) = sqrt((r+re)/2) + i·sign(im)·sqrt((r−re)/2), with care
        // when im = 0.
        if self.im.is_zero() {
            if !self.re.is_negative() {
                return BigComplex { re: self.re.sqrt(), im: BigFloat::zero(prec) };
            }
            return BigComplex { re: BigFloat::zero(prec), im: self.re.neg().sqrt() };
        }
        let half_sum = r.add(&self.re).mul_2exp(-1);
        let u = half_sum.sqrt();
        // v = im / (2u) avoids cancellation in (r − re)/2 for re > 0.
        let v = self.im.div(&u.mul_2exp(1));
        BigComplex { re: u, im: v }
    }

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        BigComplex { re: m.mul(&c), im: m.mul(&s) }
    }

    /// Principal logarithm: ln|z| + i·arg(z), arg ∈ (−π, π].
    pub fn ln(&self) -> Self {
        assert!(!self.is_zero(), "ln of zero BigComplex");
        let prec = self.prec();
        BigComplex { re: self.abs().ln(), im: self.arg() }.with_prec(prec)
    }

    /// Argument in (−π, π].
    pub fn arg(&self) -> BigFloat {
        let prec = self.prec();
        if self.im.is_zero() {
            if self.re.is_negative() {
                return pi(prec);
            }
            return BigFloat::zero(prec);
        }
        if self.re.is_zero() {
            let half_pi = pi(prec).mul_2exp(-1);
            return if self.im.is_negative() { half_pi.neg() } else { half_pi };
        }
        let base = self.im.div(&self.re).atan();
        if self.re.is_negative() {
            if self.im.is_negative() {
                base.sub(&pi(prec))
            } else {
                base.add(&pi(prec))
            }
        } else {
            base
        }
    }

    pub fn pow_i64(&self, k: i64) -> Self {
        let prec = self.prec();
        if k == 0 {
            return Self::from_i64(1, prec);
        }
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = Self::from_i64(1, prec);
        let mut b = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }
}

/// Arithmetic-geometric mean with the optimal square-root branch.
pub fn agm(a0: &BigComplex, b0: &BigComplex) -> BigComplex {
    let prec = a0.prec().max(b0.prec());
    let work = prec + 16;
    let mut a = a0.with_prec(work);
    let mut b = b0.with_prec(work);
    assert!(!a.is_zero() && !b.is_zero(), "agm requires nonzero arguments");
    loop {
        let am = a.add(&b).mul_2exp(-1);
        let mut gm = a.mul(&b).sqrt();
        // Branch rule: |am − gm| ≤ |am + gm|, ties toward Im(gm/am) > 0.
        let d_minus = am.sub(&gm).norm_sq();
        let d_plus = am.add(&gm).norm_sq();
        match d_minus.cmp_abs(&d_plus) {
            Ordering::Greater => gm = gm.neg(),
            Ordering::Equal => {
                if gm.div(&am).im.is_negative() {
                    gm = gm.neg();
                }
            }
            Ordering::Less => {}
        }
        let diff = am.sub(&gm);
        a = am;
        b = gm;
        if diff.is_zero() {
            break;
        }
        let scale = a.abs();
        if !scale.is_zero()
            && diff.abs().exponent() < scale.exponent() - (prec as i64 + 4)
        {
            break;
        }
    }
    a.with_prec(prec)
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re, self.im)
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigfloat::digits_to_bits;

    fn close(z: &BigComplex, re: f64, im: f64, tol: f64) {
        assert!(
            (z.re.to_f64() - re).abs() <= tol && (z.im.to_f64() - im).abs() <= tol,
            "got {} + {}i, want {} + {}i",
            z.re.to_f64(),
            z.im.to_f64(),
            re,
            im
        );
    }

    #[test]
    fn field_ops() {
        let prec = 128;
        let a = BigComplex::from_f64(1.0, 2.0, prec);
        let b = BigComplex::from_f64(3.0, -1.0, prec);
        close(&a.mul(&b), 5.0, 5.0, 1e-25);
        close(&a.div(&b).mul(&b), 1.0, 2.0, 1e-25);
        close(&a.inv().mul(&a), 1.0, 0.0, 1e-25);
    }

    #[test]
    fn sqrt_squares_back() {
        let prec = 192;
        for &(re, im) in &[(2.0, 3.0), (-5.0, 1.0), (-4.0, 0.0), (0.0, -2.0), (1e-3, -7.0)] {
            let z = BigComplex::from_f64(re, im, prec);
            let s = z.sqrt();
            close(&s.mul(&s), re, im, 1e-12);
            // Principal branch: Re ≥ 0.
            assert!(!s.re.is_negative() || s.re.is_zero());
        }
    }

    #[test]
    fn exp_ln_roundtrip() {
        let prec = 192;
        let z = BigComplex::from_f64(0.7, -1.9, prec);
        let w = z.ln().exp();
        close(&w, 0.7, -1.9, 1e-12);
    }

    #[test]
    fn exp_i_pi_is_minus_one() {
        let prec = digits_to_bits(40);
        let z = BigComplex::new(BigFloat::zero(prec), pi(prec));
        let w = z.exp();
        let d_re = w.re.add(&BigFloat::from_i64(1, prec)).abs();
        assert!(d_re.is_zero() || d_re.exponent() < -(prec as i64) + 16);
        assert!(w.im.is_zero() || w.im.exponent() < -(prec as i64) + 16);
    }

    #[test]
    fn agm_real_matches_classical() {
        // agm(1, √2) relates to the lemniscate constant; just check against
        // a double-precision iteration.
        let prec = 192;
        let a = BigComplex::from_i64(1, prec);
        let b = BigComplex::from_f64(std::f64::consts::SQRT_2, 0.0, prec);
        let m = agm(&a, &b);
        let (mut x, mut y) = (1.0f64, std::f64::consts::SQRT_2);
        for _ in 0..8 {
            let nx = (x + y) / 2.0;
            y = (x * y).sqrt();
            x = nx;
        }
        close(&m, x, 0.0, 1e-12);
    }

    #[test]
    fn agm_complex_converges() {
        let prec = 192;
        let a = BigComplex::from_f64(1.0, 0.5, prec);
        let b = BigComplex::from_f64(0.3, -0.2, prec);
        let m = agm(&a, &b);
        // AGM is symmetric and homogeneous: agm(ta, tb) = t·agm(a, b).
        let t = BigComplex::from_f64(2.0, 1.0, prec);
        let m_scaled = agm(&a.mul(&t), &b.mul(&t));
        let diff = m_scaled.sub(&m.mul(&t));
        assert!(diff.abs().to_f64() < 1e-40);
        assert!(!m.is_zero());
    }
}
