//! Arbitrary-precision binary floating point.
//!
//! A value is sign · mant · 2^exp with the mantissa normalized to exactly
//! `prec` bits (top bit set). Operations round to the larger of the operand
//! precisions. This is a working-precision engine, not an interval library:
//! callers request generous precision (the default policy elsewhere is 2×
//! the target digits) and verify residuals downstream.
//!
//! Transcendentals provided: exp, ln, sin/cos, atan, π, ln 2, Γ (Spouge),
//! integer powers and nth roots. All are accurate to within a few ulps at
//! working precision.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

/// Convert a decimal-digit request to a bit precision with guard room.
pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

/// Arbitrary-precision binary float.
#[derive(Clone)]
pub struct BigFloat {
    sign: i8,
    mant: BigUint,
    exp: i64,
    prec: u32,
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat { sign: 0, mant: BigUint::zero(), exp: 0, prec }
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        let sign = match n.cmp(&0) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        };
        Self::normalize(sign, BigUint::from(n.unsigned_abs()), 0, prec)
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> Self {
        let sign = match n.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        };
        Self::normalize(sign, n.magnitude().clone(), 0, prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        if q.is_zero() {
            return Self::zero(prec);
        }
        let num = Self::from_bigint(q.numer(), prec + 8);
        let den = Self::from_bigint(q.denom(), prec + 8);
        num.div(&den).with_prec(prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        assert!(x.is_finite(), "from_f64 requires a finite value");
        if x == 0.0 {
            return Self::zero(prec);
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i8 } else { 1 };
        let exp_raw = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if exp_raw == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_raw - 1075)
        };
        Self::normalize(sign, BigUint::from(mant), exp, prec)
    }

    fn normalize(sign: i8, mant: BigUint, exp: i64, prec: u32) -> Self {
        if sign == 0 || mant.is_zero() {
            return Self::zero(prec);
        }
        let nbits = mant.bits() as i64;
        let target = prec as i64;
        if nbits > target {
            let shift = (nbits - target) as u64;
            // Round to nearest (half away from zero).
            let half = BigUint::one() << (shift - 1);
            let rounded = (&mant + &half) >> shift;
            // Rounding can carry to target+1 bits; renormalize cheaply.
            let rb = rounded.bits() as i64;
            if rb > target {
                return BigFloat { sign, mant: rounded >> 1u8, exp: exp + shift as i64 + 1, prec };
            }
            BigFloat { sign, mant: rounded, exp: exp + shift as i64, prec }
        } else if nbits < target {
            let shift = (target - nbits) as u64;
            BigFloat { sign, mant: mant << shift, exp: exp - shift as i64, prec }
        } else {
            BigFloat { sign, mant, exp, prec }
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::normalize(self.sign, self.mant.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign < 0
    }

    pub fn signum(&self) -> i8 {
        self.sign
    }

    /// Floor of log2 |x| for nonzero x.
    pub fn exponent(&self) -> i64 {
        assert!(self.sign != 0, "exponent of zero");
        self.exp + self.mant.bits() as i64 - 1
    }

    pub fn neg(&self) -> Self {
        BigFloat { sign: -self.sign, ..self.clone() }
    }

    pub fn abs(&self) -> Self {
        BigFloat { sign: self.sign.abs(), ..self.clone() }
    }

    pub fn mul_2exp(&self, k: i64) -> Self {
        if self.sign == 0 {
            return self.clone();
        }
        BigFloat { exp: self.exp + k, ..self.clone() }
    }

    fn to_signed_mant(&self) -> BigInt {
        BigInt::from_biguint(if self.sign < 0 { Sign::Minus } else { Sign::Plus }, self.mant.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        if self.sign == 0 {
            return other.with_prec(prec);
        }
        if other.sign == 0 {
            return self.with_prec(prec);
        }
        // If the magnitudes are too far apart, the smaller is invisible.
        let ea = self.exponent();
        let eb = other.exponent();
        let gap = prec as i64 + 4;
        if ea - eb > gap {
            return self.with_prec(prec);
        }
        if eb - ea > gap {
            return other.with_prec(prec);
        }
        let e0 = self.exp.min(other.exp);
        let ma = self.to_signed_mant() << (self.exp - e0) as u64;
        let mb = other.to_signed_mant() << (other.exp - e0) as u64;
        let sum = ma + mb;
        let sign = match sum.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        };
        Self::normalize(sign, sum.magnitude().clone(), e0, prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        if self.sign == 0 || other.sign == 0 {
            return Self::zero(prec);
        }
        Self::normalize(
            self.sign * other.sign,
            &self.mant * &other.mant,
            self.exp + other.exp,
            prec,
        )
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul(&Self::from_i64(k, self.prec))
    }

    pub fn div(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        assert!(other.sign != 0, "division by zero BigFloat");
        if self.sign == 0 {
            return Self::zero(prec);
        }
        // Scale the numerator so the integer quotient has ≥ prec+2 bits.
        let shift = prec as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64;
        let shift_up = shift.max(0) as u64;
        let num = &self.mant << shift_up;
        let q = &num / &other.mant;
        Self::normalize(
            self.sign * other.sign,
            q,
            self.exp - other.exp - shift_up as i64,
            prec,
        )
    }

    /// Compare |self| with |other|.
    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        if self.sign == 0 && other.sign == 0 {
            return Ordering::Equal;
        }
        if self.sign == 0 {
            return Ordering::Less;
        }
        if other.sign == 0 {
            return Ordering::Greater;
        }
        let ea = self.exponent();
        let eb = other.exponent();
        if ea != eb {
            return ea.cmp(&eb);
        }
        let e0 = self.exp.min(other.exp);
        let ma = &self.mant << (self.exp - e0) as u64;
        let mb = &other.mant << (other.exp - e0) as u64;
        ma.cmp(&mb)
    }

    pub fn cmp_val(&self, other: &Self) -> Ordering {
        match (self.sign, other.sign) {
            (a, b) if a < b => Ordering::Less,
            (a, b) if a > b => Ordering::Greater,
            (0, 0) => Ordering::Equal,
            (s, _) => {
                let m = self.cmp_abs(other);
                if s > 0 {
                    m
                } else {
                    m.reverse()
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let bits = self.mant.bits();
        let take = bits.min(53);
        let top: u64 = (&self.mant >> (bits - take)).to_u64().unwrap();
        let e = self.exp as f64 + (bits - take) as f64;
        self.sign as f64 * top as f64 * e.exp2()
    }

    pub fn to_rational(&self) -> BigRational {
        if self.sign == 0 {
            return BigRational::zero();
        }
        let m = BigInt::from(self.mant.clone()) * BigInt::from(self.sign);
        if self.exp >= 0 {
            BigRational::from(m << self.exp as u64)
        } else {
            BigRational::new(m, BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Round to the nearest integer.
    pub fn round_to_bigint(&self) -> BigInt {
        if self.sign == 0 {
            return BigInt::zero();
        }
        if self.exp >= 0 {
            return self.to_signed_mant() << self.exp as u64;
        }
        let shift = (-self.exp) as u64;
        if shift > self.mant.bits() + 1 {
            return BigInt::zero();
        }
        let half = BigUint::one() << (shift - 1);
        let mag = (&self.mant + half) >> shift;
        BigInt::from_biguint(if self.sign < 0 { Sign::Minus } else { Sign::Plus }, mag)
    }

    pub fn sqrt(&self) -> Self {
        assert!(self.sign >= 0, "sqrt of negative BigFloat");
        if self.sign == 0 {
            return self.clone();
        }
        let prec = self.prec;
        // Scale mantissa to 2·(prec+2) bits with even exponent, integer sqrt.
        let want_bits = 2 * (prec as i64 + 2);
        let cur_bits = self.mant.bits() as i64;
        let mut shift = want_bits - cur_bits;
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let m = if shift >= 0 {
            &self.mant << shift as u64
        } else {
            &self.mant >> (-shift) as u64
        };
        let root = m.sqrt();
        Self::normalize(1, root, (self.exp - shift) / 2, prec)
    }

    /// x^k for integer k (k may be negative).
    pub fn pow_i64(&self, k: i64) -> Self {
        if k == 0 {
            return Self::from_i64(1, self.prec);
        }
        let base = if k < 0 {
            Self::from_i64(1, self.prec).div(self)
        } else {
            self.clone()
        };
        let mut acc = Self::from_i64(1, self.prec);
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

    /// Natural exponential.
    pub fn exp(&self) -> Self {
        let prec = self.prec;
        let work = prec + 32;
        let x = self.with_prec(work);
        if x.sign == 0 {
            return Self::from_i64(1, prec);
        }
        // Range-reduce: x = n·ln2 + r with |r| ≤ ln2/2, then r ← r/2^m.
        let l2 = ln2(work);
        let n_f = x.div(&l2);
        let n = n_f.round_to_bigint();
        let r = x.sub(&Self::from_bigint(&n, work).mul(&l2));
        let m = 8u32;
        let r_small = r.mul_2exp(-(m as i64));
        // Taylor Σ r^k/k!.
        let mut term = Self::from_i64(1, work);
        let mut sum = Self::from_i64(1, work);
        let mut k = 1i64;
        loop {
            term = term.mul(&r_small).div(&Self::from_i64(k, work));
            sum = sum.add(&term);
            if term.sign == 0 || term.exponent() < sum.exponent() - work as i64 - 2 {
                break;
            }
            k += 1;
        }
        // Square back m times.
        let mut y = sum;
        for _ in 0..m {
            y = y.mul(&y);
        }
        let n_i64 = n.to_i64().expect("exp argument out of range");
        y.mul_2exp(n_i64).with_prec(prec)
    }

    /// Natural logarithm (x > 0).
    pub fn ln(&self) -> Self {
        assert!(self.sign > 0, "ln requires a positive value");
        let prec = self.prec;
        let work = prec + 32;
        // Write x = m·2^e with m ∈ [1, 2); shift to m ∈ [√2/2, √2).
        let mut e = self.exponent();
        let mut m = self.mul_2exp(-e).with_prec(work);
        // If m ≥ √2, fold: m/2, e+1 (comparison against 1.5 is close enough
        // to keep |y| small; exactness of the split is not required).
        if m.cmp_abs(&Self::from_rational(
            &BigRational::new(BigInt::from(3), BigInt::from(2)),
            work,
        )) == Ordering::Greater
        {
            m = m.mul_2exp(-1);
            e += 1;
        }
        // atanh series: ln m = 2·atanh((m−1)/(m+1)).
        let one = Self::from_i64(1, work);
        let y = m.sub(&one).div(&m.add(&one));
        let y2 = y.mul(&y);
        let mut term = y.clone();
        let mut sum = y.clone();
        let mut k = 1i64;
        loop {
            term = term.mul(&y2);
            let add = term.div(&Self::from_i64(2 * k + 1, work));
            sum = sum.add(&add);
            if add.sign == 0 || (sum.sign != 0 && add.exponent() < sum.exponent() - work as i64 - 2)
            {
                break;
            }
            k += 1;
        }
        let ln_m = sum.mul_2exp(1);
        ln_m.add(&ln2(work).mul(&Self::from_i64(e, work))).with_prec(prec)
    }

    /// Sine and cosine, for arguments of moderate size (|x| < 2^40).
    pub fn sin_cos(&self) -> (Self, Self) {
        let prec = self.prec;
        let work = prec + 48;
        let x = self.with_prec(work);
        if x.sign == 0 {
            return (Self::zero(prec), Self::from_i64(1, prec));
        }
        // Reduce modulo π/2 with quadrant tracking.
        let pi_ = pi(work);
        let half_pi = pi_.mul_2exp(-1);
        let q_f = x.div(&half_pi);
        let q = q_f.round_to_bigint();
        let r = x.sub(&Self::from_bigint(&q, work).mul(&half_pi));
        // Taylor for sin and cos on |r| ≤ π/4.
        let r2 = r.mul(&r);
        let mut s = r.clone();
        let mut term = r.clone();
        let mut k = 1i64;
        loop {
            term = term.mul(&r2).div(&Self::from_i64((2 * k) * (2 * k + 1), work)).neg();
            s = s.add(&term);
            if term.sign == 0 || term.exponent() < -(work as i64) - 2 {
                break;
            }
            k += 1;
        }
        let mut c = Self::from_i64(1, work);
        term = Self::from_i64(1, work);
        k = 1;
        loop {
            term = term.mul(&r2).div(&Self::from_i64((2 * k - 1) * (2 * k), work)).neg();
            c = c.add(&term);
            if term.sign == 0 || term.exponent() < -(work as i64) - 2 {
                break;
            }
            k += 1;
        }
        // Rotate by quadrant: sin(r + qπ/2), cos(r + qπ/2).
        let qm = q.mod_floor(&BigInt::from(4)).to_i64().unwrap();
        let (s, c) = match qm {
            0 => (s, c),
            1 => (c, s.neg()),
            2 => (s.neg(), c.neg()),
            _ => (c.neg(), s),
        };
        (s.with_prec(prec), c.with_prec(prec))
    }

    /// Arctangent via the Taylor/Euler series after argument reduction.
    pub fn atan(&self) -> Self {
        let prec = self.prec;
        let work = prec + 32;
        let x = self.with_prec(work);
        if x.sign == 0 {
            return Self::zero(prec);
        }
        if x.sign < 0 {
            return x.neg().atan().neg().with_prec(prec);
        }
        let one = Self::from_i64(1, work);
        // atan(x) = π/2 − atan(1/x) for x > 1.
        if x.cmp_abs(&one) == Ordering::Greater {
            return pi(work).mul_2exp(-1).sub(&one.div(&x).atan()).with_prec(prec);
        }
        // Halve via atan(x) = 2·atan(x / (1 + √(1+x²))) until small.
        let quarter = Self::from_rational(&BigRational::new(BigInt::one(), BigInt::from(4)), work);
        if x.cmp_abs(&quarter) == Ordering::Greater {
            let x2 = x.mul(&x);
            let arg = x.div(&one.add(&one.add(&x2).sqrt()));
            return arg.atan().mul_2exp(1).with_prec(prec);
        }
        let x2 = x.mul(&x);
        let mut term = x.clone();
        let mut sum = x.clone();
        let mut k = 1i64;
        loop {
            term = term.mul(&x2).neg();
            let add = term.div(&Self::from_i64(2 * k + 1, work));
            sum = sum.add(&add);
            if add.sign == 0 || add.exponent() < sum.exponent() - work as i64 - 2 {
                break;
            }
            k += 1;
        }
        sum.with_prec(prec)
    }

    /// Γ(x) for real x > 0, by the Spouge approximation.
    pub fn gamma(&self) -> Self {
        assert!(self.sign > 0, "gamma implemented for positive arguments");
        let prec = self.prec;
        let work = prec + 48;
        let x = self.with_prec(work).sub(&Self::from_i64(1, work));
        // Spouge parameter: relative error ~ a^{-1/2} (2π)^{-a}.
        let a = ((work as f64) * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI).ln())
            .ceil() as i64
            + 3;
        let two_pi = pi(work).mul_2exp(1);
        let mut sum = two_pi.sqrt(); // c0
        let mut fact = Self::from_i64(1, work);
        for k in 1..a {
            if k > 1 {
                fact = fact.mul(&Self::from_i64(k - 1, work));
            }
            let amk = Self::from_i64(a - k, work);
            // c_k = (−1)^{k−1} (a−k)^{k−1/2} e^{a−k} / (k−1)!
            let pow = amk.pow_i64(k - 1).mul(&amk.sqrt());
            let ck = pow.mul(&amk.exp()).div(&fact);
            let ck = if k % 2 == 0 { ck.neg() } else { ck };
            sum = sum.add(&ck.div(&x.add(&Self::from_i64(k, work))));
        }
        let xa = x.add(&Self::from_i64(a, work));
        // (x+a)^{x+1/2} e^{−(x+a)} · sum
        let half = Self::from_rational(&BigRational::new(BigInt::one(), BigInt::from(2)), work);
        let pw = x.add(&half).mul(&xa.ln()).exp();
        pw.mul(&xa.neg().exp()).mul(&sum).with_prec(prec)
    }
}

static LN2_CACHE: Lazy<Mutex<HashMap<u32, BigFloat>>> = Lazy::new(|| Mutex::new(HashMap::new()));
static PI_CACHE: Lazy<Mutex<HashMap<u32, BigFloat>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// ln 2 at the given precision (cached).
pub fn ln2(prec: u32) -> BigFloat {
    if let Some(v) = LN2_CACHE.lock().unwrap().get(&prec) {
        return v.clone();
    }
    // ln 2 = 2 atanh(1/3) = 2 Σ 1/(3^{2k+1}(2k+1)).
    let work = prec + 16;
    let third = BigFloat::from_rational(&BigRational::new(BigInt::one(), BigInt::from(3)), work);
    let t2 = third.mul(&third);
    let mut term = third.clone();
    let mut sum = third;
    let mut k = 1i64;
    loop {
        term = term.mul(&t2);
        let add = term.div(&BigFloat::from_i64(2 * k + 1, work));
        sum = sum.add(&add);
        if add.is_zero() || add.exponent() < sum.exponent() - work as i64 - 2 {
            break;
        }
        k += 1;
    }
    let v = sum.mul_2exp(1).with_prec(prec);
    LN2_CACHE.lock().unwrap().insert(prec, v.clone());
    v
}

/// π at the given precision (cached), by Machin's formula.
pub fn pi(prec: u32) -> BigFloat {
    if let Some(v) = PI_CACHE.lock().unwrap().get(&prec) {
        return v.clone();
    }
    let work = prec + 16;
    let atan_inv = |n: i64| -> BigFloat {
        // atan(1/n) by the alternating series.
        let x = BigFloat::from_rational(&BigRational::new(BigInt::one(), BigInt::from(n)), work);
        let x2 = x.mul(&x);
        let mut term = x.clone();
        let mut sum = x.clone();
        let mut k = 1i64;
        loop {
            term = term.mul(&x2).neg();
            let add = term.div(&BigFloat::from_i64(2 * k + 1, work));
            sum = sum.add(&add);
            if add.is_zero() || add.exponent() < sum.exponent() - work as i64 - 2 {
                break;
            }
            k += 1;
        }
        sum
    };
    let v = atan_inv(5)
        .mul_2exp(4)
        .sub(&atan_inv(239).mul_2exp(2))
        .with_prec(prec);
    PI_CACHE.lock().unwrap().insert(prec, v.clone());
    v
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Print with ~prec·log10(2) significant digits via rational scaling.
        if self.sign == 0 {
            return write!(f, "0.0");
        }
        let digits = (self.prec as f64 / std::f64::consts::LOG2_10) as i64 - 1;
        let mag = self.exponent() as f64 / std::f64::consts::LOG2_10;
        let dec_exp = mag.floor() as i64;
        // value ≈ d.ddd × 10^dec_exp: scale by 10^(digits − dec_exp).
        let scale = digits - dec_exp;
        let q = self.to_rational()
            * if scale >= 0 {
                BigRational::from(BigInt::from(10u8).pow(scale as u32))
            } else {
                BigRational::new(BigInt::one(), BigInt::from(10u8).pow((-scale) as u32))
            };
        let rounded = (q.numer().abs() * BigInt::from(2) + q.denom()) / (q.denom() * BigInt::from(2));
        let s = rounded.to_string();
        let neg = if self.sign < 0 { "-" } else { "" };
        if s.len() as i64 <= digits {
            // Small magnitude: pad.
            let frac_len = digits;
            let padded = format!("{:0>width$}", s, width = (frac_len + 1) as usize);
            let split = padded.len() - frac_len as usize;
            write!(f, "{}{}.{}e{}", neg, &padded[..split], &padded[split..], dec_exp)
        } else {
            let split = s.len() - digits as usize;
            write!(f, "{}{}.{}e{}", neg, &s[..split], &s[split..], dec_exp)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &BigFloat, b: f64, tol: f64) {
        assert!(
            (a.to_f64() - b).abs() <= tol * b.abs().max(1.0),
            "got {}, want {}",
            a.to_f64(),
            b
        );
    }

    #[test]
    fn basic_ops() {
        let prec = 128;
        let a = BigFloat::from_i64(3, prec);
        let b = BigFloat::from_i64(7, prec);
        close(&a.add(&b), 10.0, 1e-30);
        close(&a.sub(&b), -4.0, 1e-30);
        close(&a.mul(&b), 21.0, 1e-30);
        close(&a.div(&b), 3.0 / 7.0, 1e-30);
        close(&b.sqrt(), 7f64.sqrt(), 1e-15);
    }

    #[test]
    fn pi_matches_f64() {
        let p = pi(200);
        close(&p, std::f64::consts::PI, 1e-15);
        // And a sharper check: π to 50 digits, compare leading 30 via string.
        let p_hi = pi(digits_to_bits(50));
        let q = p_hi.to_rational();
        let scaled = q * BigRational::from(BigInt::from(10u8).pow(29));
        let int = scaled.to_integer().to_string();
        assert_eq!(int, "314159265358979323846264338327");
    }

    #[test]
    fn ln_exp_roundtrip() {
        let prec = 200;
        for &v in &[0.3, 1.0, 2.5, 100.0, 1e-6] {
            let x = BigFloat::from_f64(v, prec);
            let y = x.ln().exp();
            let diff = y.sub(&x).abs();
            assert!(
                diff.is_zero() || diff.exponent() < x.exponent() - 190,
                "roundtrip failed for {}",
                v
            );
        }
    }

    #[test]
    fn exp_of_ln2_is_two() {
        let l = ln2(256);
        close(&l.exp(), 2.0, 1e-30);
    }

    #[test]
    fn trig_identities() {
        let prec = 200;
        for &v in &[0.1, 1.0, 2.0, 3.9, 6.0, -2.5] {
            let x = BigFloat::from_f64(v, prec);
            let (s, c) = x.sin_cos();
            close(&s, v.sin(), 1e-14);
            close(&c, v.cos(), 1e-14);
            let one = s.mul(&s).add(&c.mul(&c));
            let diff = one.sub(&BigFloat::from_i64(1, prec)).abs();
            assert!(diff.is_zero() || diff.exponent() < -190);
        }
    }

    #[test]
    fn atan_agrees() {
        let prec = 200;
        for &v in &[0.05, 0.3, 0.9, 2.0, 17.5] {
            let x = BigFloat::from_f64(v, prec);
            close(&x.atan(), v.atan(), 1e-14);
        }
    }

    #[test]
    fn gamma_small_integers_and_half() {
        let prec = digits_to_bits(40);
        // Γ(5) = 24.
        close(&BigFloat::from_i64(5, prec).gamma(), 24.0, 1e-25);
        // Γ(1/2) = √π.
        let half = BigFloat::from_rational(&BigRational::new(BigInt::one(), BigInt::from(2)), prec);
        let g = half.gamma();
        let sp = pi(prec).sqrt();
        let diff = g.sub(&sp).abs();
        assert!(diff.is_zero() || diff.exponent() < g.exponent() - (prec as i64 - 12));
        // Recurrence Γ(x+1) = xΓ(x) at x = 1/3.
        let third = BigFloat::from_rational(&BigRational::new(BigInt::one(), BigInt::from(3)), prec);
        let lhs = third.add(&BigFloat::from_i64(1, prec)).gamma();
        let rhs = third.mul(&third.gamma());
        let d2 = lhs.sub(&rhs).abs();
        assert!(d2.is_zero() || d2.exponent() < lhs.exponent() - (prec as i64 - 12));
    }

    #[test]
    fn rounding_to_int() {
        let prec = 128;
        let x = BigFloat::from_f64(2.6, prec);
        assert_eq!(x.round_to_bigint(), BigInt::from(3));
        let y = BigFloat::from_f64(-2.6, prec);
        assert_eq!(y.round_to_bigint(), BigInt::from(-3));
        let z = BigFloat::from_f64(1e-30, prec);
        assert_eq!(z.round_to_bigint(), BigInt::zero());
    }
}
