//! Capped-absolute-precision p-adic numbers for odd p.
//!
//! A nonzero value is stored as p^val · unit where the unit is coprime to p
//! and reduced modulo p^(abs_prec − val); the number is known exactly modulo
//! p^abs_prec and nothing more. A "zero" is a value indistinguishable from 0
//! at its stated precision: val = abs_prec and unit = 0.
//!
//! Precision propagation follows the usual ultrametric rules and never
//! overstates what the inputs justify:
//! * x + y is known modulo p^min(Nx, Ny);
//! * x · y has valuation vx + vy and relative precision min(Nx − vx, Ny − vy).

use crate::primes::{inv_mod, pow_big, pow_mod_u64, sqrt_mod_p, val_and_unit};
use crate::{ArithError, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

/// A p-adic number with capped absolute precision.
#[derive(Clone, PartialEq, Eq)]
pub struct Padic {
    p: u64,
    /// Valuation; when `unit` is zero this is a lower bound equal to `abs_prec`.
    val: i64,
    /// The value is known modulo p^abs_prec.
    abs_prec: i64,
    /// Unit part, reduced modulo p^(abs_prec − val); zero iff the value is
    /// indistinguishable from zero.
    unit: BigUint,
}

impl Padic {
    /// Zero to precision O(p^abs_prec).
    pub fn zero(p: u64, abs_prec: i64) -> Self {
        assert!(p >= 3, "p must be an odd prime >= 3");
        Padic { p, val: abs_prec, abs_prec, unit: BigUint::zero() }
    }

    /// One with absolute precision abs_prec (> 0).
    pub fn one(p: u64, abs_prec: i64) -> Self {
        Self::from_bigint(p, &BigInt::one(), abs_prec)
    }

    /// Construct from an integer, known modulo p^abs_prec.
    pub fn from_bigint(p: u64, n: &BigInt, abs_prec: i64) -> Self {
        assert!(p >= 3, "p must be an odd prime >= 3");
        if abs_prec <= 0 {
            return Padic::zero(p, abs_prec);
        }
        let m = pow_big(p, abs_prec as u64);
        let r = n.mod_floor(&BigInt::from(m.clone()));
        let r = r.to_biguint().expect("mod_floor non-negative");
        Self::from_residue(p, r, abs_prec)
    }

    /// Construct from an i64.
    pub fn from_i64(p: u64, n: i64, abs_prec: i64) -> Self {
        Self::from_bigint(p, &BigInt::from(n), abs_prec)
    }

    /// Construct from a non-negative residue known modulo p^abs_prec.
    pub fn from_residue(p: u64, r: BigUint, abs_prec: i64) -> Self {
        assert!(p >= 3, "p must be an odd prime >= 3");
        if abs_prec <= 0 || r.is_zero() {
            return Padic::zero(p, abs_prec);
        }
        let (v, u) = val_and_unit(&r, p);
        if v >= abs_prec {
            return Padic::zero(p, abs_prec);
        }
        let m = pow_big(p, (abs_prec - v) as u64);
        Padic { p, val: v, abs_prec, unit: u % m }
    }

    /// Construct from a rational number, known to absolute precision abs_prec.
    ///
    /// Fails if the denominator is divisible by p beyond what the numerator
    /// cancels and the resulting valuation is below any representable bound —
    /// in practice only division by exact zero fails.
    pub fn from_rational(p: u64, q: &BigRational, abs_prec: i64) -> Self {
        if q.is_zero() {
            return Padic::zero(p, abs_prec);
        }
        let (nv, nu) = val_and_unit(q.numer().magnitude(), p);
        let (dv, du) = val_and_unit(q.denom().magnitude(), p);
        let val = nv - dv;
        let rel = abs_prec - val;
        if rel <= 0 {
            return Padic::zero(p, abs_prec);
        }
        let m = pow_big(p, rel as u64);
        let mut u = (nu % &m) * inv_mod(&(du % &m), &m).expect("unit part is invertible");
        u %= &m;
        if q.numer().sign() != q.denom().sign() {
            u = &m - u;
        }
        Padic { p, val, abs_prec, unit: u }
    }

    /// p^k · unit with the given relative precision: value p^val·unit known
    /// modulo p^(val + rel_prec).
    pub fn from_unit(p: u64, unit: BigUint, val: i64, rel_prec: i64) -> Self {
        assert!(rel_prec >= 0);
        if rel_prec == 0 || unit.is_zero() {
            return Padic::zero(p, val);
        }
        let m = pow_big(p, rel_prec as u64);
        let u = unit % &m;
        if u.is_zero() {
            return Padic::zero(p, val + rel_prec);
        }
        let (v, uu) = val_and_unit(&u, p);
        assert!(v == 0, "from_unit: unit part must be coprime to p");
        Padic { p, val, abs_prec: val + rel_prec, unit: uu }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Absolute precision: the value is known modulo p^abs_prec.
    pub fn abs_prec(&self) -> i64 {
        self.abs_prec
    }

    /// Valuation (a lower bound = abs_prec when the value is zero to precision).
    pub fn valuation(&self) -> i64 {
        self.val
    }

    /// Relative precision of the unit part (0 for zero values).
    pub fn rel_prec(&self) -> i64 {
        self.abs_prec - self.val
    }

    /// True if the value is indistinguishable from zero at its precision.
    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// The unit part (reduced mod p^rel_prec); zero for zero values.
    pub fn unit_part(&self) -> &BigUint {
        &self.unit
    }

    fn check_same_prime(&self, other: &Padic) -> Result<()> {
        if self.p != other.p {
            return Err(ArithError::Incompatible(format!(
                "mixed primes {} and {}",
                self.p, other.p
            )));
        }
        Ok(())
    }

    /// Canonical residue in [0, p^abs_prec) when val ≥ 0.
    pub fn residue(&self) -> BigUint {
        assert!(self.val >= 0, "residue: negative valuation (value is not p-integral)");
        if self.unit.is_zero() || self.abs_prec <= 0 {
            return BigUint::zero();
        }
        let m = pow_big(self.p, self.abs_prec as u64);
        (pow_big(self.p, self.val as u64) * &self.unit) % m
    }

    /// Balanced residue in (−p^N/2, p^N/2] for N = abs_prec, when val ≥ 0.
    pub fn balanced_residue(&self) -> BigInt {
        let r = BigInt::from(self.residue());
        let m = BigInt::from(pow_big(self.p, self.abs_prec.max(0) as u64));
        if &r * 2 > m {
            r - m
        } else {
            r
        }
    }

    /// Balanced residue of the unit part in (−p^m/2, p^m/2] for m = rel_prec.
    /// Lets callers print p^val · (balanced unit) for non-integral values.
    pub fn balanced_unit(&self) -> BigInt {
        if self.unit.is_zero() {
            return BigInt::zero();
        }
        let r = BigInt::from(self.unit.clone());
        let m = BigInt::from(pow_big(self.p, self.rel_prec() as u64));
        if &r * 2 > m {
            r - m
        } else {
            r
        }
    }

    /// p-adic digits d_i ∈ [0, p) of the unit part: unit = Σ d_i p^i.
    pub fn unit_digits(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut u = self.unit.clone();
        let pb = BigUint::from(self.p);
        for _ in 0..self.rel_prec() {
            let (q, r) = u.div_rem(&pb);
            out.push(r.to_u64().expect("digit < p"));
            u = q;
        }
        out
    }

    /// Reduce to a lower absolute precision.
    pub fn truncate(&self, abs_prec: i64) -> Self {
        assert!(abs_prec <= self.abs_prec, "truncate cannot raise precision");
        if self.unit.is_zero() {
            return Padic::zero(self.p, abs_prec.min(self.abs_prec));
        }
        if self.val >= abs_prec {
            return Padic::zero(self.p, abs_prec);
        }
        let m = pow_big(self.p, (abs_prec - self.val) as u64);
        let u = &self.unit % m;
        // The unit was coprime to p, so reduction keeps it coprime (rel ≥ 1).
        Padic { p: self.p, val: self.val, abs_prec, unit: u }
    }

    /// Multiply by p^k (exact, shifts precision window).
    pub fn shift(&self, k: i64) -> Self {
        Padic {
            p: self.p,
            val: self.val + k,
            abs_prec: self.abs_prec + k,
            unit: self.unit.clone(),
        }
    }

    pub fn add(&self, other: &Padic) -> Padic {
        self.check_same_prime(other).expect("add: same prime");
        let n = self.abs_prec.min(other.abs_prec);
        if n <= self.val.min(other.val) {
            return Padic::zero(self.p, n);
        }
        let v0 = self.val.min(other.val);
        // Work with unit parts aligned at valuation v0.
        let m = pow_big(self.p, (n - v0) as u64);
        let mut acc = BigUint::zero();
        for x in [self, other] {
            if !x.unit.is_zero() && x.val < n {
                let lifted = (pow_big(self.p, (x.val - v0) as u64) * &x.unit) % &m;
                acc = (acc + lifted) % &m;
            }
        }
        if acc.is_zero() {
            return Padic::zero(self.p, n);
        }
        let (dv, u) = val_and_unit(&acc, self.p);
        let val = v0 + dv;
        if val >= n {
            return Padic::zero(self.p, n);
        }
        let mu = pow_big(self.p, (n - val) as u64);
        Padic { p: self.p, val, abs_prec: n, unit: u % mu }
    }

    pub fn neg(&self) -> Padic {
        if self.unit.is_zero() {
            return self.clone();
        }
        let m = pow_big(self.p, self.rel_prec() as u64);
        Padic {
            p: self.p,
            val: self.val,
            abs_prec: self.abs_prec,
            unit: &m - &self.unit,
        }
    }

    pub fn sub(&self, other: &Padic) -> Padic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Padic) -> Padic {
        self.check_same_prime(other).expect("mul: same prime");
        let val = self.val + other.val;
        let rel = self.rel_prec().min(other.rel_prec());
        if rel <= 0 || self.unit.is_zero() || other.unit.is_zero() {
            return Padic::zero(self.p, val);
        }
        let m = pow_big(self.p, rel as u64);
        let u = (&self.unit * &other.unit) % m;
        Padic { p: self.p, val, abs_prec: val + rel, unit: u }
    }

    pub fn inv(&self) -> Result<Padic> {
        if self.unit.is_zero() {
            return Err(ArithError::DivisionByZero { p: self.p, prec: self.abs_prec });
        }
        let rel = self.rel_prec();
        let m = pow_big(self.p, rel as u64);
        let u = inv_mod(&self.unit, &m).expect("unit is invertible");
        Ok(Padic { p: self.p, val: -self.val, abs_prec: -self.val + rel, unit: u })
    }

    pub fn div(&self, other: &Padic) -> Result<Padic> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power (negative allowed for units).
    pub fn pow(&self, e: i64) -> Result<Padic> {
        if e == 0 {
            return Ok(Padic::one(self.p, self.rel_prec().max(1)));
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc: Option<Padic> = None;
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => b.clone(),
                    Some(a) => a.mul(&b),
                });
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc.expect("e != 0"))
    }

    /// Scalar multiply by an exact rational; being exact, the scalar does not
    /// reduce relative precision.
    pub fn scale(&self, q: &BigRational) -> Padic {
        if q.is_zero() || self.is_zero() {
            // Conservative: an exact zero scalar still yields a zero at the
            // input's precision window (shifted by the scalar's valuation
            // when that is known).
            return Padic::zero(self.p, self.abs_prec);
        }
        let rel = self.rel_prec();
        let (nv, nu) = val_and_unit(q.numer().magnitude(), self.p);
        let (dv, du) = val_and_unit(q.denom().magnitude(), self.p);
        let m = pow_big(self.p, rel as u64);
        let mut u = (nu % &m) * inv_mod(&(du % &m), &m).expect("unit") % &m;
        if q.numer().sign() != q.denom().sign() {
            u = &m - u;
        }
        let f = Padic::from_unit(self.p, u, nv - dv, rel);
        self.mul(&f)
    }

    /// Do the two values agree modulo p^min(Na, Nb)?
    pub fn agrees_with(&self, other: &Padic) -> bool {
        if self.p != other.p {
            return false;
        }
        let n = self.abs_prec.min(other.abs_prec);
        self.truncate(n).sub(&other.truncate(n)).is_zero()
    }

    /// Square root via Hensel lifting, for odd p.
    ///
    /// Requires even valuation and a unit part that is a quadratic residue
    /// mod p; `residue_choice` selects which of the two lifts is returned and
    /// must satisfy residue_choice² ≡ unit (mod p).
    pub fn sqrt(&self, residue_choice: u64) -> Result<Padic> {
        if self.unit.is_zero() {
            return Err(ArithError::NotASquare(
                "cannot take sqrt of a value indistinguishable from zero".into(),
            ));
        }
        if self.val % 2 != 0 {
            return Err(ArithError::NotASquare(format!(
                "odd valuation {}",
                self.val
            )));
        }
        let p = self.p;
        let u0 = (&self.unit % BigUint::from(p)).to_u64().unwrap();
        if pow_mod_u64(u0, (p - 1) / 2, p) != 1 {
            return Err(ArithError::NotASquare(format!(
                "unit {} is a non-residue mod {}",
                u0, p
            )));
        }
        let choice = residue_choice % p;
        if (choice * choice) % p != u0 {
            return Err(ArithError::BadResidueChoice { choice, actual: u0, p });
        }
        let rel = self.rel_prec();
        // Newton: x ← (x + u/x)/2, doubling precision each step.
        let mut x = BigUint::from(choice);
        let mut k: i64 = 1;
        while k < rel {
            k = (2 * k).min(rel);
            let m = pow_big(p, k as u64);
            let u = &self.unit % &m;
            let xinv = inv_mod(&(&x % &m), &m).expect("x is a unit");
            let two_inv = inv_mod(&BigUint::from(2u8), &m).expect("p odd");
            x = ((&x + (u * xinv) % &m) % &m * two_inv) % &m;
        }
        Ok(Padic::from_unit(p, x, self.val / 2, rel))
    }

    /// Both square-root residue choices mod p (r, p − r), if a is a unit square.
    pub fn sqrt_residues(&self) -> Result<(u64, u64)> {
        if self.unit.is_zero() {
            return Err(ArithError::NotASquare("zero value".into()));
        }
        if self.val % 2 != 0 {
            return Err(ArithError::NotASquare(format!("odd valuation {}", self.val)));
        }
        let p = self.p;
        let u0 = (&self.unit % BigUint::from(p)).to_u64().unwrap();
        match sqrt_mod_p(u0, p) {
            Some(r) if r != 0 => Ok((r, p - r)),
            _ => Err(ArithError::NotASquare(format!("{} mod {}", u0, p))),
        }
    }

    /// n-th root by Hensel lifting, for n coprime to p.
    ///
    /// Requires n | val; `residue_choice` must satisfy choice^n ≡ unit (mod p).
    /// Used with n = (p−1)/2 to undo the final power in the Rubin
    /// extrapolation step.
    pub fn nth_root(&self, n: u64, residue_choice: u64) -> Result<Padic> {
        assert!(n >= 1 && n % self.p != 0, "n must be coprime to p");
        if self.unit.is_zero() {
            return Err(ArithError::NoRoot { n });
        }
        if self.val % (n as i64) != 0 {
            return Err(ArithError::NoRoot { n });
        }
        let p = self.p;
        let u0 = (&self.unit % BigUint::from(p)).to_u64().unwrap();
        let choice = residue_choice % p;
        if pow_mod_u64(choice, n, p) != u0 {
            return Err(ArithError::BadResidueChoice { choice, actual: u0, p });
        }
        let rel = self.rel_prec();
        // Newton for f(x) = x^n − u: x ← x − f(x)/(n x^{n−1}).
        let mut x = BigUint::from(choice);
        let mut k: i64 = 1;
        while k < rel {
            k = (2 * k).min(rel);
            let m = pow_big(p, k as u64);
            let u = &self.unit % &m;
            let xn1 = x.modpow(&BigUint::from(n - 1), &m);
            let xn = (&xn1 * &x) % &m;
            let deriv = (BigUint::from(n) % &m) * &xn1 % &m;
            let dinv = inv_mod(&deriv, &m).expect("derivative is a unit");
            let fx = (&xn + &m - (&u % &m)) % &m;
            let delta = (fx * dinv) % &m;
            x = (&x + &m - delta) % &m;
        }
        Ok(Padic::from_unit(p, x, self.val / (n as i64), rel))
    }

    /// Teichmüller lift: the unique (p−1)-st root of unity congruent to the
    /// unit part mod p, with the same relative precision, at valuation 0.
    pub fn teichmuller(&self) -> Result<Padic> {
        if self.unit.is_zero() {
            return Err(ArithError::DivisionByZero { p: self.p, prec: self.abs_prec });
        }
        let rel = self.rel_prec();
        let m = pow_big(self.p, rel as u64);
        let mut x = &self.unit % &m;
        // x ← x^p gains one digit of agreement with ω(x) per step.
        let pe = BigUint::from(self.p);
        for _ in 0..rel {
            x = x.modpow(&pe, &m);
        }
        Ok(Padic::from_unit(self.p, x, 0, rel))
    }

    /// Iwasawa logarithm of a unit: log(u) with log extended by log(p) = 0.
    ///
    /// For u ≡ 1 (mod p) this is the usual series; otherwise the Teichmüller
    /// part is projected away first. Precision is preserved (p odd): if u is
    /// known mod p^N then log u is known mod p^N.
    pub fn log(&self) -> Result<Padic> {
        if self.unit.is_zero() {
            return Err(ArithError::DivisionByZero { p: self.p, prec: self.abs_prec });
        }
        if self.val != 0 {
            // log(p^v u) = log u under the Iwasawa branch.
            let unit_only = Padic::from_unit(self.p, self.unit.clone(), 0, self.rel_prec());
            return unit_only.log();
        }
        let rel = self.rel_prec();
        if rel <= 0 {
            return Ok(Padic::zero(self.p, 0));
        }
        let omega = self.teichmuller()?;
        let one_unit = self.div(&omega)?;
        // one_unit ≡ 1 mod p; t = u − 1 has val ≥ 1.
        let t = one_unit.sub(&Padic::one(self.p, rel));
        if t.is_zero() {
            return Ok(Padic::zero(self.p, rel));
        }
        let c = t.valuation();
        debug_assert!(c >= 1);
        // Terms t^k/k; stop once k·c − log_p(k) ≥ rel.
        let mut kmax = 1i64;
        loop {
            let lp = (kmax as f64).ln() / (self.p as f64).ln();
            if kmax * c - lp.ceil() as i64 >= rel {
                break;
            }
            kmax += 1;
        }
        let guard = ((kmax as f64).ln() / (self.p as f64).ln()).ceil() as i64 + 2;
        let work = rel + guard;
        let tw = Padic::from_unit(self.p, t.unit.clone(), t.val, work - t.val);
        let mut sum = Padic::zero(self.p, work);
        let mut tpow = tw.clone();
        for k in 1..=kmax {
            let term = tpow
                .div(&Padic::from_i64(self.p, k, work))
                .expect("k != 0");
            let term = if k % 2 == 0 { term.neg() } else { term };
            sum = sum.add(&term);
            if k < kmax {
                tpow = tpow.mul(&tw);
            }
        }
        Ok(sum.truncate(rel.min(sum.abs_prec())))
    }

    /// p-adic exponential; requires valuation ≥ 1 (p odd).
    pub fn exp(&self) -> Result<Padic> {
        if self.is_zero() {
            return Ok(Padic::one(self.p, self.abs_prec));
        }
        if self.val < 1 {
            return Err(ArithError::Domain(format!(
                "exp requires valuation >= 1, got {}",
                self.val
            )));
        }
        let n = self.abs_prec;
        // v(x^k/k!) ≥ k·v − (k−1)/(p−1) is increasing; find the cutoff.
        let p = self.p as i64;
        let v = self.val;
        let mut kmax = 1i64;
        while kmax * v - (kmax - 1) / (p - 1) - 1 < n {
            kmax += 1;
        }
        let guard = (2 * kmax) / (p - 1) + 2;
        let work = n + guard;
        let xw = Padic::from_unit(self.p, self.unit.clone(), self.val, work - self.val);
        let mut sum = Padic::one(self.p, work);
        let mut term = Padic::one(self.p, work);
        for k in 1..=kmax {
            term = term.mul(&xw);
            term = term.div(&Padic::from_i64(self.p, k, work)).expect("k unit or handled");
            sum = sum.add(&term);
        }
        Ok(sum.truncate(n.min(sum.abs_prec())))
    }
}

impl fmt::Debug for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Padic {
    /// Prints the digit expansion, e.g. `4 + 2*5 + 4*5^2 + O(5^7)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unit.is_zero() {
            return write!(f, "O({}^{})", self.p, self.abs_prec);
        }
        let digits = self.unit_digits();
        let mut first = true;
        for (i, &d) in digits.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let e = self.val + i as i64;
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (d, e) {
                (_, 0) => write!(f, "{}", d)?,
                (1, 1) => write!(f, "{}", self.p)?,
                (1, _) => write!(f, "{}^{}", self.p, e)?,
                (_, 1) => write!(f, "{}*{}", d, self.p)?,
                (_, _) => write!(f, "{}*{}^{}", d, self.p, e)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.p, self.abs_prec)
    }
}

/// Parse a digit expansion like `[4, 2, 4, 3, 1, 0, 3]` into the value
/// Σ d_i p^(val + i) with absolute precision val + digits.len().
pub fn padic_from_digits(p: u64, digits: &[u64], val: i64) -> Padic {
    let mut acc = BigUint::zero();
    for &d in digits.iter().rev() {
        assert!(d < p, "digit {} out of range for p = {}", d, p);
        acc = acc * p + d;
    }
    Padic::from_residue(p, acc, digits.len() as i64).shift(val)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn add_precision_is_min() {
        let a = Padic::from_i64(5, 7, 10);
        let b = Padic::from_i64(5, 3, 4);
        let c = a.add(&b);
        assert_eq!(c.abs_prec(), 4);
        assert_eq!(c.residue(), BigUint::from(10u8));
    }

    #[test]
    fn mul_precision_rule() {
        // a = 5·u known mod 5^10 (rel 9), b = 25·w known mod 5^6 (rel 4):
        // product valuation 3, relative precision 4, so known mod 5^7.
        let a = Padic::from_i64(5, 5 * 7, 10);
        let b = Padic::from_i64(5, 25 * 3, 6);
        let c = a.mul(&b);
        assert_eq!(c.valuation(), 3);
        assert_eq!(c.abs_prec(), 7);
        assert_eq!(c.residue(), BigUint::from((125 * 21 % 78125) as u64));
    }

    #[test]
    fn rational_and_inverse() {
        let x = Padic::from_rational(5, &q(1, 3), 6);
        let three = Padic::from_i64(5, 3, 6);
        let prod = x.mul(&three);
        assert!(prod.agrees_with(&Padic::one(5, 6)));
        let y = x.inv().unwrap();
        assert!(y.agrees_with(&three));
    }

    #[test]
    fn sqrt_identity_case() {
        // a = 1, p = 5, choice = 1 → 1.
        let one = Padic::one(5, 8);
        let r = one.sqrt(1).unwrap();
        assert!(r.agrees_with(&one));
    }

    #[test]
    fn sqrt_of_minus_11_at_5() {
        // Exhaustive oracle mod 5^4: the unique x with x² ≡ −11 and x ≡ 2 (mod 5).
        let m = 625u64;
        let target = (m as i64 - 11) as u64 % m;
        let mut expected = None;
        for x in 0..m {
            if x % 5 == 2 && (x * x) % m == target {
                expected = Some(x);
            }
        }
        let expected = expected.expect("brute-force root exists");
        let a = Padic::from_i64(5, -11, 4);
        let r = a.sqrt(2).unwrap();
        assert_eq!(r.residue(), BigUint::from(expected));
        // The other residue choice gives the negation.
        let r3 = a.sqrt(3).unwrap();
        assert!(r3.agrees_with(&r.neg()));
    }

    #[test]
    fn sqrt_of_minus_7_at_11() {
        // Brute force mod 11^3.
        let m = 1331u64;
        let target = (m as i64 - 7) as u64 % m;
        let mut expected = None;
        for x in 0..m {
            if x % 11 == 2 && (x * x) % m == target {
                expected = Some(x);
            }
        }
        let expected = expected.expect("brute-force root exists");
        let a = Padic::from_i64(11, -7, 3);
        let r = a.sqrt(2).unwrap();
        assert_eq!(r.residue(), BigUint::from(expected));
    }

    #[test]
    fn sqrt_rejects_non_residue() {
        let a = Padic::from_i64(5, 2, 6);
        assert!(a.sqrt(1).is_err());
        let b = Padic::from_i64(5, 4, 6);
        assert!(matches!(b.sqrt(1), Err(ArithError::BadResidueChoice { .. })));
    }

    #[test]
    fn sqrt_squares_back() {
        for &p in &[5u64, 7, 11] {
            for a0 in 1..40i64 {
                let a = Padic::from_i64(p, a0, 9);
                if let Ok((r, _)) = a.sqrt_residues() {
                    let x = a.sqrt(r).unwrap();
                    let diff = x.mul(&x).sub(&a);
                    assert!(
                        diff.is_zero(),
                        "p={}, a={}: x^2-a = {} not zero to precision",
                        p,
                        a0,
                        diff
                    );
                }
            }
        }
    }

    #[test]
    fn nth_root_undoes_power() {
        // n = (p−1)/2 roots, the Rubin-step shape.
        for &p in &[5u64, 7, 11] {
            let n = (p - 1) / 2;
            for u in 2..10i64 {
                let x = Padic::from_i64(p, u, 9);
                if x.valuation() != 0 {
                    continue;
                }
                let xn = x.pow(n as i64).unwrap();
                let seed = (pow_mod_u64(u.rem_euclid(p as i64) as u64, n, p)) % p;
                let _ = seed;
                let r = xn.nth_root(n, u.rem_euclid(p as i64) as u64).unwrap();
                assert!(
                    r.agrees_with(&x),
                    "p={}, u={}: got {}, want {}",
                    p,
                    u,
                    r,
                    x
                );
            }
        }
    }

    #[test]
    fn teichmuller_is_root_of_unity() {
        for &p in &[5u64, 7, 11] {
            for u in 1..p {
                let x = Padic::from_i64(p, u as i64, 8);
                let w = x.teichmuller().unwrap();
                let wp = w.pow((p - 1) as i64).unwrap();
                assert!(wp.agrees_with(&Padic::one(p, 8)), "p={}, u={}", p, u);
                // ω(u) ≡ u mod p.
                assert_eq!(
                    w.residue() % BigUint::from(p),
                    BigUint::from(u)
                );
            }
        }
    }

    #[test]
    fn log_exp_roundtrip() {
        for &p in &[5u64, 7, 11] {
            let x = Padic::from_i64(p, p as i64 * 3 + p as i64 * p as i64, 9);
            let e = x.exp().unwrap();
            let l = e.log().unwrap();
            assert!(l.agrees_with(&x), "p={}: log(exp(x)) = {} vs x = {}", p, l, x);
        }
    }

    #[test]
    fn log_is_homomorphic() {
        let p = 7u64;
        let a = Padic::from_i64(p, 1 + 7 * 2, 9);
        let b = Padic::from_i64(p, 1 + 7 * 5 + 49, 9);
        let lhs = a.mul(&b).log().unwrap();
        let rhs = a.log().unwrap().add(&b.log().unwrap());
        assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn log_kills_teichmuller() {
        let p = 5u64;
        let x = Padic::from_i64(p, 3, 9);
        let w = x.teichmuller().unwrap();
        let lw = w.log().unwrap();
        assert!(lw.is_zero(), "log of Teichmüller lift must vanish, got {}", lw);
    }

    #[test]
    fn digits_and_display() {
        let x = padic_from_digits(5, &[4, 2, 4, 3, 1, 0, 3], 0);
        assert_eq!(x.abs_prec(), 7);
        assert_eq!(
            x.residue(),
            BigUint::from_u64(4 + 2 * 5 + 4 * 25 + 3 * 125 + 625 + 3 * 5u64.pow(6)).unwrap()
        );
        assert_eq!(format!("{}", x), "4 + 2*5 + 4*5^2 + 3*5^3 + 5^4 + 3*5^6 + O(5^7)");
    }

    #[test]
    fn balanced_residues() {
        let x = Padic::from_i64(5, -3, 4);
        assert_eq!(x.balanced_residue(), BigInt::from(-3));
        let y = Padic::from_i64(5, 3, 4);
        assert_eq!(y.balanced_residue(), BigInt::from(3));
    }

    #[test]
    fn negative_valuation_arithmetic() {
        // x = 7^{-2}·u: shifts keep track of the window.
        let u = Padic::from_i64(7, 3, 10);
        let x = u.shift(-2);
        assert_eq!(x.valuation(), -2);
        assert_eq!(x.abs_prec(), 8);
        let back = x.shift(2);
        assert!(back.agrees_with(&u));
    }
}
