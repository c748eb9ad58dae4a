//! Unramified extensions of Q_p of degree ≤ 3.
//!
//! The extension is presented as Q_p[x]/(g(x)) for a monic integer polynomial
//! g that is irreducible mod p — in practice the minimal polynomial of the
//! Hecke eigenvalue generator, so that embeddings of the Hecke field are just
//! coordinate maps. Elements carry the same capped-absolute-precision
//! semantics as [`crate::padic::Padic`]: a value is p^val times a unit vector
//! of coordinates known modulo p^(abs_prec − val).
//!
//! p is a uniformizer here, so the valuation of an element is the minimum of
//! the coordinate valuations.

use crate::padic::Padic;
use crate::primes::{pow_big, val_and_unit};
use crate::{ArithError, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;
use std::sync::{Arc, Mutex};

/// Shared context: the prime, degree, and defining polynomial.
#[derive(Debug)]
pub struct UnramCtx {
    p: u64,
    deg: usize,
    /// Monic defining polynomial x^deg + g[deg−1]·x^(deg−1) + … + g[0],
    /// stored lowest-degree first, integer coefficients.
    g: Vec<BigInt>,
    /// Cached Frobenius image of the generator: coordinates of the root of g
    /// congruent to x^p mod p, stored at the highest precision computed.
    frob_gen: Mutex<Option<(i64, Vec<BigUint>)>>,
}

impl PartialEq for UnramCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.deg == other.deg && self.g == other.g
    }
}

impl Eq for UnramCtx {}

impl UnramCtx {
    /// Create the degree-d unramified context defined by the monic integer
    /// polynomial with low-order coefficients `g_low` (length d).
    ///
    /// Panics unless 1 ≤ d ≤ 3 and the polynomial is irreducible mod p.
    pub fn new(p: u64, g_low: Vec<BigInt>) -> Arc<Self> {
        let deg = g_low.len();
        assert!((1..=3).contains(&deg), "degree must be 1..=3");
        assert!(p >= 3);
        if deg >= 2 {
            assert!(
                !has_root_mod_p(&g_low, p),
                "defining polynomial has a root mod {}, not irreducible",
                p
            );
        }
        // For degree 3, having no root mod p already implies irreducibility.
        Arc::new(UnramCtx { p, deg, g: g_low, frob_gen: Mutex::new(None) })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.deg
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.g
    }

    /// Residue field cardinality p^deg (as u64; fine for p ≤ 11, deg ≤ 3).
    pub fn residue_card(&self) -> u64 {
        self.p.pow(self.deg as u32)
    }
}

fn has_root_mod_p(g_low: &[BigInt], p: u64) -> bool {
    for r in 0..p {
        let mut acc = BigInt::zero();
        let rb = BigInt::from(r);
        let mut xpow = BigInt::one();
        for c in g_low {
            acc += c * &xpow;
            xpow *= &rb;
        }
        acc += &xpow; // monic leading term
        if acc.mod_floor(&BigInt::from(p)).is_zero() {
            return true;
        }
    }
    false
}

/// An element of the unramified extension, capped absolute precision.
#[derive(Clone, PartialEq, Eq)]
pub struct UnramElem {
    ctx: Arc<UnramCtx>,
    val: i64,
    abs_prec: i64,
    /// Unit-part coordinates mod p^(abs_prec − val); not all ≡ 0 mod p
    /// unless the element is zero to precision (then all coordinates are 0).
    coords: Vec<BigUint>,
}

impl UnramElem {
    pub fn zero(ctx: &Arc<UnramCtx>, abs_prec: i64) -> Self {
        UnramElem {
            ctx: ctx.clone(),
            val: abs_prec,
            abs_prec,
            coords: vec![BigUint::zero(); ctx.deg],
        }
    }

    pub fn one(ctx: &Arc<UnramCtx>, abs_prec: i64) -> Self {
        let mut coords = vec![BigInt::zero(); ctx.deg];
        coords[0] = BigInt::one();
        Self::from_int_coords(ctx, &coords, abs_prec)
    }

    /// The generator x of the extension.
    pub fn gen(ctx: &Arc<UnramCtx>, abs_prec: i64) -> Self {
        let mut coords = vec![BigInt::zero(); ctx.deg];
        if ctx.deg == 1 {
            // Degree 1: the generator is the image root −g[0].
            coords[0] = -ctx.g[0].clone();
        } else {
            coords[1] = BigInt::one();
        }
        Self::from_int_coords(ctx, &coords, abs_prec)
    }

    /// Build from integer coordinates (basis 1, x, x², low to high),
    /// known modulo p^abs_prec.
    pub fn from_int_coords(ctx: &Arc<UnramCtx>, coords: &[BigInt], abs_prec: i64) -> Self {
        assert_eq!(coords.len(), ctx.deg);
        if abs_prec <= 0 {
            return Self::zero(ctx, abs_prec);
        }
        let m = BigInt::from(pow_big(ctx.p, abs_prec as u64));
        let red: Vec<BigUint> = coords
            .iter()
            .map(|c| c.mod_floor(&m).to_biguint().unwrap())
            .collect();
        Self::normalize(ctx.clone(), red, 0, abs_prec)
    }

    /// Build from Padic coordinates; the element's absolute precision is the
    /// minimum of the coordinate precisions.
    pub fn from_padic_coords(ctx: &Arc<UnramCtx>, coords: &[Padic]) -> Self {
        assert_eq!(coords.len(), ctx.deg);
        let abs = coords.iter().map(|c| c.abs_prec()).min().unwrap();
        let min_val = coords.iter().map(|c| c.valuation()).min().unwrap().min(abs);
        if min_val >= abs {
            return Self::zero(ctx, abs);
        }
        let m = pow_big(ctx.p, (abs - min_val) as u64);
        let red: Vec<BigUint> = coords
            .iter()
            .map(|c| {
                if c.is_zero() || c.valuation() >= abs {
                    BigUint::zero()
                } else {
                    (pow_big(ctx.p, (c.valuation() - min_val) as u64) * c.unit_part()) % &m
                }
            })
            .collect();
        Self::normalize(ctx.clone(), red, min_val, abs)
    }

    /// Embed a Padic (degree-1 value) into the extension.
    pub fn from_padic(ctx: &Arc<UnramCtx>, x: &Padic) -> Self {
        assert_eq!(x.prime(), ctx.p);
        let mut coords = vec![Padic::zero(x.prime(), x.abs_prec()); ctx.deg];
        coords[0] = x.clone();
        Self::from_padic_coords(ctx, &coords)
    }

    /// Normalize raw unit-part-candidate coords at valuation `val`,
    /// known mod p^(abs − val): strip common powers of p.
    fn normalize(ctx: Arc<UnramCtx>, coords: Vec<BigUint>, val: i64, abs: i64) -> Self {
        if coords.iter().all(|c| c.is_zero()) || val >= abs {
            return Self::zero(&ctx, abs);
        }
        let minv = coords
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| val_and_unit(c, ctx.p).0)
            .min()
            .unwrap();
        let strip = minv.min(abs - val);
        let new_val = val + strip;
        if new_val >= abs {
            return Self::zero(&ctx, abs);
        }
        let m = pow_big(ctx.p, (abs - new_val) as u64);
        let pd = pow_big(ctx.p, strip as u64);
        let coords: Vec<BigUint> = coords.iter().map(|c| (c / &pd) % &m).collect();
        if coords.iter().all(|c| c.is_zero()) {
            return Self::zero(&ctx, abs);
        }
        UnramElem { ctx, val: new_val, abs_prec: abs, coords }
    }

    pub fn ctx(&self) -> &Arc<UnramCtx> {
        &self.ctx
    }

    pub fn prime(&self) -> u64 {
        self.ctx.p
    }

    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn abs_prec(&self) -> i64 {
        self.abs_prec
    }

    pub fn rel_prec(&self) -> i64 {
        self.abs_prec - self.val
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Coordinates of the element (including the p^val factor) as Padics.
    pub fn padic_coords(&self) -> Vec<Padic> {
        self.coords
            .iter()
            .map(|c| Padic::from_residue(self.ctx.p, c.clone(), self.rel_prec()).shift(self.val))
            .collect()
    }

    /// The degree-1 part, if the element lies in Q_p (other coords zero).
    pub fn as_padic(&self) -> Option<Padic> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.padic_coords()[0].clone())
        } else {
            None
        }
    }

    pub fn truncate(&self, abs_prec: i64) -> Self {
        assert!(abs_prec <= self.abs_prec);
        if self.val >= abs_prec || self.is_zero() {
            return Self::zero(&self.ctx, abs_prec.min(self.abs_prec));
        }
        let m = pow_big(self.ctx.p, (abs_prec - self.val) as u64);
        let coords: Vec<BigUint> = self.coords.iter().map(|c| c % &m).collect();
        Self::normalize(self.ctx.clone(), coords, self.val, abs_prec)
    }

    pub fn shift(&self, k: i64) -> Self {
        UnramElem {
            ctx: self.ctx.clone(),
            val: self.val + k,
            abs_prec: self.abs_prec + k,
            coords: self.coords.clone(),
        }
    }

    fn check_ctx(&self, other: &UnramElem) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(ArithError::Incompatible("mixed unramified contexts".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &UnramElem) -> UnramElem {
        self.check_ctx(other).expect("same context");
        let abs = self.abs_prec.min(other.abs_prec);
        let v0 = self.val.min(other.val).min(abs);
        if v0 >= abs {
            return Self::zero(&self.ctx, abs);
        }
        let m = pow_big(self.ctx.p, (abs - v0) as u64);
        let mut coords = vec![BigUint::zero(); self.ctx.deg];
        for x in [self, other] {
            if x.is_zero() || x.val >= abs {
                continue;
            }
            let lift = pow_big(self.ctx.p, (x.val - v0) as u64);
            for (i, c) in x.coords.iter().enumerate() {
                coords[i] = (&coords[i] + (c * &lift) % &m) % &m;
            }
        }
        Self::normalize(self.ctx.clone(), coords, v0, abs)
    }

    pub fn neg(&self) -> UnramElem {
        if self.is_zero() {
            return self.clone();
        }
        let m = pow_big(self.ctx.p, self.rel_prec() as u64);
        let coords: Vec<BigUint> = self
            .coords
            .iter()
            .map(|c| if c.is_zero() { BigUint::zero() } else { &m - c })
            .collect();
        UnramElem { ctx: self.ctx.clone(), val: self.val, abs_prec: self.abs_prec, coords }
    }

    pub fn sub(&self, other: &UnramElem) -> UnramElem {
        self.add(&other.neg())
    }

    /// Polynomial multiplication followed by reduction mod the defining
    /// polynomial, coefficients mod p^rel.
    pub fn mul(&self, other: &UnramElem) -> UnramElem {
        self.check_ctx(other).expect("same context");
        let val = self.val + other.val;
        let rel = self.rel_prec().min(other.rel_prec());
        if rel <= 0 || self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx, val);
        }
        let m = pow_big(self.ctx.p, rel as u64);
        let prod = poly_mulmod(&self.ctx, &self.coords, &other.coords, &m);
        Self::normalize(self.ctx.clone(), prod, val, val + rel)
    }

    pub fn inv(&self) -> Result<UnramElem> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero { p: self.ctx.p, prec: self.abs_prec });
        }
        let rel = self.rel_prec();
        // Invert mod p by brute force in the residue field (p^deg ≤ 1331),
        // then Newton-lift: y ← y(2 − a·y).
        let p = self.ctx.p;
        let pb = BigUint::from(p);
        let a_mod_p: Vec<BigUint> = self.coords.iter().map(|c| c % &pb).collect();
        let y0 = invert_in_residue_field(&self.ctx, &a_mod_p).ok_or_else(|| {
            ArithError::DivisionByZero { p, prec: self.abs_prec }
        })?;
        let mut y = y0;
        let mut k: i64 = 1;
        while k < rel {
            k = (2 * k).min(rel);
            let m = pow_big(p, k as u64);
            let ay = poly_mulmod(&self.ctx, &self.coords, &y, &m);
            // 2 − a·y
            let mut t: Vec<BigUint> = ay.iter().map(|c| (&m - (c % &m)) % &m).collect();
            t[0] = (&t[0] + 2u8) % &m;
            y = poly_mulmod(&self.ctx, &y, &t, &m);
        }
        let res = Self::normalize(self.ctx.clone(), y, -self.val, -self.val + rel);
        Ok(res)
    }

    pub fn div(&self, other: &UnramElem) -> Result<UnramElem> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<UnramElem> {
        if e == 0 {
            return Ok(Self::one(&self.ctx, self.rel_prec().max(1)));
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc: Option<UnramElem> = None;
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

    /// The Frobenius automorphism x ↦ x^p applied to this element.
    pub fn frobenius(&self) -> UnramElem {
        if self.ctx.deg == 1 || self.is_zero() {
            return self.clone();
        }
        let rel = self.rel_prec();
        let m = pow_big(self.ctx.p, rel as u64);
        let gp = frobenius_gen(&self.ctx, rel);
        // Apply coordinate-wise: Σ a_i · σ(x)^i.
        let mut acc = vec![BigUint::zero(); self.ctx.deg];
        let mut gpow = vec![BigUint::zero(); self.ctx.deg];
        gpow[0] = BigUint::one();
        for i in 0..self.ctx.deg {
            for (j, a) in gpow.iter().enumerate() {
                acc[j] = (&acc[j] + &self.coords[i] * a) % &m;
            }
            if i + 1 < self.ctx.deg {
                gpow = poly_mulmod(&self.ctx, &gpow, &gp, &m);
            }
        }
        Self::normalize(self.ctx.clone(), acc, self.val, self.val + rel)
    }

    /// Norm down to Q_p: product of the Frobenius orbit.
    pub fn norm(&self) -> Padic {
        let mut prod = self.clone();
        let mut fr = self.clone();
        for _ in 1..self.ctx.deg {
            fr = fr.frobenius();
            prod = prod.mul(&fr);
        }
        prod.as_padic().expect("norm lies in Q_p")
    }

    /// Trace down to Q_p: sum of the Frobenius orbit.
    pub fn trace(&self) -> Padic {
        let mut sum = self.clone();
        let mut fr = self.clone();
        for _ in 1..self.ctx.deg {
            fr = fr.frobenius();
            sum = sum.add(&fr);
        }
        sum.as_padic().expect("trace lies in Q_p")
    }

    /// Teichmüller lift of a unit: iterate x ← x^(p^deg) to convergence.
    pub fn teichmuller(&self) -> Result<UnramElem> {
        if self.val != 0 {
            return Err(ArithError::Domain("teichmuller requires a unit".into()));
        }
        let rel = self.rel_prec();
        let m = pow_big(self.ctx.p, rel as u64);
        let q = self.ctx.residue_card();
        let mut x = self.coords.clone();
        for _ in 0..rel {
            x = poly_powmod(&self.ctx, &x, q, &m);
        }
        Ok(Self::normalize(self.ctx.clone(), x, 0, rel))
    }

    /// Iwasawa logarithm (log p = 0) of a nonzero element: projects away the
    /// Teichmüller part of the unit and sums the usual series.
    pub fn log(&self) -> Result<UnramElem> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero { p: self.ctx.p, prec: self.abs_prec });
        }
        let unit = UnramElem {
            ctx: self.ctx.clone(),
            val: 0,
            abs_prec: self.rel_prec(),
            coords: self.coords.clone(),
        };
        let rel = unit.rel_prec();
        let w = unit.teichmuller()?;
        let u1 = unit.div(&w)?;
        let t = u1.sub(&Self::one(&self.ctx, rel));
        if t.is_zero() {
            return Ok(Self::zero(&self.ctx, rel));
        }
        let c = t.valuation();
        let p = self.ctx.p;
        let mut kmax = 1i64;
        loop {
            let lp = (kmax as f64).ln() / (p as f64).ln();
            if kmax * c - lp.ceil() as i64 >= rel {
                break;
            }
            kmax += 1;
        }
        let guard = ((kmax as f64).ln() / (p as f64).ln()).ceil() as i64 + 2;
        let work = rel + guard;
        let tw = UnramElem {
            ctx: self.ctx.clone(),
            val: t.val,
            abs_prec: work,
            coords: t.coords.clone(),
        };
        // Re-reduce coords mod p^(work−val): they were mod p^(rel−val) ⊂ ok,
        // extra precision is honest only up to rel; we truncate at the end.
        let mut sum = Self::zero(&self.ctx, work);
        let mut tpow = tw.clone();
        for k in 1..=kmax {
            let kinv = Padic::from_i64(p, k, work).inv()?;
            let term = tpow.scale_padic(&kinv);
            let term = if k % 2 == 0 { term.neg() } else { term };
            sum = sum.add(&term);
            if k < kmax {
                tpow = tpow.mul(&tw);
            }
        }
        Ok(sum.truncate(rel.min(sum.abs_prec)))
    }

    /// Multiply by a Padic scalar.
    pub fn scale_padic(&self, s: &Padic) -> UnramElem {
        self.mul(&Self::from_padic(&self.ctx, s))
    }

    /// n-th root with a caller-chosen residue seed (coordinates mod p),
    /// for n coprime to p. Requires n | val.
    pub fn nth_root_with_seed(&self, n: u64, seed: &[u64]) -> Result<UnramElem> {
        assert!(n >= 1 && n % self.ctx.p != 0);
        if self.is_zero() {
            return Err(ArithError::NoRoot { n });
        }
        if self.val % (n as i64) != 0 {
            return Err(ArithError::NoRoot { n });
        }
        let p = self.ctx.p;
        let rel = self.rel_prec();
        // Verify the seed: seed^n ≡ unit (mod p).
        let pb = BigUint::from(p);
        let seed_v: Vec<BigUint> = seed.iter().map(|&s| BigUint::from(s % p)).collect();
        let sn = poly_powmod(&self.ctx, &seed_v, n, &pb);
        let unit_mod_p: Vec<BigUint> = self.coords.iter().map(|c| c % &pb).collect();
        if sn != unit_mod_p {
            return Err(ArithError::NoRoot { n });
        }
        // Newton for x^n − u.
        let mut x = seed_v;
        let mut k: i64 = 1;
        while k < rel {
            k = (2 * k).min(rel);
            let m = pow_big(p, k as u64);
            let xn1 = poly_powmod(&self.ctx, &x, n - 1, &m);
            let xn = poly_mulmod(&self.ctx, &xn1, &x, &m);
            // deriv = n·x^{n−1}
            let nb = BigUint::from(n) % &m;
            let deriv: Vec<BigUint> = xn1.iter().map(|c| (c * &nb) % &m).collect();
            let deriv_el = UnramElem {
                ctx: self.ctx.clone(),
                val: 0,
                abs_prec: k,
                coords: deriv,
            };
            let dinv = deriv_el.inv()?;
            // fx = x^n − u
            let fx: Vec<BigUint> = xn
                .iter()
                .zip(self.coords.iter())
                .map(|(a, b)| (a + &m - (b % &m)) % &m)
                .collect();
            let delta = poly_mulmod(&self.ctx, &fx, &dinv.coords, &m);
            x = x
                .iter()
                .zip(delta.iter())
                .map(|(a, d)| (a + &m - d) % &m)
                .collect();
        }
        Ok(Self::normalize(self.ctx.clone(), x, self.val / n as i64, self.val / n as i64 + rel))
    }

    /// All residue-field seeds s with s^n = unit mod p (brute force over
    /// F_{p^deg}; at most p^3 ≤ 1331 candidates).
    pub fn nth_root_seeds(&self, n: u64) -> Vec<Vec<u64>> {
        let p = self.ctx.p;
        let pb = BigUint::from(p);
        let unit_mod_p: Vec<BigUint> = self.coords.iter().map(|c| c % &pb).collect();
        let d = self.ctx.deg;
        let card = p.pow(d as u32);
        let mut out = Vec::new();
        for idx in 0..card {
            let mut rem = idx;
            let mut cand = vec![0u64; d];
            for c in cand.iter_mut() {
                *c = rem % p;
                rem /= p;
            }
            let cv: Vec<BigUint> = cand.iter().map(|&c| BigUint::from(c)).collect();
            if poly_powmod(&self.ctx, &cv, n, &pb) == unit_mod_p {
                out.push(cand);
            }
        }
        out
    }

    pub fn agrees_with(&self, other: &UnramElem) -> bool {
        if self.ctx != other.ctx {
            return false;
        }
        let n = self.abs_prec.min(other.abs_prec);
        self.truncate(n).sub(&other.truncate(n)).is_zero()
    }
}

/// Multiply two coordinate vectors mod (g, m).
fn poly_mulmod(ctx: &UnramCtx, a: &[BigUint], b: &[BigUint], m: &BigUint) -> Vec<BigUint> {
    let d = ctx.deg;
    let mut prod = vec![BigUint::zero(); 2 * d - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            prod[i + j] = (&prod[i + j] + ai * bj) % m;
        }
    }
    // Reduce degrees ≥ d by x^d ≡ −Σ g_i x^i.
    let g_mod: Vec<BigUint> = ctx
        .g
        .iter()
        .map(|c| c.mod_floor(&BigInt::from(m.clone())).to_biguint().unwrap())
        .collect();
    for k in (d..2 * d - 1).rev() {
        let coeff = std::mem::replace(&mut prod[k], BigUint::zero());
        if coeff.is_zero() {
            continue;
        }
        for i in 0..d {
            if g_mod[i].is_zero() {
                continue;
            }
            // x^k = x^{k-d}·x^d = −Σ g_i x^{k-d+i}
            let sub = (&coeff * &g_mod[i]) % m;
            let idx = k - d + i;
            prod[idx] = (&prod[idx] + m - sub) % m;
        }
    }
    prod.truncate(d);
    prod
}

/// a^e mod (g, m) by binary powering.
fn poly_powmod(ctx: &UnramCtx, a: &[BigUint], mut e: u64, m: &BigUint) -> Vec<BigUint> {
    let d = ctx.deg;
    let mut result = vec![BigUint::zero(); d];
    result[0] = BigUint::one() % m;
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(ctx, &result, &base, m);
        }
        e >>= 1;
        if e > 0 {
            base = poly_mulmod(ctx, &base, &base, m);
        }
    }
    result
}

/// Coordinates mod p^rel of the Frobenius image of the generator: the unique
/// root of g congruent to x^p mod p, found by Newton lifting from the
/// residue field. Cached on the context at the highest precision seen.
fn frobenius_gen(ctx: &Arc<UnramCtx>, rel: i64) -> Vec<BigUint> {
    let m = pow_big(ctx.p, rel as u64);
    if let Some((crel, coords)) = ctx.frob_gen.lock().unwrap().as_ref() {
        if *crel >= rel {
            return coords.iter().map(|c| c % &m).collect();
        }
    }
    // Seed: x^p in the residue field.
    let pb = BigUint::from(ctx.p);
    let mut gen_v = vec![BigUint::zero(); ctx.deg];
    gen_v[1] = BigUint::one();
    let seed = poly_powmod(ctx, &gen_v, ctx.p, &pb);
    let mut y = UnramElem::normalize(ctx.clone(), seed, 0, rel);

    let consts: Vec<UnramElem> = (0..ctx.deg)
        .map(|i| {
            let mut c = vec![BigInt::zero(); ctx.deg];
            c[0] = ctx.g[i].clone();
            UnramElem::from_int_coords(ctx, &c, rel)
        })
        .collect();
    let eval_g_and_deriv = |y: &UnramElem| -> (UnramElem, UnramElem) {
        // Horner on the monic g and its derivative simultaneously.
        let mut gv = UnramElem::one(ctx, rel);
        let mut dv = UnramElem::zero(ctx, rel);
        for i in (0..ctx.deg).rev() {
            dv = dv.mul(y).add(&gv);
            gv = gv.mul(y).add(&consts[i]);
        }
        (gv, dv)
    };

    let mut steps = 1u32;
    let mut reach = 1i64;
    while reach < rel {
        reach *= 2;
        steps += 1;
    }
    for _ in 0..=steps {
        let (gv, dv) = eval_g_and_deriv(&y);
        if gv.is_zero() {
            break;
        }
        let corr = gv.mul(&dv.inv().expect("derivative is a unit at the Frobenius lift"));
        y = y.sub(&corr);
    }
    let (check, _) = eval_g_and_deriv(&y);
    assert!(check.is_zero(), "Frobenius lift did not converge");
    assert!(y.val >= 0, "Frobenius image of an integral generator is integral");

    let scale = pow_big(ctx.p, y.val as u64);
    let raw: Vec<BigUint> = y.coords.iter().map(|c| c * &scale % &m).collect();
    *ctx.frob_gen.lock().unwrap() = Some((rel, raw.clone()));
    raw
}

/// Brute-force inverse in the residue field F_{p^deg} (cardinality ≤ 1331).
fn invert_in_residue_field(ctx: &UnramCtx, a: &[BigUint]) -> Option<Vec<BigUint>> {
    let p = ctx.p;
    let pb = BigUint::from(p);
    if a.iter().all(|c| c.is_zero()) {
        return None;
    }
    let d = ctx.deg;
    let card = p.pow(d as u32);
    let mut one = vec![BigUint::zero(); d];
    one[0] = BigUint::one();
    for idx in 1..card {
        let mut rem = idx;
        let mut cand = vec![BigUint::zero(); d];
        for c in cand.iter_mut() {
            *c = BigUint::from(rem % p);
            rem /= p;
        }
        if poly_mulmod(ctx, a, &cand, &pb) == one {
            return Some(cand);
        }
    }
    None
}

impl fmt::Debug for UnramElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for UnramElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "w", "w^2"];
        if self.is_zero() {
            return write!(f, "O({}^{})", self.ctx.p, self.abs_prec);
        }
        let mut first = true;
        for (i, c) in self.padic_coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "({})", c)?;
            } else {
                write!(f, "({})*{}", c, names[i])?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx_deg2() -> Arc<UnramCtx> {
        // x² − 2 is irreducible mod 5 (2 is a non-residue mod 5).
        UnramCtx::new(5, vec![BigInt::from(-2), BigInt::from(0)])
    }

    fn ctx_deg3() -> Arc<UnramCtx> {
        // x³ − x² − 2x + 1 is irreducible mod 11 (no roots).
        UnramCtx::new(11, vec![BigInt::from(1), BigInt::from(-2), BigInt::from(-1)])
    }

    #[test]
    fn generator_satisfies_minpoly_deg2() {
        let ctx = ctx_deg2();
        let w = UnramElem::gen(&ctx, 8);
        let w2 = w.mul(&w);
        let two = UnramElem::from_int_coords(&ctx, &[BigInt::from(2), BigInt::zero()], 8);
        assert!(w2.agrees_with(&two));
    }

    #[test]
    fn generator_satisfies_minpoly_deg3() {
        let ctx = ctx_deg3();
        let w = UnramElem::gen(&ctx, 6);
        // w³ − w² − 2w + 1 = 0
        let lhs = w
            .pow(3)
            .unwrap()
            .sub(&w.pow(2).unwrap())
            .sub(&w.add(&w))
            .add(&UnramElem::one(&ctx, 6));
        assert!(lhs.is_zero(), "minpoly residual: {}", lhs);
    }

    #[test]
    fn inverse_roundtrip() {
        let ctx = ctx_deg2();
        let x = UnramElem::from_int_coords(&ctx, &[BigInt::from(3), BigInt::from(7)], 8);
        let y = x.inv().unwrap();
        let prod = x.mul(&y);
        assert!(prod.agrees_with(&UnramElem::one(&ctx, 8)));
    }

    #[test]
    fn frobenius_fixes_qp_and_has_right_order() {
        let ctx = ctx_deg2();
        let a = UnramElem::from_int_coords(&ctx, &[BigInt::from(7), BigInt::zero()], 8);
        assert!(a.frobenius().agrees_with(&a));
        let x = UnramElem::from_int_coords(&ctx, &[BigInt::from(3), BigInt::from(1)], 8);
        let fx = x.frobenius();
        assert!(!fx.agrees_with(&x));
        assert!(fx.frobenius().agrees_with(&x), "Frobenius² = id on deg 2");

        let ctx3 = ctx_deg3();
        let y = UnramElem::from_int_coords(
            &ctx3,
            &[BigInt::from(2), BigInt::from(5), BigInt::from(1)],
            6,
        );
        let f3 = y.frobenius().frobenius().frobenius();
        assert!(f3.agrees_with(&y), "Frobenius³ = id on deg 3");
    }

    #[test]
    fn frobenius_is_multiplicative() {
        let ctx = ctx_deg3();
        let x = UnramElem::from_int_coords(
            &ctx,
            &[BigInt::from(2), BigInt::from(5), BigInt::from(1)],
            6,
        );
        let y = UnramElem::from_int_coords(
            &ctx,
            &[BigInt::from(4), BigInt::from(0), BigInt::from(3)],
            6,
        );
        let lhs = x.mul(&y).frobenius();
        let rhs = x.frobenius().mul(&y.frobenius());
        assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn norm_and_trace_land_in_qp() {
        let ctx = ctx_deg2();
        let x = UnramElem::from_int_coords(&ctx, &[BigInt::from(3), BigInt::from(4)], 8);
        // For x = a + b·w with w² = 2: N(x) = a² − 2b², tr(x) = 2a.
        let n = x.norm();
        let t = x.trace();
        assert_eq!(n.balanced_residue(), BigInt::from(9 - 32));
        assert_eq!(t.balanced_residue(), BigInt::from(6));
    }

    #[test]
    fn log_is_homomorphic_in_extension() {
        let ctx = ctx_deg2();
        let x = UnramElem::from_int_coords(&ctx, &[BigInt::from(1 + 5), BigInt::from(5)], 8);
        let y = UnramElem::from_int_coords(&ctx, &[BigInt::from(1 + 50), BigInt::from(25)], 8);
        let lhs = x.mul(&y).log().unwrap();
        let rhs = x.log().unwrap().add(&y.log().unwrap());
        assert!(lhs.agrees_with(&rhs), "lhs {} vs rhs {}", lhs, rhs);
    }

    #[test]
    fn nth_root_in_extension() {
        let ctx = ctx_deg2();
        let x = UnramElem::from_int_coords(&ctx, &[BigInt::from(3), BigInt::from(2)], 8);
        let n = 2u64; // (p−1)/2 for p = 5
        let xn = x.pow(n as i64).unwrap();
        let seeds = xn.nth_root_seeds(n);
        assert!(!seeds.is_empty());
        let mut found = false;
        for s in seeds {
            let r = xn.nth_root_with_seed(n, &s).unwrap();
            assert!(r.pow(n as i64).unwrap().agrees_with(&xn));
            if r.agrees_with(&x) {
                found = true;
            }
        }
        assert!(found, "original root among the lifted roots");
    }
}
