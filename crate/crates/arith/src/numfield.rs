//! Number fields of degree ≤ 3 with exact rational coordinates.
//!
//! Covers the three shapes the pipeline needs:
//! * Q itself (degree 1);
//! * imaginary quadratic fields K = Q(√D), basis {1, √D};
//! * the Hecke field E = Q(ν), totally real of degree ≤ 3, basis {1, ν, ν²}.
//!
//! [`BiElem`] handles the compositum K·E with the tensor basis
//! {√D^i · ν^j}: CM values of the recurrence live there.
//!
//! Embeddings never guess: the caller pins the image of each generator and
//! the image is verified against the minimal polynomial.

use crate::padic::Padic;
use crate::unram::UnramElem;
use crate::{ArithError, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

/// A number field of degree ≤ 3 given by a monic integer minimal polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    label: String,
    /// Low-order coefficients of the monic minimal polynomial
    /// x^deg + c[deg−1]·x^(deg−1) + … + c[0]; length = degree.
    minpoly: Vec<BigInt>,
}

impl NumberField {
    /// The rationals, degree 1 (minimal polynomial x).
    pub fn rationals() -> Arc<Self> {
        Arc::new(NumberField { label: "Q".into(), minpoly: vec![BigInt::zero()] })
    }

    /// Q(√D): minimal polynomial x² − D.
    pub fn quadratic_sqrt(d: i64) -> Arc<Self> {
        assert!(d != 0 && d != 1, "D must define a quadratic field");
        Arc::new(NumberField {
            label: format!("Q(sqrt({}))", d),
            minpoly: vec![BigInt::from(-d), BigInt::zero()],
        })
    }

    /// General constructor from low-order coefficients of a monic polynomial.
    pub fn new(label: &str, minpoly_low: Vec<BigInt>) -> Arc<Self> {
        let deg = minpoly_low.len();
        assert!((1..=16).contains(&deg), "degree must be 1..=16");
        Arc::new(NumberField { label: label.into(), minpoly: minpoly_low })
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    /// For quadratic x² − t·x + n, returns (t, n).
    pub fn quadratic_tn(&self) -> Option<(BigInt, BigInt)> {
        if self.degree() != 2 {
            return None;
        }
        Some((-self.minpoly[1].clone(), self.minpoly[0].clone()))
    }

    /// All roots of the minimal polynomial in Z_p to the given precision,
    /// by Hensel lifting of the simple roots mod p.
    pub fn padic_roots(&self, p: u64, abs_prec: i64) -> Vec<Padic> {
        let mut out = Vec::new();
        'root: for r in 0..p {
            // poly(r) ≡ 0 and poly'(r) ≠ 0 mod p → unique Hensel lift.
            let (fr, dfr) = self.eval_mod_p(r, p);
            if fr != 0 {
                continue;
            }
            if dfr == 0 {
                // Repeated root mod p; skip (caller's data never hits this).
                continue 'root;
            }
            // Newton: x ← x − f(x)/f'(x) in Padic arithmetic.
            let mut x = Padic::from_i64(p, r as i64, 1);
            let mut k = 1i64;
            while k < abs_prec {
                k = (2 * k).min(abs_prec);
                let xk = Padic::from_residue(p, x.residue(), k.min(x.abs_prec()));
                let xk = lift_to(p, &xk, k);
                let (f, df) = self.eval_padic(&xk);
                x = xk.sub(&f.div(&df).expect("simple root"));
            }
            out.push(x.truncate(abs_prec));
        }
        out
    }

    fn eval_mod_p(&self, r: u64, p: u64) -> (u64, u64) {
        use crate::primes::mul_mod_u64;
        use num_traits::ToPrimitive;
        let d = self.degree();
        // f(r) and f'(r) mod p with monic leading term.
        let coeff = |i: usize| -> u64 {
            if i == d {
                1
            } else {
                self.minpoly[i]
                    .mod_floor(&BigInt::from(p))
                    .to_u64()
                    .expect("residue fits in u64")
            }
        };
        let mut f = 0u64;
        let mut df = 0u64;
        for i in (0..=d).rev() {
            df = (mul_mod_u64(df, r, p) + f) % p;
            f = (mul_mod_u64(f, r, p) + coeff(i)) % p;
        }
        (f, df)
    }

    fn eval_padic(&self, x: &Padic) -> (Padic, Padic) {
        let p = x.prime();
        let n = x.abs_prec();
        let d = self.degree();
        let mut f = Padic::zero(p, n);
        let mut df = Padic::zero(p, n);
        for i in (0..=d).rev() {
            let c = if i == d {
                Padic::one(p, n)
            } else {
                Padic::from_bigint(p, &self.minpoly[i], n)
            };
            df = df.mul(x).add(&f);
            f = f.mul(x).add(&c);
        }
        (f, df)
    }
}

fn lift_to(p: u64, x: &Padic, abs: i64) -> Padic {
    // Reinterpret a residue at higher claimed precision (Newton supplies the
    // correction, so the extra digits are provisional, not asserted).
    Padic::from_residue(p, x.residue(), abs.max(x.abs_prec()))
}

/// An element of a [`NumberField`], with exact rational coordinates in the
/// power basis 1, ν, ν².
#[derive(Clone, PartialEq, Eq)]
pub struct NfElem {
    field: Arc<NumberField>,
    coords: Vec<BigRational>,
}

impl NfElem {
    pub fn zero(field: &Arc<NumberField>) -> Self {
        NfElem { field: field.clone(), coords: vec![BigRational::zero(); field.degree()] }
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_rational(field, BigRational::one())
    }

    pub fn gen(field: &Arc<NumberField>) -> Self {
        let mut coords = vec![BigRational::zero(); field.degree()];
        if field.degree() == 1 {
            coords[0] = BigRational::from(-field.minpoly[0].clone());
        } else {
            coords[1] = BigRational::one();
        }
        NfElem { field: field.clone(), coords }
    }

    pub fn from_rational(field: &Arc<NumberField>, q: BigRational) -> Self {
        let mut coords = vec![BigRational::zero(); field.degree()];
        coords[0] = q;
        NfElem { field: field.clone(), coords }
    }

    pub fn from_i64(field: &Arc<NumberField>, n: i64) -> Self {
        Self::from_rational(field, BigRational::from(BigInt::from(n)))
    }

    pub fn from_coords(field: &Arc<NumberField>, coords: Vec<BigRational>) -> Self {
        assert_eq!(coords.len(), field.degree());
        NfElem { field: field.clone(), coords }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.coords[0]
    }

    fn check_field(&self, other: &NfElem) {
        assert!(
            self.field == other.field,
            "mixed fields {} and {}",
            self.field.label,
            other.field.label
        );
    }

    pub fn add(&self, other: &NfElem) -> NfElem {
        self.check_field(other);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        NfElem { field: self.field.clone(), coords }
    }

    pub fn neg(&self) -> NfElem {
        NfElem {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &NfElem) -> NfElem {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &BigRational) -> NfElem {
        NfElem {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    pub fn mul(&self, other: &NfElem) -> NfElem {
        self.check_field(other);
        let d = self.field.degree();
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for i in 0..d {
            if self.coords[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if other.coords[j].is_zero() {
                    continue;
                }
                prod[i + j] += &self.coords[i] * &other.coords[j];
            }
        }
        // Reduce x^k for k ≥ d via x^d = −Σ c_i x^i.
        for k in (d..2 * d - 1).rev() {
            let coeff = std::mem::replace(&mut prod[k], BigRational::zero());
            if coeff.is_zero() {
                continue;
            }
            for i in 0..d {
                if self.field.minpoly[i].is_zero() {
                    continue;
                }
                prod[k - d + i] -= &coeff * BigRational::from(self.field.minpoly[i].clone());
            }
        }
        prod.truncate(d);
        NfElem { field: self.field.clone(), coords: prod }
    }

    /// Matrix of multiplication by this element in the power basis
    /// (columns are the images of 1, ν, ν²).
    fn regular_matrix(&self) -> Vec<Vec<BigRational>> {
        let d = self.field.degree();
        let mut cols = Vec::with_capacity(d);
        let mut pow = NfElem::one(&self.field);
        for _ in 0..d {
            let img = self.mul(&pow);
            cols.push(img.coords.clone());
            pow = pow.mul(&NfElem::gen(&self.field));
        }
        // cols[j][i] = coefficient of ν^i in x·ν^j
        cols
    }

    /// Field trace to Q.
    pub fn trace(&self) -> BigRational {
        let m = self.regular_matrix();
        let d = self.field.degree();
        let mut t = BigRational::zero();
        for (j, col) in m.iter().enumerate().take(d) {
            t += &col[j];
        }
        t
    }

    /// Field norm to Q: determinant of the regular representation.
    pub fn norm(&self) -> BigRational {
        let cols = self.regular_matrix();
        let d = self.field.degree();
        let mut m: Vec<Vec<BigRational>> = (0..d)
            .map(|i| (0..d).map(|j| cols[j][i].clone()).collect())
            .collect();
        let mut det = BigRational::one();
        for c in 0..d {
            let Some(piv) = (c..d).find(|&r| !m[r][c].is_zero()) else {
                return BigRational::zero();
            };
            if piv != c {
                m.swap(c, piv);
                det = -det;
            }
            det *= &m[c][c];
            let pv = m[c][c].clone();
            for r in c + 1..d {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = &m[r][c] / &pv;
                for j in c..d {
                    let sub = &f * &m[c][j];
                    m[r][j] -= sub;
                }
            }
        }
        det
    }

    pub fn inv(&self) -> Result<NfElem> {
        if self.is_zero() {
            return Err(ArithError::Domain("inverse of zero field element".into()));
        }
        // Solve x·y = 1 as a linear system on y's coordinates.
        let d = self.field.degree();
        let cols = self.regular_matrix();
        // Build the d×d system M y = e0 where M[i][j] = cols[j][i].
        let mut aug: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..d).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        // Gaussian elimination.
        for c in 0..d {
            let piv = (c..d)
                .find(|&r| !aug[r][c].is_zero())
                .ok_or_else(|| ArithError::Domain("singular regular matrix".into()))?;
            aug.swap(c, piv);
            let pv = aug[c][c].clone();
            for e in aug[c].iter_mut() {
                *e /= pv.clone();
            }
            for r in 0..d {
                if r != c && !aug[r][c].is_zero() {
                    let f = aug[r][c].clone();
                    for j in 0..=d {
                        let sub = &f * &aug[c][j];
                        aug[r][j] -= sub;
                    }
                }
            }
        }
        let coords = (0..d).map(|i| aug[i][d].clone()).collect();
        Ok(NfElem { field: self.field.clone(), coords })
    }

    pub fn div(&self, other: &NfElem) -> Result<NfElem> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<NfElem> {
        if e == 0 {
            return Ok(NfElem::one(&self.field));
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = NfElem::one(&self.field);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Galois conjugate for quadratic fields: ν ↦ t − ν.
    pub fn conj(&self) -> NfElem {
        match self.field.degree() {
            1 => self.clone(),
            2 => {
                let (t, _) = self.field.quadratic_tn().unwrap();
                let a = self.coords[0].clone() + &self.coords[1] * BigRational::from(t);
                let b = -self.coords[1].clone();
                NfElem { field: self.field.clone(), coords: vec![a, b] }
            }
            _ => panic!("conj: algebraic conjugation implemented for degree ≤ 2 only; use embeddings for cubic fields"),
        }
    }

    /// Evaluate under an embedding ν ↦ nu_image into Q_p.
    /// The image is assumed pre-verified by [`verify_padic_generator`].
    pub fn embed_padic(&self, nu_image: &Padic) -> Padic {
        let p = nu_image.prime();
        let n = nu_image.abs_prec();
        let mut acc = Padic::zero(p, n + 8);
        for c in self.coords.iter().rev() {
            acc = acc.mul(nu_image);
            acc = acc.add(&Padic::from_rational(p, c, n + 8));
        }
        acc
    }

    /// Evaluate under an embedding ν ↦ nu_image into an unramified extension.
    pub fn embed_unram(&self, nu_image: &UnramElem) -> UnramElem {
        let ctx = nu_image.ctx();
        let n = nu_image.abs_prec();
        let mut acc = UnramElem::zero(ctx, n + 8);
        for c in self.coords.iter().rev() {
            acc = acc.mul(nu_image);
            let c_p = Padic::from_rational(ctx.prime(), c, n + 8);
            acc = acc.add(&UnramElem::from_padic(ctx, &c_p));
        }
        acc
    }
}

/// Check that a claimed p-adic image of the field generator satisfies the
/// minimal polynomial to its stated precision.
pub fn verify_padic_generator(field: &NumberField, image: &Padic) -> Result<()> {
    let p = image.prime();
    let n = image.abs_prec();
    let mut acc = Padic::one(p, n);
    // Horner for the monic polynomial.
    let d = field.degree();
    for i in (0..d).rev() {
        acc = acc.mul(image).add(&Padic::from_bigint(p, &field.minpoly()[i], n));
    }
    if acc.is_zero() {
        Ok(())
    } else {
        Err(ArithError::BadEmbedding { residual: acc.valuation(), required: acc.abs_prec() })
    }
}

/// Check a claimed unramified-extension image of the generator.
pub fn verify_unram_generator(field: &NumberField, image: &UnramElem) -> Result<()> {
    let ctx = image.ctx().clone();
    let n = image.abs_prec();
    let mut acc = UnramElem::one(&ctx, n);
    let d = field.degree();
    for i in (0..d).rev() {
        let c = Padic::from_bigint(ctx.prime(), &field.minpoly()[i], n);
        acc = acc.mul(image).add(&UnramElem::from_padic(&ctx, &c));
    }
    if acc.is_zero() {
        Ok(())
    } else {
        Err(ArithError::BadEmbedding { residual: acc.valuation(), required: acc.abs_prec() })
    }
}

impl fmt::Debug for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "v", "v^2"];
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if i == 0 {
                    write!(f, "{}", c)?;
                } else if c.is_one() {
                    write!(f, "{}", names[i])?;
                } else {
                    write!(f, "{}*{}", c, names[i])?;
                }
                first = false;
            } else if c.is_positive() {
                if i == 0 {
                    write!(f, " + {}", c)?;
                } else if c.is_one() {
                    write!(f, " + {}", names[i])?;
                } else {
                    write!(f, " + {}*{}", c, names[i])?;
                }
            } else {
                let a = -c.clone();
                if i == 0 {
                    write!(f, " - {}", a)?;
                } else if a.is_one() {
                    write!(f, " - {}", names[i])?;
                } else {
                    write!(f, " - {}*{}", a, names[i])?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// An element of the compositum K·E in the tensor basis √D^i · ν^j,
/// i < 2, j < deg(E). K is Q(√D) (imaginary quadratic), E totally real.
#[derive(Clone, PartialEq, Eq)]
pub struct BiElem {
    /// D of K = Q(√D).
    d: i64,
    e_field: Arc<NumberField>,
    /// coords[i][j] multiplies √D^i · ν^j.
    coords: [Vec<BigRational>; 2],
}

impl BiElem {
    pub fn zero(d: i64, e_field: &Arc<NumberField>) -> Self {
        let row = vec![BigRational::zero(); e_field.degree()];
        BiElem { d, e_field: e_field.clone(), coords: [row.clone(), row] }
    }

    pub fn from_e(d: i64, x: &NfElem) -> Self {
        let mut z = Self::zero(d, x.field());
        z.coords[0] = x.coords().to_vec();
        z
    }

    /// a + b√D with a, b rational.
    pub fn from_k(d: i64, e_field: &Arc<NumberField>, a: BigRational, b: BigRational) -> Self {
        let mut z = Self::zero(d, e_field);
        z.coords[0][0] = a;
        z.coords[1][0] = b;
        z
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn e_field(&self) -> &Arc<NumberField> {
        &self.e_field
    }

    pub fn coords(&self) -> &[Vec<BigRational>; 2] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|r| r.iter().all(|c| c.is_zero()))
    }

    /// The two K-components as E-elements: x = A + B·√D.
    pub fn k_components(&self) -> (NfElem, NfElem) {
        (
            NfElem::from_coords(&self.e_field, self.coords[0].clone()),
            NfElem::from_coords(&self.e_field, self.coords[1].clone()),
        )
    }

    fn check(&self, other: &BiElem) {
        assert!(self.d == other.d && self.e_field == other.e_field, "mixed composita");
    }

    pub fn add(&self, other: &BiElem) -> BiElem {
        self.check(other);
        let mut z = self.clone();
        for i in 0..2 {
            for j in 0..self.e_field.degree() {
                z.coords[i][j] += &other.coords[i][j];
            }
        }
        z
    }

    pub fn neg(&self) -> BiElem {
        let mut z = self.clone();
        for row in z.coords.iter_mut() {
            for c in row.iter_mut() {
                *c = -c.clone();
            }
        }
        z
    }

    pub fn sub(&self, other: &BiElem) -> BiElem {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &BigRational) -> BiElem {
        let mut z = self.clone();
        for row in z.coords.iter_mut() {
            for c in row.iter_mut() {
                *c *= q;
            }
        }
        z
    }

    pub fn mul(&self, other: &BiElem) -> BiElem {
        self.check(other);
        let (a0, a1) = self.k_components();
        let (b0, b1) = other.k_components();
        // (a0 + a1 s)(b0 + b1 s) = a0b0 + D·a1b1 + (a0b1 + a1b0)·s
        let dd = BigRational::from(BigInt::from(self.d));
        let c0 = a0.mul(&b0).add(&a1.mul(&b1).scale(&dd));
        let c1 = a0.mul(&b1).add(&a1.mul(&b0));
        let mut z = Self::zero(self.d, &self.e_field);
        z.coords[0] = c0.coords().to_vec();
        z.coords[1] = c1.coords().to_vec();
        z
    }

    /// Complex conjugation on K: √D ↦ −√D (identity on E, which is real).
    pub fn k_conj(&self) -> BiElem {
        let mut z = self.clone();
        for c in z.coords[1].iter_mut() {
            *c = -c.clone();
        }
        z
    }

    pub fn inv(&self) -> Result<BiElem> {
        // 1/(A + Bs) = (A − Bs)/(A² − D·B²), computed in E.
        let (a, b) = self.k_components();
        let dd = BigRational::from(BigInt::from(self.d));
        let denom = a.mul(&a).sub(&b.mul(&b).scale(&dd));
        let dinv = denom.inv()?;
        let mut z = Self::zero(self.d, &self.e_field);
        z.coords[0] = a.mul(&dinv).coords().to_vec();
        z.coords[1] = b.neg().mul(&dinv).coords().to_vec();
        Ok(z)
    }

    pub fn pow(&self, e: i64) -> Result<BiElem> {
        let mut acc = {
            let mut one = Self::zero(self.d, &self.e_field);
            one.coords[0][0] = BigRational::one();
            one
        };
        if e == 0 {
            return Ok(acc);
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Embed into Q_p: √D ↦ s_img, ν ↦ nu_img.
    pub fn embed_padic(&self, s_img: &Padic, nu_img: &Padic) -> Padic {
        let (a, b) = self.k_components();
        a.embed_padic(nu_img).add(&b.embed_padic(nu_img).mul(s_img))
    }

    /// Embed into the unramified extension: √D ↦ s_img (in Q_p ⊂ ext),
    /// ν ↦ nu_img.
    pub fn embed_unram(&self, s_img: &Padic, nu_img: &UnramElem) -> UnramElem {
        let (a, b) = self.k_components();
        let s = UnramElem::from_padic(nu_img.ctx(), s_img);
        a.embed_unram(nu_img).add(&b.embed_unram(nu_img).mul(&s))
    }
}

impl fmt::Debug for BiElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for BiElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.k_components();
        write!(f, "({}) + ({})*sqrt({})", a, b, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn quadratic_field_arithmetic() {
        // Q(√5) via ν² = ν + 1 (golden ratio presentation).
        let f = NumberField::new("Q(nu)", vec![BigInt::from(-1), BigInt::from(-1)]);
        let nu = NfElem::gen(&f);
        let nu2 = nu.mul(&nu);
        assert_eq!(nu2.coords(), &[q(1, 1), q(1, 1)]);
        // Norm(a + b·ν) for ν² − ν − 1: N(ν) = −1.
        assert_eq!(nu.norm(), q(-1, 1));
        assert_eq!(nu.trace(), q(1, 1));
        // Inverse: ν⁻¹ = ν − 1.
        let inv = nu.inv().unwrap();
        assert_eq!(inv.coords(), &[q(-1, 1), q(1, 1)]);
        // conj(ν) = 1 − ν; ν + conj(ν) = tr = 1.
        let c = nu.conj();
        assert_eq!(nu.add(&c).coords(), &[q(1, 1), q(0, 1)]);
    }

    #[test]
    fn norm_is_multiplicative() {
        let f = NumberField::new(
            "E169",
            vec![BigInt::from(1), BigInt::from(-2), BigInt::from(-1)],
        );
        let x = NfElem::from_coords(&f, vec![q(1, 2), q(3, 1), q(-1, 1)]);
        let y = NfElem::from_coords(&f, vec![q(2, 1), q(0, 1), q(5, 3)]);
        let lhs = x.mul(&y).norm();
        let rhs = x.norm() * y.norm();
        assert_eq!(lhs, rhs);
        // And inverse really inverts.
        let xi = x.inv().unwrap();
        assert_eq!(x.mul(&xi), NfElem::one(&f));
    }

    #[test]
    fn cubic_trace_matches_power_sums() {
        // x³ − x² − 2x + 1: trace of ν is the coefficient sum rule: tr = 1.
        let f = NumberField::new(
            "E169",
            vec![BigInt::from(1), BigInt::from(-2), BigInt::from(-1)],
        );
        let nu = NfElem::gen(&f);
        assert_eq!(nu.trace(), q(1, 1));
        assert_eq!(nu.norm(), q(-1, 1));
        // tr(ν²) = tr(ν)² − 2·e2 = 1 + 4 = 5 for e2 = −2.
        assert_eq!(nu.mul(&nu).trace(), q(5, 1));
    }

    #[test]
    fn padic_roots_lift_correctly() {
        // ν² − ν − 1 has two roots in Q_11 (disc 5 is a QR mod 11).
        let f = NumberField::new("Q(nu)", vec![BigInt::from(-1), BigInt::from(-1)]);
        let roots = f.padic_roots(11, 8);
        assert_eq!(roots.len(), 2);
        for r in &roots {
            verify_padic_generator(&f, r).unwrap();
        }
        // Roots sum to 1 (trace).
        let s = roots[0].add(&roots[1]);
        assert!(s.agrees_with(&Padic::one(11, 8)));
    }

    #[test]
    fn embedding_is_ring_hom() {
        let f = NumberField::new("Q(nu)", vec![BigInt::from(-1), BigInt::from(-1)]);
        let roots = f.padic_roots(11, 8);
        let x = NfElem::from_coords(&f, vec![q(2, 5), q(3, 10)]);
        let y = NfElem::from_coords(&f, vec![q(-1, 1), q(7, 2)]);
        for r in &roots {
            let lhs = x.mul(&y).embed_padic(r);
            let rhs = x.embed_padic(r).mul(&y.embed_padic(r));
            assert!(lhs.agrees_with(&rhs));
        }
    }

    #[test]
    fn compositum_arithmetic_and_conjugation() {
        let e = NumberField::new("Q(nu)", vec![BigInt::from(-1), BigInt::from(-1)]);
        let d = -11i64;
        // x = (1 + 2ν) + (3 − ν)√D
        let x = {
            let mut z = BiElem::zero(d, &e);
            z.coords[0] = vec![q(1, 1), q(2, 1)];
            z.coords[1] = vec![q(3, 1), q(-1, 1)];
            z
        };
        // x · conj(x) should have zero √D-component.
        let n = x.mul(&x.k_conj());
        let (_, b) = n.k_components();
        assert!(b.is_zero());
        // Inverse round trip.
        let xi = x.inv().unwrap();
        let prod = x.mul(&xi);
        let (a, b) = prod.k_components();
        assert_eq!(a, NfElem::one(&e));
        assert!(b.is_zero());
    }

    #[test]
    fn compositum_embedding_matches_components() {
        let e = NumberField::new("Q(nu)", vec![BigInt::from(-1), BigInt::from(-1)]);
        let d = -7i64;
        let p = 11u64;
        let s = Padic::from_i64(p, -7, 8).sqrt(2).unwrap();
        let nu = &e.padic_roots(p, 8)[0];
        let x = {
            let mut z = BiElem::zero(d, &e);
            z.coords[0] = vec![q(1, 3), q(2, 1)];
            z.coords[1] = vec![q(0, 1), q(5, 7)];
            z
        };
        let y = x.mul(&x);
        let lhs = y.embed_padic(&s, nu);
        let e1 = x.embed_padic(&s, nu);
        let rhs = e1.mul(&e1);
        assert!(lhs.agrees_with(&rhs));
    }
}
