//! Discovery of newform orbits at level N and extraction of their plus
//! eigensymbols.
//!
//! The plus part of the value space splits under the Hecke operators into
//! a boundary eigensystem, oldform blocks, and one block per newform
//! Galois orbit. Blocks are separated by refining with T_2, T_3, ... and
//! factoring the restricted characteristic polynomials exactly; float
//! root-clustering only suggests candidate factors, which are verified by
//! exact division.

use std::collections::HashMap;
use std::sync::Arc;

use chabauty_arith::linalg::Mat;
use chabauty_arith::numfield::{NfElem, NumberField};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::hecke::{coset_operator, hecke_matrix, restrict, star_matrix, up_cosets};
use crate::space::{apply_to_cusp, Cusp, ManinSymbolSpace};
use crate::ModSymError;

/// Primes used to separate eigensystems. Levels in scope never need more.
const REFINING_PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Boundary,
    Old,
    New,
}

/// One Hecke-stable block of the plus part.
pub struct HeckeBlock {
    pub kind: BlockKind,
    /// Basis over the free generators.
    pub basis: Vec<Vec<BigRational>>,
    /// Degree of the eigenvalue field.
    pub degree: usize,
    /// Multiplicity of the eigensystem inside the block.
    pub multiplicity: usize,
}

pub struct NewformDecomposition {
    space: Arc<ManinSymbolSpace>,
    pub blocks: Vec<HeckeBlock>,
    /// Indices into blocks of the new blocks, in label order: sorted by
    /// degree, then lexicographically by the traces of a_2, a_3, a_4, ...
    pub label_order: Vec<usize>,
}

impl NewformDecomposition {
    pub fn space(&self) -> &Arc<ManinSymbolSpace> {
        &self.space
    }

    pub fn num_newforms(&self) -> usize {
        self.label_order.len()
    }

    /// The new block with the k-th label at this level (k = 0 is the
    /// LMFDB orbit letter a, k = 1 is b, and so on).
    pub fn newform_block(&self, k: usize) -> &HeckeBlock {
        &self.blocks[self.label_order[k]]
    }

    /// Extract the plus eigensymbol of the k-th newform orbit.
    pub fn eigensymbol(&self, k: usize) -> Result<EigenSymbol, ModSymError> {
        let block = self.newform_block(k);
        EigenSymbol::from_block(Arc::clone(&self.space), block, k)
    }

    /// Attempt eigensymbol extraction on an arbitrary block; old and
    /// boundary blocks report their eigenspace dimension as an error.
    pub fn eigensymbol_of_block(&self, block_index: usize) -> Result<EigenSymbol, ModSymError> {
        let block = &self.blocks[block_index];
        EigenSymbol::from_block(Arc::clone(&self.space), block, block_index)
    }
}

/// Compute the Hecke block decomposition of the plus part at level n.
pub fn decompose(space: Arc<ManinSymbolSpace>) -> NewformDecomposition {
    let n = space.level();
    let one = BigRational::one();
    let star = star_matrix(&space);
    let nf = space.num_free();
    let mut fixed = star;
    for j in 0..nf {
        let cur = fixed.get(j, j).clone();
        fixed.set(j, j, cur - &one);
    }
    let plus = fixed.kernel();
    assert!(!plus.is_empty(), "plus part is zero at level {n}");
    let plus_dim = plus.len();
    // The cuspidal part contributes the genus; the boundary contributes
    // one dimension per involution-orbit of cusps, minus one.
    assert!(
        plus_dim >= space.cusp_plus_basis().len(),
        "plus part cannot be smaller than its cuspidal subspace"
    );

    let mut pieces: Vec<Vec<Vec<BigRational>>> = vec![plus];
    for &ell in REFINING_PRIMES.iter().filter(|&&q| n % q != 0) {
        let t_ell = hecke_matrix(&space, ell);
        let mut next = Vec::new();
        for basis in pieces {
            if basis.len() <= 1 {
                next.push(basis);
                continue;
            }
            let a = restrict(&t_ell, &basis);
            let charpoly = integer_charpoly(&a);
            let factors = candidate_factors(&charpoly);
            if factors.len() <= 1 {
                next.push(basis);
                continue;
            }
            for (q, mult) in factors {
                // Primary component: kernel of q(A)^mult. The boundary
                // action need not be semisimple at non-squarefree level,
                // so a plain kernel can undershoot.
                let qa = eval_poly_at_matrix(&q, &a);
                let mut qa_pow = qa.clone();
                for _ in 1..mult {
                    qa_pow = qa_pow.mul(&qa);
                }
                let sub = qa_pow.kernel();
                assert_eq!(
                    sub.len(),
                    (q.len() - 1) * mult,
                    "primary component has the wrong dimension"
                );
                next.push(
                    sub.into_iter()
                        .map(|coords| combine(&basis, &coords))
                        .collect(),
                );
            }
        }
        pieces = next;
    }

    let mut blocks = Vec::new();
    let cusp_basis = space.cuspidal_basis();
    for basis in pieces {
        let dim = basis.len();
        // Eisenstein value-vectors annihilate the cuspidal symbol
        // subspace; cuspidal eigensystems pair nontrivially with it.
        let is_boundary = basis.iter().all(|b| {
            cusp_basis
                .iter()
                .all(|s| b.iter().zip(s).map(|(x, y)| x * y).sum::<BigRational>().is_zero())
        });
        if is_boundary {
            blocks.push(HeckeBlock {
                kind: BlockKind::Boundary,
                basis,
                degree: 1,
                multiplicity: dim,
            });
            continue;
        }
        let generic = generic_operator(&space, &basis);
        let charpoly = integer_charpoly(&generic);
        let (sqfree, mult) = squarefree_power(&charpoly);
        let degree = sqfree.len() - 1;
        assert_eq!(
            degree * mult,
            dim,
            "block at level {n} is not a power of one eigensystem"
        );
        blocks.push(HeckeBlock {
            kind: if mult > 1 { BlockKind::Old } else { BlockKind::New },
            basis,
            degree,
            multiplicity: mult,
        });
    }

    let total: usize = blocks.iter().map(|b| b.basis.len()).sum();
    assert_eq!(total, plus_dim, "blocks do not fill the plus part");
    let new_total: usize = blocks
        .iter()
        .filter(|b| b.kind != BlockKind::Boundary)
        .map(|b| b.basis.len())
        .sum();
    assert_eq!(
        new_total,
        space.cusp_plus_basis().len(),
        "cuspidal blocks do not fill the cuspidal plus part"
    );

    let mut label_order: Vec<usize> = (0..blocks.len())
        .filter(|&i| blocks[i].kind == BlockKind::New)
        .collect();
    let trace_keys: HashMap<usize, Vec<BigInt>> = label_order
        .iter()
        .map(|&i| (i, trace_vector(&space, &blocks[i], 30)))
        .collect();
    label_order.sort_by(|&i, &j| {
        blocks[i]
            .degree
            .cmp(&blocks[j].degree)
            .then_with(|| trace_keys[&i].cmp(&trace_keys[&j]))
    });
    for w in label_order.windows(2) {
        assert!(
            blocks[w[0]].degree != blocks[w[1]].degree
                || trace_keys[&w[0]] != trace_keys[&w[1]],
            "newform orbits at level {n} are not separated by traces up to 30"
        );
    }

    NewformDecomposition {
        space,
        blocks,
        label_order,
    }
}

/// Traces of a_n on the block for n = 2 .. n_max, used for label order.
fn trace_vector(space: &ManinSymbolSpace, block: &HeckeBlock, n_max: u64) -> Vec<BigInt> {
    let mats = hecke_matrices_up_to(space, &block.basis, n_max);
    (2..=n_max)
        .map(|k| {
            let t = mats[&k].trace();
            assert!(t.is_integer());
            t.to_integer()
        })
        .collect()
}

/// Matrices of a_n restricted to a Hecke-stable subspace for all n up to
/// n_max, via the Hecke recursions.
pub fn hecke_matrices_up_to(
    space: &ManinSymbolSpace,
    basis: &[Vec<BigRational>],
    n_max: u64,
) -> HashMap<u64, Mat<BigRational>> {
    let n = space.level();
    let d = basis.len();
    let _zero = BigRational::zero();
    let mut out: HashMap<u64, Mat<BigRational>> = HashMap::new();
    out.insert(1, Mat::identity(d, &BigRational::one()));
    let mut p = 2u64;
    while p <= n_max {
        if is_prime(p) {
            let t_p = if n % p == 0 {
                restrict(&coset_operator(space, &up_cosets(p)), basis)
            } else {
                restrict(&hecke_matrix(space, p), basis)
            };
            let mut k = p;
            let mut prev = Mat::identity(d, &BigRational::one());
            let mut cur = t_p.clone();
            while k <= n_max {
                out.insert(k, cur.clone());
                let next = if n % p == 0 {
                    cur.mul(&t_p)
                } else {
                    let scaled = prev.scale(&BigRational::from(BigInt::from(p as i64)));
                    cur.mul(&t_p).add(&scaled.scale(&BigRational::from(BigInt::from(-1))))
                };
                prev = cur;
                cur = next;
                k *= p;
            }
        }
        p += 1;
    }
    for m in 2..=n_max {
        if out.contains_key(&m) {
            continue;
        }
        let (a, b) = coprime_split(m);
        let prod = out[&a].mul(&out[&b]);
        out.insert(m, prod);
    }
    out
}

fn coprime_split(m: u64) -> (u64, u64) {
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut a = 1;
            let mut rest = m;
            while rest % p == 0 {
                a *= p;
                rest /= p;
            }
            return (a, rest);
        }
        p += 1;
    }
    (m, 1)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A generic Hecke operator on the block: the first combination of
/// restricted T_ell whose characteristic polynomial is a power of an
/// irreducible of the right degree.
fn generic_operator(space: &ManinSymbolSpace, basis: &[Vec<BigRational>]) -> Mat<BigRational> {
    let n = space.level();
    let good: Vec<u64> = REFINING_PRIMES
        .iter()
        .copied()
        .filter(|&q| n % q != 0)
        .collect();
    let mut combo = restrict(&hecke_matrix(&space, good[0]), basis);
    let mut weight = 1i64;
    for &ell in good.iter().skip(1) {
        let cp = integer_charpoly(&combo);
        let (sqf, _m) = squarefree_power_or_unit(&cp);
        if let Some(sqf) = sqf {
            if candidate_factors(&sqf).len() <= 1 {
                return combo;
            }
        }
        weight += 2;
        let t = restrict(&hecke_matrix(&space, ell), basis);
        combo = combo.add(&t.scale(&BigRational::from(BigInt::from(weight))));
    }
    combo
}

fn combine(basis: &[Vec<BigRational>], coords: &[BigRational]) -> Vec<BigRational> {
    let nf = basis[0].len();
    let mut out = vec![BigRational::zero(); nf];
    for (b, c) in basis.iter().zip(coords) {
        if c.is_zero() {
            continue;
        }
        for (o, v) in out.iter_mut().zip(b) {
            *o += v * c;
        }
    }
    out
}

/// Characteristic polynomial of a matrix known to be integral in the
/// monic sense: the result must have integer coefficients.
fn integer_charpoly(a: &Mat<BigRational>) -> Vec<BigInt> {
    a.charpoly()
        .into_iter()
        .map(|c| {
            assert!(c.is_integer(), "characteristic polynomial not integral");
            c.to_integer()
        })
        .collect()
}

/// If c = s^m with s squarefree, return (s, m).
fn squarefree_power(c: &[BigInt]) -> (Vec<BigInt>, usize) {
    let (s, m) = squarefree_power_or_unit(c);
    (s.expect("polynomial is not a power of a squarefree polynomial"), m)
}

fn squarefree_power_or_unit(c: &[BigInt]) -> (Option<Vec<BigInt>>, usize) {
    let deg = c.len() - 1;
    for m in 1..=deg {
        if deg % m != 0 {
            continue;
        }
        let d = deg / m;
        // Try to find s of degree d with c = s^m by matching coefficients.
        if let Some(s) = nth_root_poly(c, m, d) {
            if poly_is_squarefree(&s) {
                return (Some(s), m);
            }
        }
    }
    (None, 0)
}

/// The m-th root of a monic integer polynomial, if it exists exactly.
fn nth_root_poly(c: &[BigInt], m: usize, d: usize) -> Option<Vec<BigInt>> {
    if m == 1 {
        return Some(c.to_vec());
    }
    // Newton iteration on coefficients from the top: s is determined
    // degree by degree. Work with s = x^d + s_{d-1} x^{d-1} + ...
    let mut s = vec![BigInt::zero(); d + 1];
    s[d] = BigInt::one();
    for k in (0..d).rev() {
        // Coefficient of x^(d(m-1)+k) in s^m is m*s_k plus terms from
        // already-known coefficients. Solve for s_k.
        let mut trial = s.clone();
        trial[k] = BigInt::zero();
        let pow = poly_pow(&trial, m);
        let target = &c[d * (m - 1) + k] - &pow[d * (m - 1) + k];
        let mb = BigInt::from(m as i64);
        if (&target % &mb) != BigInt::zero() {
            return None;
        }
        s[k] = target / &mb;
    }
    if poly_pow(&s, m) == c {
        Some(s)
    } else {
        None
    }
}

fn poly_pow(p: &[BigInt], m: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for _ in 0..m {
        out = poly_mul(&out, p);
    }
    out
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_is_squarefree(p: &[BigInt]) -> bool {
    let deriv: Vec<BigInt> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i as i64))
        .collect();
    poly_gcd_degree(p, &deriv) == 0
}

/// Degree of gcd of two integer polynomials, via rational remainder
/// sequence.
fn poly_gcd_degree(a: &[BigInt], b: &[BigInt]) -> usize {
    let to_rat = |p: &[BigInt]| -> Vec<BigRational> {
        p.iter().map(|c| BigRational::from(c.clone())).collect()
    };
    let mut r0 = to_rat(a);
    let mut r1 = to_rat(b);
    loop {
        while r1.last().map(|c| c.is_zero()).unwrap_or(false) {
            r1.pop();
        }
        if r1.is_empty() {
            while r0.last().map(|c| c.is_zero()).unwrap_or(false) {
                r0.pop();
            }
            return r0.len().saturating_sub(1);
        }
        let r = poly_rem(&r0, &r1);
        r0 = r1;
        r1 = r;
    }
}

fn poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db {
        let k = r.len() - 1;
        let q = &r[k] / &lead;
        if !q.is_zero() {
            for i in 0..=db {
                let term = &b[i] * &q;
                r[k - db + i] -= term;
            }
        }
        r.pop();
    }
    r
}

/// Candidate irreducible factors of a monic integer polynomial with their
/// multiplicities. Integer roots are extracted exactly; factors of degree
/// 2 and 3 are found by clustering float roots and verified by exact
/// division; whatever remains is returned as a single unsplit factor.
fn candidate_factors(c: &[BigInt]) -> Vec<(Vec<BigInt>, usize)> {
    let mut rest = c.to_vec();
    let mut out: Vec<(Vec<BigInt>, usize)> = Vec::new();

    // Integer roots first. This removes repeated boundary eigenvalues,
    // which would otherwise spoil the float iteration.
    for a in integer_roots(&rest) {
        let lin = vec![-a.clone(), BigInt::one()];
        let mut mult = 0;
        while let Some(q) = poly_divexact(&rest, &lin) {
            mult += 1;
            rest = q;
        }
        assert!(mult > 0);
        out.push((lin, mult));
    }

    loop {
        let deg = rest.len() - 1;
        if deg == 0 {
            return out;
        }
        if deg <= 3 && poly_is_irreducible_small(&rest) {
            out.push((rest, 1));
            return out;
        }
        let roots = float_roots(&rest);
        let mut found = false;
        'subsets: for size in 2..=3usize.min(deg.saturating_sub(1)) {
            for subset in subsets_of_size(roots.len(), size) {
                let cand = monic_from_roots(&roots, &subset);
                let Some(cand) = cand else { continue };
                if !poly_is_irreducible_small(&cand) {
                    continue;
                }
                if let Some(q) = poly_divexact(&rest, &cand) {
                    let mut mult = 1;
                    let mut quotient = q;
                    while let Some(q2) = poly_divexact(&quotient, &cand) {
                        mult += 1;
                        quotient = q2;
                    }
                    out.push((cand, mult));
                    rest = quotient;
                    found = true;
                    break 'subsets;
                }
            }
        }
        if !found {
            out.push((rest, 1));
            return out;
        }
    }
}

/// All integer roots of a monic integer polynomial.
fn integer_roots(p: &[BigInt]) -> Vec<BigInt> {
    let mut out = Vec::new();
    // Strip powers of x.
    let mut q = p.to_vec();
    if q[0].is_zero() {
        out.push(BigInt::zero());
        while q[0].is_zero() && q.len() > 1 {
            q.remove(0);
        }
    }
    let c0 = q[0].abs();
    if c0.is_zero() {
        return out;
    }
    let mut d = BigInt::one();
    while &d * &d <= c0 {
        if (&c0 % &d).is_zero() {
            for cand in [d.clone(), -d.clone(), &c0 / &d, -(&c0 / &d)] {
                if eval_poly_int(&q, &cand).is_zero() && !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
        d += 1;
    }
    out
}

fn poly_is_irreducible_small(p: &[BigInt]) -> bool {
    // Monic of degree at most 3: irreducible over Q iff no rational root
    // (degree 1 is always irreducible).
    let deg = p.len() - 1;
    match deg {
        1 => true,
        2 | 3 => !has_rational_root(p),
        _ => false,
    }
}

fn has_rational_root(p: &[BigInt]) -> bool {
    // Monic integer polynomial: rational roots are integer divisors of the
    // constant term.
    let c0 = &p[0];
    if c0.is_zero() {
        return true;
    }
    let bound = c0.abs();
    let mut d = BigInt::one();
    while &d * &d <= bound {
        if (&bound % &d).is_zero() {
            for cand in [d.clone(), -d.clone(), &bound / &d, -(&bound / &d)] {
                if eval_poly_int(p, &cand).is_zero() {
                    return true;
                }
            }
        }
        d += 1;
    }
    false
}

fn eval_poly_int(p: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn monic_from_roots(roots: &[(f64, f64)], subset: &[usize]) -> Option<Vec<BigInt>> {
    // Product of (x - r) over the subset, rounded to integers; reject
    // clearly non-real coefficient sums.
    let mut coeffs = vec![(1.0f64, 0.0f64)];
    for &i in subset {
        let (re, im) = roots[i];
        let mut next = vec![(0.0, 0.0); coeffs.len() + 1];
        for (k, &(a, b)) in coeffs.iter().enumerate() {
            next[k + 1].0 += a;
            next[k + 1].1 += b;
            next[k].0 -= a * re - b * im;
            next[k].1 -= a * im + b * re;
        }
        coeffs = next;
    }
    let mut out = Vec::with_capacity(coeffs.len());
    for &(a, b) in &coeffs {
        if b.abs() > 1e-3 {
            return None;
        }
        let r = a.round();
        if (a - r).abs() > 1e-3 {
            return None;
        }
        out.push(BigInt::from(r as i64));
    }
    if out.last() == Some(&BigInt::one()) {
        Some(out)
    } else {
        None
    }
}

/// All complex roots of a monic integer polynomial, by Durand-Kerner.
fn float_roots(p: &[BigInt]) -> Vec<(f64, f64)> {
    let deg = p.len() - 1;
    let coeffs: Vec<f64> = p.iter().map(|c| c.to_f64().unwrap()).collect();
    let eval = |x: (f64, f64)| -> (f64, f64) {
        let mut acc = (0.0f64, 0.0f64);
        for &c in coeffs.iter().rev() {
            let re = acc.0 * x.0 - acc.1 * x.1 + c;
            let im = acc.0 * x.1 + acc.1 * x.0;
            acc = (re, im);
        }
        acc
    };
    // Fujiwara root bound seeds the iteration on a safe circle.
    let bound = (0..deg)
        .map(|i| {
            let c = coeffs[i].abs();
            let c = if i == 0 { c / 2.0 } else { c };
            c.powf(1.0 / ((deg - i) as f64))
        })
        .fold(0.5f64, f64::max)
        * 2.0;
    let mut roots: Vec<(f64, f64)> = (0..deg)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (deg as f64) + 0.4;
            let r = bound * (0.5 + 0.4 * (k as f64) / (deg as f64));
            (r * theta.cos(), r * theta.sin())
        })
        .collect();
    for _ in 0..400 {
        let mut max_change = 0.0f64;
        for i in 0..deg {
            let num = eval(roots[i]);
            let mut den = (1.0f64, 0.0f64);
            for j in 0..deg {
                if i == j {
                    continue;
                }
                let dx = (roots[i].0 - roots[j].0, roots[i].1 - roots[j].1);
                den = (den.0 * dx.0 - den.1 * dx.1, den.0 * dx.1 + den.1 * dx.0);
            }
            let d2 = den.0 * den.0 + den.1 * den.1;
            if d2 == 0.0 {
                continue;
            }
            let q = (
                (num.0 * den.0 + num.1 * den.1) / d2,
                (num.1 * den.0 - num.0 * den.1) / d2,
            );
            roots[i].0 -= q.0;
            roots[i].1 -= q.1;
            max_change = max_change.max(q.0.abs() + q.1.abs());
        }
        if max_change < 1e-13 {
            break;
        }
    }
    roots
}

/// Exact division of monic integer polynomials; None if not divisible.
fn poly_divexact(num: &[BigInt], den: &[BigInt]) -> Option<Vec<BigInt>> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    if dd > dn {
        return None;
    }
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd].clone();
        quot[k] = c.clone();
        if c.is_zero() {
            continue;
        }
        for i in 0..=dd {
            let term = &den[i] * &c;
            rem[k + i] -= term;
        }
    }
    if rem.iter().all(|c| c.is_zero()) {
        Some(quot)
    } else {
        None
    }
}

fn eval_poly_at_matrix(p: &[BigInt], a: &Mat<BigRational>) -> Mat<BigRational> {
    let d = a.nrows();
    let one = BigRational::one();
    let mut acc = Mat::zero(d, d, &BigRational::zero());
    for c in p.iter().rev() {
        acc = acc.mul(a);
        if !c.is_zero() {
            let scaled = Mat::identity(d, &one).scale(&BigRational::from(c.clone()));
            acc = acc.add(&scaled);
        }
    }
    acc
}

/// The plus modular symbol of one newform orbit, with values in E_f.
#[derive(Clone)]
pub struct EigenSymbol {
    space: Arc<ManinSymbolSpace>,
    field: Arc<NumberField>,
    /// Values on the free generators.
    values: Vec<NfElem>,
    /// Values on every P^1 class.
    table: Vec<NfElem>,
    /// Exact Hecke eigenvalues a_p, cached.
    ap_cache: HashMap<u64, NfElem>,
    orbit_index: usize,
}

impl EigenSymbol {
    fn from_block(
        space: Arc<ManinSymbolSpace>,
        block: &HeckeBlock,
        orbit_index: usize,
    ) -> Result<Self, ModSymError> {
        if block.multiplicity != 1 || block.kind != BlockKind::New {
            return Err(ModSymError::EigenspaceDimension {
                level: space.level(),
                orbit: orbit_index,
                dim: block.multiplicity * block.degree,
            });
        }
        let d = block.degree;
        if d > 16 {
            return Err(ModSymError::FieldDegree {
                level: space.level(),
                orbit: orbit_index,
                degree: d,
            });
        }
        let (field, coords) = if d == 1 {
            let q = NumberField::rationals();
            let one = NfElem::one(&q);
            (q, vec![one])
        } else {
            let generic = generic_operator(&space, &block.basis);
            let mut minpoly = integer_charpoly(&generic);
            assert_eq!(minpoly.pop(), Some(BigInt::one()));
            let field = NumberField::new(
                &format!("hecke-{}-{}", space.level(), orbit_index),
                minpoly,
            );
            // Kernel of (generic - t) over E_f, in block coordinates.
            let t = NfElem::gen(&field);
            let zero = NfElem::zero(&field);
            let mut m = Mat::zero(d, d, &zero);
            for i in 0..d {
                for j in 0..d {
                    let mut e = NfElem::from_rational(&field, generic.get(i, j).clone());
                    if i == j {
                        e = e.sub(&t);
                    }
                    m.set(i, j, e);
                }
            }
            let kernel = m.kernel();
            if kernel.len() != 1 {
                return Err(ModSymError::EigenspaceDimension {
                    level: space.level(),
                    orbit: orbit_index,
                    dim: kernel.len(),
                });
            }
            (field, kernel.into_iter().next().unwrap())
        };
        let coords = &coords;
        let nf = space.num_free();
        let mut values = vec![NfElem::zero(&field); nf];
        for (i, b) in block.basis.iter().enumerate() {
            for (k, v) in b.iter().enumerate() {
                if !v.is_zero() {
                    values[k] = values[k].add(&coords[i].scale(v));
                }
            }
        }
        normalize_values(&mut values, &field);
        let table = (0..space.p1().len())
            .map(|i| {
                let mut acc = NfElem::zero(&field);
                for (&k, v) in space.class_expr(i) {
                    acc = acc.add(&values[k].scale(v));
                }
                acc
            })
            .collect();
        Ok(EigenSymbol {
            space,
            field,
            values,
            table,
            ap_cache: HashMap::new(),
            orbit_index,
        })
    }

    pub fn space(&self) -> &Arc<ManinSymbolSpace> {
        &self.space
    }

    pub fn level(&self) -> u64 {
        self.space.level()
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn orbit_index(&self) -> usize {
        self.orbit_index
    }

    pub fn values(&self) -> &[NfElem] {
        &self.values
    }

    /// Value of the symbol on the divisor {x} - {y}.
    pub fn evaluate(&self, x: &Cusp, y: &Cusp) -> NfElem {
        let expr = self.space.path(x, y);
        let mut acc = NfElem::zero(&self.field);
        for (k, v) in expr.into_iter().enumerate() {
            if !v.is_zero() {
                acc = acc.add(&self.values[k].scale(&v));
            }
        }
        acc
    }

    /// Rescale the symbol by a nonzero element of E_f. The Hecke
    /// eigenvalues are ratios, so the cache stays valid.
    pub fn rescale(&mut self, c: &NfElem) {
        assert!(!c.is_zero());
        for v in self.values.iter_mut() {
            *v = v.mul(c);
        }
        for v in self.table.iter_mut() {
            *v = v.mul(c);
        }
    }

    /// The Hecke eigenvalue a_p for prime p.
    pub fn a_prime(&mut self, p: u64) -> NfElem {
        if let Some(v) = self.ap_cache.get(&p) {
            return v.clone();
        }
        assert!(is_prime(p), "{p} is not prime");
        let j0 = self
            .values
            .iter()
            .position(|v| !v.is_zero())
            .expect("eigensymbol is zero");
        let v0 = self.values[j0].clone();
        let image = if self.level() % p == 0 {
            // U_p by divisor evaluation on the j0-th generator.
            let g = self.space.sl2_rep(self.space.free_gen(j0));
            let from = apply_to_cusp(g, &Cusp::zero());
            let to = apply_to_cusp(g, &Cusp::infinity());
            let mut acc = NfElem::zero(&self.field);
            for cm in up_cosets(p) {
                acc = acc.add(&self.evaluate(
                    &apply_to_cusp(&cm, &from),
                    &apply_to_cusp(&cm, &to),
                ));
            }
            acc
        } else {
            let (c, d) = self.space.p1().rep(self.space.free_gen(j0));
            let (c, d) = (c as i64, d as i64);
            let mut acc = NfElem::zero(&self.field);
            for hm in crate::hecke::heilbronn_matrices(p) {
                let cc = c * hm[0] + d * hm[2];
                let dd = c * hm[1] + d * hm[3];
                acc = acc.add(&self.table[self.space.p1().index_of(cc, dd)]);
            }
            acc
        };
        let a = image.div(&v0).expect("eigenvalue division failed");
        self.ap_cache.insert(p, a.clone());
        a
    }

    /// The Hecke eigenvalue a_n for any n >= 1.
    pub fn a_n(&mut self, n: u64) -> NfElem {
        assert!(n >= 1);
        if n == 1 {
            return NfElem::one(&self.field);
        }
        let (a, b) = coprime_split(n);
        if a != n {
            return self.a_n(a).mul(&self.a_n(b));
        }
        // n = p^k.
        let p = smallest_prime_factor(n);
        if n == p {
            return self.a_prime(p);
        }
        let ap = self.a_prime(p);
        if self.level() % p == 0 {
            return ap.pow(ilog(n, p) as i64).unwrap();
        }
        let prev = self.a_n(n / p);
        let prev2 = self.a_n(n / p / p);
        ap.mul(&prev)
            .sub(&prev2.scale(&BigRational::from(BigInt::from(p as i64))))
    }

    /// Eigenvalue of the Atkin-Lehner involution W_Q, for Q an exact
    /// divisor of the level (Q = N gives the Fricke involution).
    pub fn atkin_lehner(&self, q: u64) -> i64 {
        let w = crate::hecke::atkin_lehner_coset(self.level(), q);
        for j in 0..self.space.num_free() {
            if self.values[j].is_zero() {
                continue;
            }
            let g = self.space.sl2_rep(self.space.free_gen(j));
            let from = apply_to_cusp(g, &Cusp::zero());
            let to = apply_to_cusp(g, &Cusp::infinity());
            let img = self.evaluate(&apply_to_cusp(&w, &from), &apply_to_cusp(&w, &to));
            let ratio = img.div(&self.values[j]).expect("AL division");
            if ratio.is_rational() {
                let r = ratio.rational_part();
                if r == &BigRational::one() {
                    return 1;
                }
                if r == &-BigRational::one() {
                    return -1;
                }
            }
            panic!("Atkin-Lehner eigenvalue is not +-1: {ratio}");
        }
        panic!("eigensymbol is zero");
    }
}

fn ilog(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        assert_eq!(n % p, 0);
        n /= p;
        k += 1;
    }
    k
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 1;
    }
    n
}

/// Scale the values to have integral coordinates with unit content, and
/// make the leading coordinate of the first nonzero value positive.
fn normalize_values(values: &mut [NfElem], _field: &Arc<NumberField>) {
    let mut denom_lcm = BigInt::one();
    for v in values.iter() {
        for c in v.coords() {
            denom_lcm = num_integer::Integer::lcm(&denom_lcm, c.denom());
        }
    }
    let mut numer_gcd = BigInt::zero();
    for v in values.iter() {
        for c in v.coords() {
            let scaled = c * BigRational::from(denom_lcm.clone());
            assert!(scaled.is_integer());
            numer_gcd = num_integer::Integer::gcd(&numer_gcd, &scaled.to_integer());
        }
    }
    assert!(!numer_gcd.is_zero(), "eigensymbol is identically zero");
    let mut scale = BigRational::new(denom_lcm, numer_gcd);
    let first = values
        .iter()
        .find(|v| !v.is_zero())
        .expect("eigensymbol is identically zero");
    let lead = first.coords().iter().rev().find(|c| !c.is_zero()).unwrap();
    if (lead * &scale).is_negative() {
        scale = -scale;
    }
    for v in values.iter_mut() {
        *v = v.scale(&scale);
    }
}
