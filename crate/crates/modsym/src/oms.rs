//! Overconvergent lifting of weight-2 eigensymbols and the resulting p-adic
//! L-series around T = 0, together with the exact twisted symbol sums used to
//! normalize the plus period.

use std::collections::HashMap;
use std::sync::Arc;

use chabauty_arith::numfield::NfElem;
use chabauty_arith::padic::Padic;
use chabauty_arith::primes::{factor_u64, inv_mod_u64, is_prime_u64, kronecker, mul_mod_u64};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::newforms::EigenSymbol;
use crate::space::{apply_to_cusp, mat_inv_sl2, mat_mul, Cusp, ManinSymbolSpace};
use crate::ModSymError;

/// The slope-zero lift of a p-stabilized eigensymbol: one moment vector per
/// class of P^1(Z/Np), each holding `num_moments` moments mod p^num_moments,
/// with the j-th moment of any value meaningful mod p^(num_moments - j).
pub struct OverconvergentSymbol {
    big: Arc<ManinSymbolSpace>,
    level: u64,
    p: u64,
    num_moments: usize,
    modulus: u64,
    alpha: u64,
    alpha_inv: u64,
    moments: Vec<Vec<u64>>,
    classical: Vec<u64>,
    eigen_slack: i64,
}

/// Expansion of the p-adic L-series in T = gamma - 1 for gamma = 1 + p.
pub struct PadicLSeries {
    p: u64,
    alpha: Padic,
    coeffs: Vec<Padic>,
}

impl PadicLSeries {
    pub fn prime(&self) -> u64 {
        self.p
    }

    /// The unit root of x^2 - a_p x + p used in the stabilization.
    pub fn alpha(&self) -> &Padic {
        &self.alpha
    }

    pub fn num_coeffs(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of T^j.
    pub fn coeff(&self, j: usize) -> &Padic {
        &self.coeffs[j]
    }

    /// The value d/dT at T = 0, the coefficient of T.
    pub fn derivative_at_zero(&self) -> &Padic {
        &self.coeffs[1]
    }
}

/// Lift an eigensymbol of good-prime level to its unique slope-zero
/// U_p-eigensymbol with values in distributions mod the moment filtration.
/// The embedding of the eigenvalue field into Z_p sends the field generator
/// to `root`.
pub fn overconvergent_lift(
    sym: &mut EigenSymbol,
    p: u64,
    root: &Padic,
    num_moments: usize,
) -> Result<OverconvergentSymbol, ModSymError> {
    let n = sym.level();
    assert!(is_prime_u64(p) && n % p != 0, "p must be a good prime for the level");
    assert_eq!(root.prime(), p);
    assert!(root.abs_prec() >= num_moments as i64, "embedding root known to too few digits");
    assert!(num_moments >= 2, "need at least two moments");
    let modulus = checked_prime_power(p, num_moments);

    let root_res = residue_u64(root, modulus, num_moments);
    let ap = embed_residue(&sym.a_prime(p), root_res, p, modulus);
    if ap % p == 0 {
        return Err(ModSymError::NotOrdinary { level: n, p });
    }
    let alpha = unit_root(ap, p, modulus);
    let alpha_inv = inv_mod_u64(alpha, modulus).expect("alpha is a unit");

    let big = Arc::new(ManinSymbolSpace::new(n * p));
    let npts = big.p1().len();

    let mut classical = Vec::with_capacity(npts);
    for i in 0..npts {
        let g = big.sl2_rep(i);
        let x = apply_to_cusp(g, &Cusp::zero());
        let y = apply_to_cusp(g, &Cusp::infinity());
        let v = embed_residue(&sym.evaluate(&x, &y), root_res, p, modulus);
        let w = embed_residue(
            &sym.evaluate(&scale_cusp(p, &x), &scale_cusp(p, &y)),
            root_res,
            p,
            modulus,
        );
        classical.push(sub_mod(v, mul_mod_u64(alpha_inv, w, modulus), modulus));
    }

    // Transition data for U_p: each class value pulls back through the
    // decomposition of the translated paths, acting on moments by the
    // composed matrices.
    let mut mat_index: HashMap<[i64; 4], usize> = HashMap::new();
    let mut mats: Vec<[i64; 4]> = Vec::new();
    let mut terms: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); npts];
    for (i, row) in terms.iter_mut().enumerate() {
        let g = big.sl2_rep(i);
        let x = apply_to_cusp(g, &Cusp::zero());
        let y = apply_to_cusp(g, &Cusp::infinity());
        for a in 0..p {
            let beta = [1, a as i64, 0, p as i64];
            let bx = apply_to_cusp(&beta, &x);
            let by = apply_to_cusp(&beta, &y);
            for (cls, gamma, sign) in big.twisted_path(&bx, &by) {
                debug_assert_eq!(sign.abs(), 1);
                let comp = mat_mul(&mat_inv_sl2(&gamma), &beta);
                let idx = *mat_index.entry(comp).or_insert_with(|| {
                    mats.push(comp);
                    mats.len() - 1
                });
                row.push((cls, idx, sign < 0));
            }
        }
    }
    let moment_mats: Vec<Vec<Vec<u64>>> = mats
        .iter()
        .map(|g| moment_matrix(g, p, modulus, num_moments))
        .collect();

    let mut moments: Vec<Vec<u64>> = classical
        .iter()
        .map(|&v| {
            let mut row = vec![0u64; num_moments];
            row[0] = v;
            row
        })
        .collect();

    for _ in 0..num_moments + 2 {
        let up = apply_up(&moments, &terms, &moment_mats, modulus, num_moments);
        for (i, row) in up.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                moments[i][j] = mul_mod_u64(alpha_inv, v, modulus);
            }
        }
    }

    for (i, row) in moments.iter().enumerate() {
        assert_eq!(row[0], classical[i], "zeroth moments drifted from the classical symbol");
    }

    let up = apply_up(&moments, &terms, &moment_mats, modulus, num_moments);
    let mut eigen_slack = i64::MAX;
    for (i, row) in up.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let diff = sub_mod(v, mul_mod_u64(alpha, moments[i][j], modulus), modulus);
            let slack = val_u64(diff, p, num_moments) as i64 - (num_moments - j) as i64;
            eigen_slack = eigen_slack.min(slack);
        }
    }
    assert!(
        eigen_slack >= 0,
        "lift is not a U_p eigenvector within the moment filtration (slack {eigen_slack})"
    );

    Ok(OverconvergentSymbol {
        big,
        level: n,
        p,
        num_moments,
        modulus,
        alpha,
        alpha_inv,
        moments,
        classical,
        eigen_slack,
    })
}

impl OverconvergentSymbol {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn num_moments(&self) -> usize {
        self.num_moments
    }

    /// The unit root of x^2 - a_p x + p fixed by the lift.
    pub fn alpha(&self) -> Padic {
        Padic::from_residue(self.p, BigUint::from(self.alpha), self.num_moments as i64)
    }

    /// Worst slack of the U_p eigen property over all classes and moments:
    /// nonnegative means the defect vanishes within the filtration.
    pub fn eigen_slack(&self) -> i64 {
        self.eigen_slack
    }

    /// Moments of the lifted symbol on the divisor {x} - {y}, the j-th with
    /// absolute precision num_moments - j.
    pub fn evaluate(&self, x: &Cusp, y: &Cusp) -> Vec<Padic> {
        let raw = self.evaluate_raw(x, y);
        raw.iter()
            .enumerate()
            .map(|(j, &v)| {
                Padic::from_residue(self.p, BigUint::from(v), (self.num_moments - j) as i64)
            })
            .collect()
    }

    /// Value of the p-stabilized classical symbol on {x} - {y}.
    pub fn stabilized_value(&self, x: &Cusp, y: &Cusp) -> Padic {
        let mut acc = 0u64;
        for (cls, _, sign) in self.big.twisted_path(x, y) {
            if sign > 0 {
                acc = add_mod(acc, self.classical[cls], self.modulus);
            } else {
                acc = sub_mod(acc, self.classical[cls], self.modulus);
            }
        }
        Padic::from_residue(self.p, BigUint::from(acc), self.num_moments as i64)
    }

    /// Moments of the attached measure on the disc a + pZ_p: the moment of
    /// order k integrates ((x - a)/p)^k.
    pub fn measure_moments(&self, a: u64) -> Vec<Padic> {
        assert!(a % self.p != 0, "disc must sit inside the units");
        let raw = self.evaluate_raw(&Cusp::new(a as i64, self.p as i64), &Cusp::infinity());
        raw.iter()
            .enumerate()
            .map(|(j, &v)| {
                let scaled = mul_mod_u64(self.alpha_inv, v, self.modulus);
                Padic::from_residue(self.p, BigUint::from(scaled), (self.num_moments - j) as i64)
            })
            .collect()
    }

    /// Total measure of the disc a + p^depth Z_p.
    pub fn measure_value(&self, a: u64, depth: u32) -> Padic {
        assert!(a % self.p != 0, "disc must sit inside the units");
        let den = self.p.pow(depth);
        let raw = self.evaluate_raw(&Cusp::new(a as i64, den as i64), &Cusp::infinity());
        let mut scale = 1u64;
        for _ in 0..depth {
            scale = mul_mod_u64(scale, self.alpha_inv, self.modulus);
        }
        let v = mul_mod_u64(scale, raw[0], self.modulus);
        Padic::from_residue(self.p, BigUint::from(v), self.num_moments as i64)
    }

    fn evaluate_raw(&self, x: &Cusp, y: &Cusp) -> Vec<u64> {
        let m = self.num_moments;
        let mut acc = vec![0u64; m];
        for (cls, gamma, sign) in self.big.twisted_path(x, y) {
            let t = moment_matrix(&mat_inv_sl2(&gamma), self.p, self.modulus, m);
            let contrib = apply_moment_matrix(&t, &self.moments[cls], self.modulus);
            for (dst, v) in acc.iter_mut().zip(contrib) {
                *dst = if sign > 0 {
                    add_mod(*dst, v, self.modulus)
                } else {
                    sub_mod(*dst, v, self.modulus)
                };
            }
        }
        acc
    }
}

/// The T-expansion of the Mazur-Tate-Teitelbaum L-series of the lift, using
/// the topological generator 1 + p, through degree `terms`.
pub fn mtt_series(oms: &OverconvergentSymbol, terms: usize) -> PadicLSeries {
    let p = oms.prime();
    let m = oms.num_moments();
    let prec = m as i64;
    let log_gamma = Padic::from_i64(p, 1 + p as i64, prec)
        .log()
        .expect("1 + p is a unit");

    let mut coeffs = vec![Padic::zero(p, prec); terms + 1];
    for a in 1..p {
        let mom = oms.measure_moments(a);

        // Coefficients of L_a(z) = log(1 + p z / a) / log(1 + p) as a series
        // in z; the constant term vanishes.
        let u = Padic::from_rational(
            p,
            &BigRational::new(BigInt::from(p), BigInt::from(a)),
            prec + 2,
        );
        let mut l = vec![Padic::zero(p, prec); m];
        let mut upow = Padic::one(p, prec + 2);
        for (k, lk) in l.iter_mut().enumerate().skip(1) {
            upow = upow.mul(&u);
            let kp = Padic::from_i64(p, k as i64, prec + 2);
            let mut term = upow.div(&kp).expect("k nonzero").div(&log_gamma).expect("log gamma nonzero");
            if k % 2 == 0 {
                term = term.neg();
            }
            *lk = term;
        }

        // e_j = integral of binom(L_a(z), j) against the disc moments.
        let mut e = Vec::with_capacity(terms + 1);
        e.push(mom[0].clone());
        let mut bin = vec![Padic::zero(p, prec); m];
        bin[0] = Padic::one(p, prec);
        for j in 1..=terms {
            // binom(L, j) = binom(L, j - 1) * (L - (j - 1)) / j
            let mut shifted = l.clone();
            shifted[0] = shifted[0].sub(&Padic::from_i64(p, (j - 1) as i64, prec));
            bin = series_mul(&bin, &shifted, m);
            let jp = Padic::from_i64(p, j as i64, prec);
            for b in bin.iter_mut() {
                *b = b.div(&jp).expect("j nonzero");
            }
            let mut ej = Padic::zero(p, prec);
            for (k, b) in bin.iter().enumerate() {
                ej = ej.add(&b.mul(&mom[k]));
            }
            let cap = tail_cap(m, j, p);
            e.push(ej.truncate(ej.abs_prec().min(cap)));
        }

        // (1 + T)^(b_a) with b_a = log(a / omega(a)) / log(1 + p).
        let b = Padic::from_i64(p, a as i64, prec)
            .log()
            .expect("a is a unit")
            .div(&log_gamma)
            .expect("log gamma nonzero");
        let mut bt = Vec::with_capacity(terms + 1);
        bt.push(Padic::one(p, prec));
        for i in 1..=terms {
            let factor = b.sub(&Padic::from_i64(p, (i - 1) as i64, prec));
            let next = bt[i - 1]
                .mul(&factor)
                .div(&Padic::from_i64(p, i as i64, prec))
                .expect("i nonzero");
            bt.push(next);
        }

        for n in 0..=terms {
            for i in 0..=n {
                coeffs[n] = coeffs[n].add(&bt[i].mul(&e[n - i]));
            }
        }
    }

    PadicLSeries { p, alpha: oms.alpha(), coeffs }
}

/// Build the lift and expand its L-series in one step.
pub fn padic_l_series(
    sym: &mut EigenSymbol,
    p: u64,
    root: &Padic,
    num_moments: usize,
    terms: usize,
) -> Result<PadicLSeries, ModSymError> {
    let oms = overconvergent_lift(sym, p, root, num_moments)?;
    Ok(mtt_series(&oms, terms))
}

/// The exact twisted symbol sum S over the eigenvalue field: for a real
/// quadratic character chi of fundamental conductor d > 1 this is
/// sum over 0 < a < d/2 coprime to d of chi(a)(phi({a} - {d}) + phi({-a} - {d})),
/// so that L(f^chi, 1)/Omega_f^+ = S/sqrt(d). For d = 1 it is phi({0} - {inf}).
pub fn plus_symbol_sum(sym: &EigenSymbol, d: u64) -> NfElem {
    if d == 1 {
        return sym.evaluate(&Cusp::zero(), &Cusp::infinity());
    }
    assert!(is_fundamental_discriminant(d), "{d} is not a fundamental discriminant");
    let mut acc = NfElem::zero(sym.field());
    let target = Cusp::infinity();
    for a in 1..=d / 2 {
        if gcd_u64(a, d) != 1 {
            continue;
        }
        let chi = kronecker(d as i64, a as i64);
        if chi == 0 {
            continue;
        }
        let plus = sym.evaluate(&Cusp::new(a as i64, d as i64), &target);
        let minus = sym.evaluate(&Cusp::new(-(a as i64), d as i64), &target);
        let term = plus.add(&minus);
        if chi > 0 {
            acc = acc.add(&term);
        } else {
            acc = acc.sub(&term);
        }
    }
    acc
}

/// Fundamental discriminants 5, 8, 12, 13, ... up to the limit.
pub fn fundamental_discriminants(limit: u64) -> Vec<u64> {
    (5..=limit).filter(|&d| is_fundamental_discriminant(d)).collect()
}

fn is_fundamental_discriminant(d: u64) -> bool {
    if d % 4 == 1 {
        is_squarefree(d)
    } else if d % 4 == 0 {
        let q = d / 4;
        (q % 4 == 2 || q % 4 == 3) && is_squarefree(q)
    } else {
        false
    }
}

fn is_squarefree(n: u64) -> bool {
    factor_u64(n).iter().all(|&(_, e)| e == 1)
}

/// The first fundamental discriminant coprime to the level whose twisted
/// symbol sum is nonzero, with the exact sum.
pub fn plus_symbol_data(sym: &EigenSymbol, limit: u64) -> Option<(u64, NfElem)> {
    let n = sym.level();
    for d in fundamental_discriminants(limit) {
        if gcd_u64(d, n) != 1 {
            continue;
        }
        let s = plus_symbol_sum(sym, d);
        if !s.is_zero() {
            return Some((d, s));
        }
    }
    None
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd_u64(b, a % b) }
}

fn checked_prime_power(p: u64, e: usize) -> u64 {
    let mut out = 1u64;
    for _ in 0..e {
        out = out
            .checked_mul(p)
            .filter(|&v| v <= i64::MAX as u64)
            .expect("moment modulus must fit in a signed word");
    }
    out
}

fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + m as u128 - b as u128 % m as u128) % m as u128) as u64
}

fn val_u64(mut v: u64, p: u64, cap: usize) -> usize {
    if v == 0 {
        return cap;
    }
    let mut out = 0;
    while v % p == 0 && out < cap {
        v /= p;
        out += 1;
    }
    out
}

/// Residue of a p-adic integer as a machine word mod p^digits.
fn residue_u64(x: &Padic, modulus: u64, digits: usize) -> u64 {
    let truncated = x.truncate(digits as i64);
    let r = truncated.residue();
    let r = (r % BigUint::from(modulus)).to_u64().expect("residue fits");
    r
}

/// Image of a field element in Z/p^M under the embedding generator -> root.
fn embed_residue(x: &NfElem, root: u64, p: u64, modulus: u64) -> u64 {
    let mut acc = 0u64;
    for c in x.coords().iter().rev() {
        acc = mul_mod_u64(acc, root, modulus);
        acc = add_mod(acc, rational_residue(c, p, modulus), modulus);
    }
    acc
}

fn rational_residue(q: &BigRational, p: u64, modulus: u64) -> u64 {
    let m = BigInt::from(modulus);
    let num = q.numer().mod_floor(&m).to_u64().expect("reduced numerator fits");
    let den = q.denom().mod_floor(&m).to_u64().expect("reduced denominator fits");
    assert!(den % p != 0, "symbol value has a denominator divisible by p");
    mul_mod_u64(num, inv_mod_u64(den, modulus).expect("denominator is a unit"), modulus)
}

/// The unit root of x^2 - ap x + p mod p^M by Newton iteration from ap mod p.
fn unit_root(ap: u64, p: u64, modulus: u64) -> u64 {
    let mut x = ap % p;
    assert!(x != 0, "not ordinary");
    for _ in 0..64 {
        let fx = sub_mod(
            add_mod(mul_mod_u64(x, x, modulus), p % modulus, modulus),
            mul_mod_u64(ap, x, modulus),
            modulus,
        );
        if fx == 0 {
            break;
        }
        let d = sub_mod(add_mod(x, x, modulus), ap % modulus, modulus);
        let step = mul_mod_u64(fx, inv_mod_u64(d, modulus).expect("derivative is a unit"), modulus);
        x = sub_mod(x, step, modulus);
    }
    let check = sub_mod(
        add_mod(mul_mod_u64(x, x, modulus), p % modulus, modulus),
        mul_mod_u64(ap, x, modulus),
        modulus,
    );
    assert_eq!(check, 0, "unit root iteration did not converge");
    assert_eq!(x % p, ap % p);
    x
}

fn scale_cusp(p: u64, x: &Cusp) -> Cusp {
    if x.is_infinity() {
        Cusp::infinity()
    } else {
        Cusp::new(p as i64 * x.num, x.den)
    }
}

/// Moment transformation of the weight-0 right action of g = [a, b; c, d]
/// (a a unit, p | c): row j holds the series coefficients of
/// ((b + d x)/(a + c x))^j mod x^M.
fn moment_matrix(g: &[i64; 4], p: u64, modulus: u64, m: usize) -> Vec<Vec<u64>> {
    let md = modulus as i64;
    let a = g[0].rem_euclid(md) as u64;
    let b = g[1].rem_euclid(md) as u64;
    let c = g[2].rem_euclid(md) as u64;
    let d = g[3].rem_euclid(md) as u64;
    assert!(a % p != 0, "matrix does not act on moments: upper left not a unit");
    assert!(c % p == 0, "matrix does not act on moments: lower left not divisible by p");
    let a_inv = inv_mod_u64(a, modulus).expect("unit");
    let neg_ca = sub_mod(0, mul_mod_u64(c, a_inv, modulus), modulus);

    // (a + c x)^(-1) = a^(-1) sum (-c/a)^k x^k
    let mut inv_series = vec![0u64; m];
    inv_series[0] = a_inv;
    for k in 1..m {
        inv_series[k] = mul_mod_u64(inv_series[k - 1], neg_ca, modulus);
    }
    let mut s = vec![0u64; m];
    for k in 0..m {
        s[k] = mul_mod_u64(b, inv_series[k], modulus);
        if k > 0 {
            s[k] = add_mod(s[k], mul_mod_u64(d, inv_series[k - 1], modulus), modulus);
        }
    }

    let mut rows = vec![vec![0u64; m]; m];
    rows[0][0] = 1 % modulus;
    for j in 1..m {
        rows[j] = series_mul_u64(&rows[j - 1], &s, modulus);
    }
    rows
}

fn series_mul_u64(a: &[u64], b: &[u64], modulus: u64) -> Vec<u64> {
    let m = a.len();
    let mut out = vec![0u64; m];
    for i in 0..m {
        if a[i] == 0 {
            continue;
        }
        for j in 0..m - i {
            if b[j] == 0 {
                continue;
            }
            out[i + j] = add_mod(out[i + j], mul_mod_u64(a[i], b[j], modulus), modulus);
        }
    }
    out
}

fn apply_moment_matrix(rows: &[Vec<u64>], v: &[u64], modulus: u64) -> Vec<u64> {
    rows.iter()
        .map(|row| {
            let mut acc = 0u64;
            for (c, x) in row.iter().zip(v) {
                if *c != 0 && *x != 0 {
                    acc = add_mod(acc, mul_mod_u64(*c, *x, modulus), modulus);
                }
            }
            acc
        })
        .collect()
}

fn apply_up(
    moments: &[Vec<u64>],
    terms: &[Vec<(usize, usize, bool)>],
    moment_mats: &[Vec<Vec<u64>>],
    modulus: u64,
    m: usize,
) -> Vec<Vec<u64>> {
    terms
        .iter()
        .map(|row| {
            let mut acc = vec![0u64; m];
            for &(cls, mat, negate) in row {
                let contrib = apply_moment_matrix(&moment_mats[mat], &moments[cls], modulus);
                for (dst, v) in acc.iter_mut().zip(contrib) {
                    *dst = if negate {
                        sub_mod(*dst, v, modulus)
                    } else {
                        add_mod(*dst, v, modulus)
                    };
                }
            }
            acc
        })
        .collect()
}

fn series_mul(a: &[Padic], b: &[Padic], m: usize) -> Vec<Padic> {
    let p = a[0].prime();
    let prec = a[0].abs_prec().max(b[0].abs_prec());
    let mut out = vec![Padic::zero(p, prec); m];
    for (i, ai) in a.iter().enumerate().take(m) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(m - i) {
            if bj.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&ai.mul(bj));
        }
    }
    out
}

/// Bound on the precision of the T^j series coefficient imposed by cutting
/// the z-expansion of the integrand at z^M.
fn tail_cap(m: usize, j: usize, p: u64) -> i64 {
    let mut log_m = 0i64;
    let mut acc = 1u64;
    while acc < m as u64 {
        acc *= p;
        log_m += 1;
    }
    m as i64 - j as i64 - log_m - vp_factorial(j as u64, p)
}

fn vp_factorial(j: u64, p: u64) -> i64 {
    let mut out = 0i64;
    let mut q = p;
    while q <= j {
        out += (j / q) as i64;
        q *= p;
    }
    out
}
