//! Eisenstein series, the Serre derivative, and the first Rankin-Cohen
//! bracket.

use crate::qexp::QExpansion;
use crate::{big, ModformError};
use chabauty_arith::primes::{divisors_u64, factor_u64, pow_mod_u64};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Divisor power sum `sigma_k(n)`.
pub fn sigma(n: u64, k: u32) -> BigInt {
    assert!(n > 0);
    let mut total = BigInt::zero();
    for d in divisors_u64(n) {
        total += BigInt::from(d).pow(k);
    }
    total
}

fn eisenstein_series(weight: i64, scale: i64, power: u32, order: usize) -> QExpansion {
    let mut coeffs = vec![BigRational::zero(); order + 1];
    coeffs[0] = BigRational::one();
    for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
        *c = BigRational::from_integer(big(scale) * sigma(n as u64, power));
    }
    QExpansion::new(1, weight, coeffs)
}

/// The quasi-modular `E_2 = 1 - 24 sum sigma_1(n) q^n` of level one.
pub fn e2(order: usize) -> QExpansion {
    eisenstein_series(2, -24, 1, order)
}

/// `E_4 = 1 + 240 sum sigma_3(n) q^n`.
pub fn e4(order: usize) -> QExpansion {
    eisenstein_series(4, 240, 3, order)
}

/// `E_6 = 1 - 504 sum sigma_5(n) q^n`.
pub fn e6(order: usize) -> QExpansion {
    eisenstein_series(6, -504, 5, order)
}

/// The weight-two Eisenstein series `(E_2(q) - d E_2(q^d)) / (1 - d)` on
/// `Gamma_0(d)`, normalized to constant term 1.
pub fn e2_level(d: u64, order: usize) -> QExpansion {
    assert!(d > 1, "the level-one combination vanishes");
    let full = e2(order);
    let embedded = full.embed(d).truncate(order);
    let denom = BigRational::from_integer(big(1) - big(d as i64));
    full.sub(&embedded.scale_int(d as i64))
        .scale(&denom.recip())
        .with_level(d)
}

/// Serre derivative `theta f = q df/dq - (w/12) E_2 f`, sending weight `w`
/// to weight `w + 2` and preserving modularity.
pub fn serre_derivative(f: &QExpansion) -> QExpansion {
    let w = f.weight();
    let e2 = e2(f.order());
    let correction = e2
        .mul(f)
        .scale(&BigRational::new(big(w), big(12)))
        .with_weight(w + 2);
    f.derive().sub(&correction)
}

/// First Rankin-Cohen bracket `[f, g]_1 = k_f f Dg - k_g (Df) g`, a cusp
/// form of weight `k_f + k_g + 2`.
pub fn rankin_cohen1(f: &QExpansion, g: &QExpansion) -> QExpansion {
    let kf = f.weight();
    let kg = g.weight();
    f.mul(&g.derive())
        .scale_int(kf)
        .sub(&f.derive().mul(g).scale_int(kg))
}

/// Exponent vectors of the cyclotomic polynomial `Phi_m`, low degree
/// first, computed by exact division of `x^m - 1` by the proper-divisor
/// factors.
pub fn cyclotomic(m: u64) -> Vec<BigInt> {
    assert!(m >= 1);
    let mut numer = vec![BigInt::zero(); m as usize + 1];
    numer[0] = -BigInt::one();
    numer[m as usize] = BigInt::one();
    for d in divisors_u64(m) {
        if d == m {
            continue;
        }
        numer = poly_divexact(&numer, &cyclotomic(d));
    }
    numer
}

fn poly_divexact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(dn >= dd && !den[dd].is_zero());
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for i in (0..=dn - dd).rev() {
        let c = &rem[i + dd] / &den[dd];
        if c.is_zero() && rem[i + dd].is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            let sub = dj * &c;
            rem[i + j] -= sub;
        }
        quot[i] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    quot
}

fn primitive_root(q: u64) -> u64 {
    let factors: Vec<u64> = factor_u64(q - 1).into_iter().map(|(p, _)| p).collect();
    'outer: for g in 2..q {
        for &p in &factors {
            if pow_mod_u64(g, (q - 1) / p, q) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("no primitive root modulo a prime")
}

/// Rational coordinate series of the weight-two Eisenstein newforms
/// `E_2^{chi, chibar}` on `Gamma_0(q^2)` for an odd prime `q`, one Galois
/// orbit per order `m > 1` dividing `q - 1`.
///
/// For a primitive character `chi` mod `q` of order `m` the series
/// `sum_n (sum_{d | n} chi(n/d) chibar(d) d) q^n` has coefficients in
/// `Z[zeta_m]`; its `phi(m)` power-basis coordinate series are rational
/// weight-two forms spanning the orbit. Taken over all `m` the function
/// returns `q - 2` series which, together with the two series from
/// [`e2_level`] at `d = q` and `d = q^2`, span the Eisenstein subspace.
pub fn weight2_char_eisenstein(q: u64, order: usize) -> Result<Vec<QExpansion>, ModformError> {
    if q < 3 || factor_u64(q).len() != 1 || factor_u64(q)[0].1 != 1 {
        return Err(ModformError::UnsupportedLevel(q * q));
    }
    let g = primitive_root(q);
    let mut dlog = vec![0u64; q as usize];
    let mut acc = 1u64;
    for a in 0..q - 1 {
        dlog[acc as usize] = a;
        acc = acc * g % q;
    }
    let mut out = Vec::new();
    for m in divisors_u64(q - 1) {
        if m == 1 {
            continue;
        }
        let phi_m = cyclotomic(m);
        let deg = phi_m.len() - 1;
        let zeta_pow = reduced_powers(&phi_m, m as usize);
        let mut coords: Vec<Vec<BigRational>> =
            vec![vec![BigRational::zero(); order + 1]; deg];
        for n in 1..=order as u64 {
            for d in divisors_u64(n) {
                let e = n / d;
                if d % q == 0 || e % q == 0 {
                    continue;
                }
                let step = (q - 1) / m;
                let expo = ((dlog[(e % q) as usize] + (q - 1) - dlog[(d % q) as usize])
                    % (q - 1))
                    / step;
                let rem = (dlog[(e % q) as usize] + (q - 1) - dlog[(d % q) as usize]) % step;
                if rem != 0 {
                    continue;
                }
                for (j, z) in zeta_pow[expo as usize].iter().enumerate() {
                    if !z.is_zero() {
                        coords[j][n as usize] +=
                            BigRational::from_integer(z * BigInt::from(d));
                    }
                }
            }
        }
        for series in coords {
            out.push(QExpansion::new(q * q, 2, series));
        }
    }
    Ok(out)
}

fn reduced_powers(phi: &[BigInt], m: usize) -> Vec<Vec<BigInt>> {
    let deg = phi.len() - 1;
    let mut pows = Vec::with_capacity(m);
    let mut cur = vec![BigInt::zero(); deg];
    cur[0] = BigInt::one();
    for _ in 0..m {
        pows.push(cur.clone());
        let mut next = vec![BigInt::zero(); deg + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] = c.clone();
        }
        let lead = next[deg].clone();
        if !lead.is_zero() {
            for (i, p) in phi.iter().take(deg).enumerate() {
                next[i] -= &lead * p;
            }
        }
        next.truncate(deg);
        cur = next;
    }
    pows
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn classical_expansions() {
        let e4 = e4(5);
        assert_eq!(*e4.coeff(1), BigRational::from_integer(big(240)));
        assert_eq!(*e4.coeff(2), BigRational::from_integer(big(2160)));
        let e6 = e6(3);
        assert_eq!(*e6.coeff(1), BigRational::from_integer(big(-504)));
        assert_eq!(*e6.coeff(2), BigRational::from_integer(big(-16632)));
        let e2 = e2(3);
        assert_eq!(*e2.coeff(2), BigRational::from_integer(big(-72)));
    }

    #[test]
    fn ramanujan_identity_de2() {
        let order = 30;
        let e2s = e2(order);
        let lhs = e2s.derive();
        let rhs = e2s
            .mul(&e2s)
            .sub(&e4(order).with_weight(4))
            .scale(&BigRational::new(big(1), big(12)));
        assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn weight_two_eisenstein_at_37() {
        let e = e2_level(37, 10);
        assert!(e.coeff(0).is_one());
        for n in 1..=10usize {
            let expected = BigRational::new(big(2), big(3))
                * BigRational::from_integer(sigma(n as u64, 1));
            assert_eq!(*e.coeff(n), expected, "coefficient {}", n);
        }
    }

    #[test]
    fn serre_derivative_of_e4_is_proportional_to_e6() {
        let theta = serre_derivative(&e4(20));
        let target = e6(20).scale(&BigRational::new(big(-1), big(3)));
        assert!(theta.agrees_with(&target));
    }

    #[test]
    fn rankin_cohen_bracket_is_cuspidal() {
        let b = rankin_cohen1(&e4(20), &e6(20));
        assert_eq!(b.weight(), 12);
        assert!(b.coeff(0).is_zero());
        let delta_first = b.coeff(1).clone();
        assert!(delta_first.abs() > BigRational::zero());
        let normalized = b.scale(&delta_first.recip());
        assert_eq!(*normalized.coeff(2), BigRational::from_integer(big(-24)));
        assert_eq!(*normalized.coeff(3), BigRational::from_integer(big(252)));
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1), vec![big(-1), big(1)]);
        assert_eq!(cyclotomic(2), vec![big(1), big(1)]);
        assert_eq!(cyclotomic(6), vec![big(1), big(-1), big(1)]);
        assert_eq!(
            cyclotomic(12),
            vec![big(1), big(0), big(-1), big(0), big(1)]
        );
    }

    #[test]
    fn character_eisenstein_count_and_constants() {
        let series = weight2_char_eisenstein(13, 20).unwrap();
        assert_eq!(series.len(), 11);
        for s in &series {
            assert!(s.coeff(0).is_zero());
            assert_eq!(s.level(), 169);
        }
        let quadratic = &series[0];
        assert!(quadratic.coeff(1).is_one());
    }
}
