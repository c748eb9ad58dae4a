//! LLL lattice reduction and recognition of algebraic numbers.
//!
//! The reduction is the textbook Lenstra-Lenstra-Lovasz algorithm with
//! delta = 3/4 and exact rational Gram-Schmidt data, adequate for the small
//! dimensions used here (at most 8). On top of it sits an integer-relation
//! finder: given a high-precision complex value x and complex embeddings of
//! a field basis w_0..w_{d-1}, it searches for a relation
//! n_0 w_0 + ... + n_{d-1} w_{d-1} + m x ~ 0 and returns the coordinates
//! x = sum (-n_i/m) w_i together with the verified residual |x - candidate|.
//! Recognition fails loudly if the best residual exceeds the tolerance or
//! the denominator exceeds its bound.

use crate::bigcomplex::BigComplex;
use crate::bigfloat::BigFloat;
use crate::{ArithError, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn round_rational(q: &BigRational) -> BigInt {
    // Nearest integer, half away from zero.
    let two = BigInt::from(2);
    let mag = (q.numer().abs() * &two + q.denom()) / (q.denom() * &two);
    if q.numer().is_negative() {
        -mag
    } else {
        mag
    }
}

/// LLL-reduce an integer lattice basis (rows), delta = 3/4.
pub fn lll_reduce(mut basis: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = basis.len();
    if n <= 1 {
        return basis;
    }
    let dim = basis[0].len();
    assert!(basis.iter().all(|b| b.len() == dim), "ragged lattice basis");

    // Exact Gram-Schmidt: mu[i][j] for j < i, and squared norms bstar[i].
    let gram_schmidt = |b: &[Vec<BigInt>]| -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
        let n = b.len();
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        let mut bstar: Vec<Vec<BigRational>> = Vec::with_capacity(n);
        let mut norms = Vec::with_capacity(n);
        for i in 0..n {
            let mut v: Vec<BigRational> = b[i]
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect();
            for j in 0..i {
                let num: BigRational = b[i]
                    .iter()
                    .zip(&bstar[j])
                    .map(|(x, y)| BigRational::from_integer(x.clone()) * y)
                    .sum();
                let m = if norms[j] == BigRational::zero() {
                    BigRational::zero()
                } else {
                    &num / &norms[j]
                };
                for (vk, sk) in v.iter_mut().zip(&bstar[j]) {
                    *vk -= &m * sk;
                }
                mu[i][j] = m;
            }
            let norm: BigRational = v.iter().map(|x| x * x).sum();
            norms.push(norm);
            bstar.push(v);
        }
        (mu, norms)
    };

    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let (mut mu, mut norms) = gram_schmidt(&basis);
    let mut k = 1;
    while k < n {
        // Size reduction.
        let mut changed = false;
        for j in (0..k).rev() {
            if mu[k][j].abs() > half {
                let q = round_rational(&mu[k][j]);
                if !q.is_zero() {
                    let bj = basis[j].clone();
                    for (x, y) in basis[k].iter_mut().zip(&bj) {
                        *x -= &q * y;
                    }
                    changed = true;
                }
            }
        }
        if changed {
            let gs = gram_schmidt(&basis);
            mu = gs.0;
            norms = gs.1;
        }
        // Lovasz condition.
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            let gs = gram_schmidt(&basis);
            mu = gs.0;
            norms = gs.1;
            k = k.max(2) - 1;
        }
    }
    basis
}

/// Result of a successful recognition: coordinates in the supplied basis and
/// the verified residual.
#[derive(Clone, Debug)]
pub struct Recognized {
    pub coords: Vec<BigRational>,
    pub residual: BigFloat,
}

/// Recognize x as a bounded-denominator rational combination of the basis
/// values. `basis` holds the complex embeddings of the field basis elements.
pub fn recognize_linear_combo(
    x: &BigComplex,
    basis: &[BigComplex],
    denom_bound: &BigInt,
    tol: &BigFloat,
) -> Result<Recognized> {
    let d = basis.len();
    assert!(d >= 1, "empty recognition basis");
    let prec = x.prec();
    // Scale factor: use most of the available precision, leaving room so
    // that genuine relations round to short vectors.
    let scale_bits = (prec as i64 - 8).max(32);
    let scaled = |v: &BigFloat| -> BigInt { v.mul_2exp(scale_bits).round_to_bigint() };

    // Rows: basis elements with unit tags, then x with tag weight 1.
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(d + 1);
    for (i, w) in basis.iter().enumerate() {
        let mut row = vec![BigInt::zero(); d + 3];
        row[i] = BigInt::one();
        row[d + 1] = scaled(&w.re);
        row[d + 2] = scaled(&w.im);
        rows.push(row);
    }
    let mut xrow = vec![BigInt::zero(); d + 3];
    xrow[d] = BigInt::one();
    xrow[d + 1] = scaled(&x.re);
    xrow[d + 2] = scaled(&x.im);
    rows.push(xrow);

    let reduced = lll_reduce(rows);

    // Hunt for a vector with nonzero x-multiplier; verify its residual.
    let mut best: Option<Recognized> = None;
    for v in &reduced {
        let m = &v[d];
        if m.is_zero() || m.magnitude() > denom_bound.magnitude() {
            continue;
        }
        let coords: Vec<BigRational> = (0..d)
            .map(|i| BigRational::new(-&v[i], m.clone()))
            .collect();
        // Residual check at full precision.
        let mut approx = BigComplex::zero(prec);
        for (c, w) in coords.iter().zip(basis) {
            approx = approx.add(&w.mul_real(&BigFloat::from_rational(c, prec)));
        }
        let residual = x.sub(&approx).abs();
        let keep = match &best {
            None => true,
            Some(b) => residual.cmp_abs(&b.residual) == std::cmp::Ordering::Less,
        };
        if keep {
            best = Some(Recognized { coords, residual });
        }
    }

    match best {
        Some(r) if r.residual.cmp_abs(tol) != std::cmp::Ordering::Greater => Ok(r),
        Some(r) => Err(ArithError::RecognitionFailed {
            residual: format!("{:e}", r.residual.to_f64()),
            tolerance: format!("{:e}", tol.to_f64()),
            degree: d,
            denom_bound: denom_bound.to_string(),
        }),
        None => Err(ArithError::RecognitionFailed {
            residual: "none".into(),
            tolerance: format!("{:e}", tol.to_f64()),
            degree: d,
            denom_bound: denom_bound.to_string(),
        }),
    }
}

/// Recognize a real value as a rational with bounded denominator.
pub fn recognize_rational(
    x: &BigFloat,
    denom_bound: &BigInt,
    tol: &BigFloat,
) -> Result<BigRational> {
    let prec = x.prec();
    let one = BigComplex::from_i64(1, prec);
    let z = BigComplex::from_real(x.clone());
    let r = recognize_linear_combo(&z, &[one], denom_bound, tol)?;
    Ok(r.coords[0].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigfloat::digits_to_bits;

    #[test]
    fn lll_finds_short_vector() {
        // Classic: basis of a lattice containing a very short hidden vector.
        let b = vec![
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(10000)],
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(10001)],
            vec![BigInt::from(0), BigInt::from(0), BigInt::from(20001)],
        ];
        let red = lll_reduce(b);
        let norm0: BigInt = red[0].iter().map(|x| x * x).sum();
        // (1, -2, -2) or similar short combination exists: 10000·1 - ...
        assert!(norm0 < BigInt::from(100), "first vector not short: {:?}", red[0]);
    }

    #[test]
    fn lll_preserves_determinant() {
        let b = vec![
            vec![BigInt::from(4), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(3)],
        ];
        let det = BigInt::from(4 * 3 - 1);
        let red = lll_reduce(b);
        let d2 = &red[0][0] * &red[1][1] - &red[0][1] * &red[1][0];
        assert_eq!(d2.magnitude(), det.magnitude());
    }

    #[test]
    fn recognize_golden_combination() {
        // x = 3/10 + (2/5)·ν with ν = (1+√5)/2, from its 30-digit value.
        let prec = digits_to_bits(30);
        let nu = BigFloat::from_i64(5, prec)
            .sqrt()
            .add(&BigFloat::from_i64(1, prec))
            .mul_2exp(-1);
        let x = nu
            .mul(&BigFloat::from_rational(
                &BigRational::new(BigInt::from(2), BigInt::from(5)),
                prec,
            ))
            .add(&BigFloat::from_rational(
                &BigRational::new(BigInt::from(3), BigInt::from(10)),
                prec,
            ));
        let basis = vec![BigComplex::from_i64(1, prec), BigComplex::from_real(nu)];
        let tol = BigFloat::from_f64(1e-20, prec);
        let r = recognize_linear_combo(
            &BigComplex::from_real(x),
            &basis,
            &BigInt::from(10_000),
            &tol,
        )
        .unwrap();
        assert_eq!(r.coords[0], BigRational::new(BigInt::from(3), BigInt::from(10)));
        assert_eq!(r.coords[1], BigRational::new(BigInt::from(2), BigInt::from(5)));
        assert!(r.residual.to_f64() < 1e-20);
    }

    #[test]
    fn recognize_gaussian_integer_combo() {
        // Complex recognition: x = (1 - 3i)/4 + (5/2)·i·√2 over basis (1, i√2).
        let prec = digits_to_bits(30);
        let s2 = BigFloat::from_i64(2, prec).sqrt();
        let w1 = BigComplex::from_i64(1, prec);
        let w2 = BigComplex::new(BigFloat::zero(prec), s2);
        let c1 = BigRational::new(BigInt::from(1), BigInt::from(4));
        let c2 = BigRational::new(BigInt::from(5), BigInt::from(2));
        // x = c1·w1 + c2·w2 + (also test a real-imag mix in w1 coefficient).
        let x = w1.mul_real(&BigFloat::from_rational(&c1, prec)).add(
            &w2.mul_real(&BigFloat::from_rational(&c2, prec)),
        );
        let tol = BigFloat::from_f64(1e-20, prec);
        let r = recognize_linear_combo(&x, &[w1, w2], &BigInt::from(100), &tol).unwrap();
        assert_eq!(r.coords, vec![c1, c2]);
    }

    #[test]
    fn transcendental_is_rejected() {
        let prec = digits_to_bits(30);
        let x = crate::bigfloat::pi(prec);
        let nu = BigFloat::from_i64(5, prec).sqrt();
        let basis = vec![BigComplex::from_i64(1, prec), BigComplex::from_real(nu)];
        let tol = BigFloat::from_f64(1e-25, prec);
        let res = recognize_linear_combo(
            &BigComplex::from_real(x),
            &basis,
            &BigInt::from(1000),
            &tol,
        );
        assert!(matches!(res, Err(ArithError::RecognitionFailed { .. })));
    }

    #[test]
    fn recognize_rational_simple() {
        let prec = digits_to_bits(30);
        let x = BigFloat::from_rational(
            &BigRational::new(BigInt::from(-22), BigInt::from(7)),
            prec,
        );
        let tol = BigFloat::from_f64(1e-20, prec);
        let q = recognize_rational(&x, &BigInt::from(100), &tol).unwrap();
        assert_eq!(q, BigRational::new(BigInt::from(-22), BigInt::from(7)));
    }
}
