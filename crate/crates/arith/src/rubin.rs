//! Extrapolation coefficients for recovering an interpolated value at 0
//! from its values at 1, 2, ..., B.
//!
//! Setting: H(j) = H(0) * u^(e(j)) where u = 1 mod p and e is linear in j.
//! Expanding u^(e(j)) = (1 + p*delta)^(e(j)) by the binomial series and
//! truncating below p^B leaves a polynomial in j of degree < B, so the
//! forward-difference operator of order B kills it mod p^B:
//!
//!   sum_{k=0}^{B} (-1)^k C(B,k) H(k) = 0  (mod p^B)
//!
//! which rearranges to H(0) = sum_{j=1}^{B} c_j H(j) with
//! c_j = (-1)^(j-1) C(B, j). The hockey-stick identity gives the equivalent
//! form c_j = (-1)^(j-1) * sum_{i=j}^{B} C(i-1, j-1).

use crate::primes::binomial;
use num_bigint::BigInt;

/// Coefficients c_1, ..., c_B with H(0) = sum c_j H(j) mod p^B.
pub fn rubin_coefficients(b: u32) -> Vec<BigInt> {
    assert!(b >= 1, "need at least one interpolation point");
    (1..=b as u64)
        .map(|j| {
            let c = BigInt::from(binomial(b as u64, j));
            if j % 2 == 1 {
                c
            } else {
                -c
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_rational::BigRational;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(rubin_coefficients(1), vec![BigInt::from(1)]);
        assert_eq!(rubin_coefficients(2), vec![BigInt::from(2), BigInt::from(-1)]);
        assert_eq!(
            rubin_coefficients(3),
            vec![BigInt::from(3), BigInt::from(-3), BigInt::from(1)]
        );
    }

    #[test]
    fn hockey_stick_form_agrees() {
        // c_j = (-1)^(j-1) * sum_{i=j}^{B} C(i-1, j-1).
        for b in 1..=10u32 {
            let cs = rubin_coefficients(b);
            for j in 1..=b as u64 {
                let mut s = BigUint::zero();
                for i in j..=b as u64 {
                    s += binomial(i - 1, j - 1);
                }
                let want = if j % 2 == 1 {
                    BigInt::from(s)
                } else {
                    -BigInt::from(s)
                };
                assert_eq!(cs[(j - 1) as usize], want, "b={}, j={}", b, j);
            }
        }
    }

    #[test]
    fn coefficients_sum_to_one() {
        for b in 1..=12u32 {
            let s: BigInt = rubin_coefficients(b).into_iter().sum();
            assert_eq!(s, BigInt::from(1));
        }
    }

    #[test]
    fn exact_on_low_degree_polynomials() {
        // For any polynomial P of degree < B, P(0) = sum c_j P(j) exactly.
        for b in 1..=8u32 {
            let cs = rubin_coefficients(b);
            for deg in 0..b {
                // P(j) = (3j - 2)^deg as a concrete degree-deg polynomial.
                let p = |j: i64| -> BigRational {
                    let base = BigRational::from_integer(BigInt::from(3 * j - 2));
                    let mut acc = BigRational::one();
                    for _ in 0..deg {
                        acc *= &base;
                    }
                    acc
                };
                let extrapolated: BigRational = cs
                    .iter()
                    .enumerate()
                    .map(|(idx, c)| BigRational::from_integer(c.clone()) * p(idx as i64 + 1))
                    .sum();
                assert_eq!(extrapolated, p(0), "b={}, deg={}", b, deg);
            }
        }
    }

    proptest! {
        #[test]
        fn one_units_extrapolate_to_one(
            p_idx in 0usize..3,
            b in 1u32..=8,
            delta in 1u64..1000,
        ) {
            // u = 1 + p*delta: sum c_j u^j = 1 mod p^b.
            let p = [5u64, 7, 11][p_idx];
            let modulus = BigUint::from(p).pow(b);
            let u = (BigUint::one() + BigUint::from(p) * BigUint::from(delta)) % &modulus;
            let cs = rubin_coefficients(b);
            let mut acc = BigInt::zero();
            let mut upow = BigUint::one();
            for c in &cs {
                upow = upow * &u % &modulus;
                acc += c * BigInt::from(upow.clone());
            }
            let m = BigInt::from(modulus);
            let r = ((acc % &m) + &m) % &m;
            prop_assert_eq!(r, BigInt::one());
        }
    }
}
