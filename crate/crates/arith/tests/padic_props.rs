//! Property suites for the p-adic layer.
//!
//! Two families: agreement with exact rational arithmetic (the rational
//! numbers with p-unit denominators embed in Q_p, and every ring operation
//! must commute with that embedding to the tracked precision), and precision
//! monotonicity (no operation may claim more precision than its inputs
//! support).

use chabauty_arith::padic::Padic;
use chabauty_arith::unram::{UnramCtx, UnramElem};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![5u64, 7, 11])
}

/// Rational with denominator coprime to all of 5, 7, 11.
fn unit_rational() -> impl Strategy<Value = BigRational> {
    (-2000i64..2000, 1i64..300).prop_map(|(n, d)| {
        let mut d = d;
        while d % 5 == 0 || d % 7 == 0 || d % 11 == 0 {
            d += 1;
        }
        BigRational::new(BigInt::from(n), BigInt::from(d))
    })
}

proptest! {
    #[test]
    fn ring_ops_match_rational_model(
        p in small_prime(),
        a in unit_rational(),
        b in unit_rational(),
        prec in 3i64..12,
    ) {
        let xa = Padic::from_rational(p, &a, prec);
        let xb = Padic::from_rational(p, &b, prec);
        let sum = Padic::from_rational(p, &(&a + &b), prec);
        let prod = Padic::from_rational(p, &(&a * &b), prec);
        let diff = Padic::from_rational(p, &(&a - &b), prec);
        prop_assert!(xa.add(&xb).agrees_with(&sum));
        prop_assert!(xa.mul(&xb).agrees_with(&prod));
        prop_assert!(xa.sub(&xb).agrees_with(&diff));
        let numer_unit = {
            let m = b.numer().magnitude();
            !m.is_zero() && m % 5u32 != 0u32.into() && m % 7u32 != 0u32.into() && m % 11u32 != 0u32.into()
        };
        if numer_unit {
            let quot = Padic::from_rational(p, &(&a / &b), prec);
            prop_assert!(xa.div(&xb).unwrap().agrees_with(&quot));
        }
    }

    #[test]
    fn precision_never_gained(
        p in small_prime(),
        a in unit_rational(),
        b in unit_rational(),
        pa in 3i64..10,
        pb in 3i64..10,
    ) {
        let xa = Padic::from_rational(p, &a, pa);
        let xb = Padic::from_rational(p, &b, pb);
        // Addition: absolute precision is the minimum of the inputs'.
        let s = xa.add(&xb);
        prop_assert!(s.abs_prec() <= pa.min(pb));
        // Multiplication: relative precision is the minimum of the inputs'.
        let m = xa.mul(&xb);
        if !m.is_zero() && !xa.is_zero() && !xb.is_zero() {
            prop_assert!(m.rel_prec() <= xa.rel_prec().min(xb.rel_prec()));
        }
        // Truncation composes: truncating twice equals truncating once.
        let t = s.truncate(3);
        prop_assert!(t.abs_prec() <= 3);
        prop_assert!(t.agrees_with(&s));
    }

    #[test]
    fn sqrt_and_log_are_consistent(
        p in small_prime(),
        n in 1i64..5000,
        prec in 5i64..12,
    ) {
        let x = Padic::from_i64(p, n, prec);
        if x.is_zero() || x.valuation() != 0 {
            return Ok(());
        }
        // sqrt of the square returns ± the original.
        let sq = x.mul(&x);
        if let Ok((r1, _)) = sq.sqrt_residues() {
            let y = sq.sqrt(r1).unwrap();
            prop_assert!(y.agrees_with(&x) || y.agrees_with(&x.neg()));
        }
        // log is insensitive to the Teichmuller part and kills roots of unity.
        let t = x.teichmuller().unwrap();
        let unit_part = x.div(&t).unwrap();
        prop_assert!(x.log().unwrap().agrees_with(&unit_part.log().unwrap()));
    }

    #[test]
    fn unramified_frobenius_generates_galois(
        n0 in -50i64..50,
        n1 in -50i64..50,
        prec in 4i64..10,
    ) {
        // Q_11(nu) with nu^3 = nu^2 + 2nu - 1, inert cubic.
        let ctx = UnramCtx::new(11, vec![BigInt::from(1), BigInt::from(-2), BigInt::from(-1)]);
        let x = UnramElem::from_int_coords(&ctx, &[BigInt::from(n0), BigInt::from(n1), BigInt::from(3)], prec);
        // Frobenius has order 3 and fixes norm and trace.
        let f3 = x.frobenius().frobenius().frobenius();
        prop_assert!(f3.agrees_with(&x));
        let nx = x.norm();
        let nf = x.frobenius().norm();
        prop_assert!(nx.agrees_with(&nf));
        let tx = x.trace();
        let tf = x.frobenius().trace();
        prop_assert!(tx.agrees_with(&tf));
    }
}

#[test]
fn display_matches_digit_convention() {
    // 4 + 2*5 + 4*5^2 with O(5^4).
    let x = Padic::from_i64(5, 4 + 2 * 5 + 4 * 25, 4);
    assert_eq!(format!("{}", x), "4 + 2*5 + 4*5^2 + O(5^4)");
    let y = Padic::from_i64(5, -1, 3);
    assert_eq!(format!("{}", y), "4 + 4*5 + 4*5^2 + O(5^3)");
}
