//! Overconvergent lifts checked against two independent oracles: Riemann
//! sums of the attached measure computed directly from the classical
//! eigensymbol, and series expansions published for the rank one curves
//! at levels 61 and 73.

use std::sync::Arc;

use chabauty_arith::numfield::NfElem;
use chabauty_arith::padic::{padic_from_digits, Padic};
use chabauty_modsym::{
    decompose, mtt_series, overconvergent_lift, padic_l_series, plus_symbol_data,
    plus_symbol_sum, Cusp, EigenSymbol, ManinSymbolSpace, ModSymError,
    NewformDecomposition, OverconvergentSymbol,
};
use chabauty_modsym::oms::fundamental_discriminants;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

fn decomposition(n: u64) -> NewformDecomposition {
    decompose(Arc::new(ManinSymbolSpace::new(n)))
}

fn embed_rational(v: &NfElem, p: u64, prec: i64) -> Padic {
    Padic::from_rational(p, v.rational_part(), prec)
}

fn residue_mod_p(x: &Padic) -> u64 {
    let p = BigUint::from(x.prime());
    let r = x.residue() % p;
    r.to_string().parse().unwrap()
}

fn lift_61(num_moments: usize) -> (EigenSymbol, OverconvergentSymbol) {
    let dec = decomposition(61);
    let mut sym = dec.eigensymbol(0).unwrap();
    let root = Padic::zero(5, num_moments as i64);
    let oms = overconvergent_lift(&mut sym, 5, &root, num_moments).unwrap();
    (sym, oms)
}

#[test]
fn unit_root_satisfies_the_eigenvalue_quadratic() {
    let (mut sym, oms) = lift_61(6);
    let a5 = embed_rational(&sym.a_prime(5), 5, 6);
    let alpha = oms.alpha();
    assert_eq!(residue_mod_p(&alpha), residue_mod_p(&a5));
    let q = alpha
        .mul(&alpha)
        .sub(&alpha.mul(&a5))
        .add(&Padic::from_i64(5, 5, 6));
    assert!(q.is_zero(), "alpha^2 - a_p alpha + p = {q}");
    assert!(alpha.valuation() == 0);
}

#[test]
fn riemann_sums_of_the_measure_match_the_classical_symbol() {
    let m = 8usize;
    let (sym, oms) = lift_61(m);
    assert!(oms.eigen_slack() >= 0);
    let p = 5u64;
    let prec = m as i64;
    let alpha_inv = oms.alpha().inv().unwrap();

    let phi = |num: i64, den: i64| -> Padic {
        embed_rational(
            &sym.evaluate(&Cusp::new(num, den), &Cusp::infinity()),
            p,
            prec,
        )
    };

    for depth in 1..=3u32 {
        let den = p.pow(depth) as i64;
        let shallower = p.pow(depth - 1) as i64;
        let head = alpha_inv.pow(depth as i64).unwrap();
        let tail = alpha_inv.pow(depth as i64 + 1).unwrap();
        for a in 1..p.pow(depth) {
            if a % p == 0 {
                continue;
            }
            let oracle = head
                .mul(&phi(a as i64, den))
                .sub(&tail.mul(&phi(a as i64, shallower)));
            let got = oms.measure_value(a, depth);
            assert!(
                oracle.agrees_with(&got),
                "depth {depth}, disc {a}: oracle {oracle}, lift {got}"
            );
        }
    }

    for a in 1..p {
        let whole = oms.measure_value(a, 1);
        let mut pieces = Padic::zero(p, prec);
        for k in 0..p {
            pieces = pieces.add(&oms.measure_value(a + p * k, 2));
        }
        assert!(pieces.agrees_with(&whole), "splitting the disc {a} + pZ_p");

        let moments = oms.measure_moments(a);
        assert_eq!(moments.len(), m);
        assert!(moments[0].agrees_with(&whole));
        for (j, mom) in moments.iter().enumerate() {
            assert_eq!(mom.abs_prec(), (m - j) as i64);
        }

        let stabilized = oms.stabilized_value(&Cusp::new(a as i64, p as i64), &Cusp::infinity());
        let direct = phi(a as i64, p as i64).sub(&alpha_inv.mul(&phi(a as i64, 1)));
        assert!(stabilized.agrees_with(&direct));
        assert!(stabilized.agrees_with(&oms.alpha().mul(&whole)));
    }
}

#[test]
fn series_at_61_matches_the_real_period_normalization() {
    let dec = decomposition(61);
    let mut sym = dec.eigensymbol(0).unwrap();
    // The integral symbol is -2 times the symbol normalized by the real
    // period of 61.a1, so match conventions before lifting.
    let field = sym.field().clone();
    let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
    sym.rescale(&NfElem::from_rational(&field, half));

    let root = Padic::zero(5, 14);
    let oms = overconvergent_lift(&mut sym, 5, &root, 14).unwrap();
    let series = mtt_series(&oms, 2);

    let c0 = series.coeff(0);
    assert!(c0.is_zero(), "constant term of a rank one curve: {c0}");
    assert!(c0.abs_prec() >= 10);

    let c1 = padic_from_digits(5, &[1, 0, 2, 1, 1, 3, 0, 2], 0);
    let c2 = padic_from_digits(5, &[1, 4, 3, 2, 2, 1], 0);
    assert!(series.coeff(1).agrees_with(&c1), "T coefficient {}", series.coeff(1));
    assert!(series.coeff(2).agrees_with(&c2), "T^2 coefficient {}", series.coeff(2));
    assert!(series.coeff(1).abs_prec() >= 8);
    assert!(series.coeff(2).abs_prec() >= 6);
}

#[test]
fn series_at_73_matches_both_ordinary_embeddings() {
    let dec = decomposition(73);
    let sym = dec.eigensymbol(1).unwrap();
    let roots = sym.field().padic_roots(11, 12);
    assert_eq!(roots.len(), 2, "a_2 splits over Q_11");

    // Under the embedding with a_2 = 2 mod 11 the eigenvalue a_11 is
    // 6 mod 11; the conjugate embedding swaps the expansions.
    let golden = [
        (2u64, 6u64, [7u64, 7, 2, 9, 4]),
        (6, 2, [2, 5, 6, 3, 8]),
    ];
    for (t_res, alpha_res, digits) in golden {
        let root = roots
            .iter()
            .find(|r| residue_mod_p(r) == t_res)
            .expect("embedding root");
        let mut s = sym.clone();
        let series = padic_l_series(&mut s, 11, root, 12, 2).unwrap();
        assert_eq!(residue_mod_p(series.alpha()), alpha_res);
        assert!(series.coeff(0).is_zero(), "rank one at both embeddings");
        let want = padic_from_digits(11, &digits, 0);
        assert!(
            series.coeff(1).agrees_with(&want),
            "derivative at embedding {t_res}: {}",
            series.coeff(1)
        );
    }
}

#[test]
fn plus_sums_detect_analytic_rank() {
    assert_eq!(fundamental_discriminants(21), vec![5, 8, 12, 13, 17, 21]);

    let dec = decomposition(73);
    let sym = dec.eigensymbol(1).unwrap();
    let field = sym.field().clone();
    let s5 = plus_symbol_sum(&sym, 5);
    assert!(
        s5.sub(&NfElem::from_i64(&field, -4)).is_zero(),
        "twisted sum at discriminant 5"
    );
    let (d, v) = plus_symbol_data(&sym, 50).unwrap();
    assert_eq!(d, 5);
    assert!(v.sub(&s5).is_zero());

    // Rank one forms pair to zero against the trivial twist.
    let dec61 = decomposition(61);
    let sym61 = dec61.eigensymbol(0).unwrap();
    assert!(plus_symbol_sum(&sym61, 1).is_zero());
    assert!(plus_symbol_data(&sym61, 50).is_some());

    let dec37 = decomposition(37);
    assert!(plus_symbol_sum(&dec37.eigensymbol(0).unwrap(), 1).is_zero());
    assert!(!plus_symbol_sum(&dec37.eigensymbol(1).unwrap(), 1).is_zero());
}

#[test]
fn supersingular_embeddings_are_rejected() {
    let dec = decomposition(37);
    let mut sym = dec.eigensymbol(0).unwrap();
    let field = sym.field().clone();
    assert!(sym.a_prime(3).sub(&NfElem::from_i64(&field, -3)).is_zero());
    let root = Padic::zero(3, 8);
    match overconvergent_lift(&mut sym, 3, &root, 8) {
        Err(ModSymError::NotOrdinary { level, p }) => {
            assert_eq!((level, p), (37, 3));
        }
        Err(other) => panic!("expected the ordinarity error, got {other}"),
        Ok(_) => panic!("a supersingular stabilization must be refused"),
    }
}
