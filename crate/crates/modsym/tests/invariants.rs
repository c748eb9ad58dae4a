use chabauty_arith::linalg::Mat;
use chabauty_modsym::hecke::{coset_operator, hecke_matrix, star_matrix, up_cosets};
use chabauty_modsym::ManinSymbolSpace;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

const LEVELS: [u64; 10] = [37, 43, 61, 67, 73, 77, 85, 107, 121, 131];

fn prime_operator(space: &ManinSymbolSpace, p: u64) -> Mat<BigRational> {
    if space.level() % p == 0 {
        coset_operator(space, &up_cosets(p))
    } else {
        hecke_matrix(space, p)
    }
}

fn mats_equal(a: &Mat<BigRational>, b: &Mat<BigRational>) -> bool {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return false;
    }
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            if a.get(i, j) != b.get(i, j) {
                return false;
            }
        }
    }
    true
}

#[test]
fn hecke_operators_commute() {
    for n in LEVELS {
        let space = ManinSymbolSpace::new(n);
        let ops: Vec<Mat<BigRational>> = [2, 3, 5].iter().map(|&p| prime_operator(&space, p)).collect();
        for i in 0..ops.len() {
            for j in (i + 1)..ops.len() {
                let ab = ops[i].mul(&ops[j]);
                let ba = ops[j].mul(&ops[i]);
                assert!(
                    mats_equal(&ab, &ba),
                    "Hecke operators {} and {} do not commute at level {n}",
                    [2, 3, 5][i],
                    [2, 3, 5][j]
                );
            }
        }
    }
}

#[test]
fn star_is_an_involution_commuting_with_hecke() {
    let one = BigRational::from(BigInt::one());
    for n in LEVELS {
        let space = ManinSymbolSpace::new(n);
        let star = star_matrix(&space);
        let id = Mat::identity(star.nrows(), &one);
        assert!(
            mats_equal(&star.mul(&star), &id),
            "star squared is not the identity at level {n}"
        );
        for p in [2u64, 3, 5] {
            let t = prime_operator(&space, p);
            assert!(
                mats_equal(&star.mul(&t), &t.mul(&star)),
                "star does not commute with T_{p} at level {n}"
            );
        }
    }
}
