//! Dimensions, Sturm bounds, and weight-two bases for `Gamma_0(N)`.

use crate::eisenstein::{e2_level, weight2_char_eisenstein};
use crate::qexp::QExpansion;
use crate::ModformError;
use chabauty_arith::primes::{divisors_u64, factor_u64, kronecker};
use chabauty_modsym::newforms::{decompose, NewformDecomposition};
use chabauty_modsym::space::ManinSymbolSpace;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Index of `Gamma_0(n)` in the modular group.
pub fn index_gamma0(n: u64) -> u64 {
    let mut mu = n;
    for (p, _) in factor_u64(n) {
        mu = mu / p * (p + 1);
    }
    mu
}

/// Number of elliptic points of period 2 on `X_0(n)`.
pub fn nu2(n: u64) -> u64 {
    if n % 4 == 0 {
        return 0;
    }
    let mut count = 1;
    for (p, _) in factor_u64(n) {
        if p == 2 {
            continue;
        }
        count *= (1 + kronecker(-1, p as i64)) as u64;
    }
    count
}

/// Number of elliptic points of period 3 on `X_0(n)`.
pub fn nu3(n: u64) -> u64 {
    if n % 9 == 0 {
        return 0;
    }
    let mut count = 1;
    for (p, _) in factor_u64(n) {
        count *= (1 + kronecker(-3, p as i64)) as u64;
    }
    count
}

/// Number of cusps of `X_0(n)`.
pub fn nu_infinity(n: u64) -> u64 {
    divisors_u64(n)
        .into_iter()
        .map(|d| euler_phi(num_integer::gcd(d, n / d)))
        .sum()
}

fn euler_phi(n: u64) -> u64 {
    let mut phi = n;
    for (p, _) in factor_u64(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

/// Genus of `X_0(n)`.
pub fn genus(n: u64) -> u64 {
    let twelve_g = 12 + index_gamma0(n) - 3 * nu2(n) - 4 * nu3(n) - 6 * nu_infinity(n);
    assert_eq!(twelve_g % 12, 0);
    twelve_g / 12
}

/// Dimension of `M_k(Gamma_0(n))` for even `k >= 0`.
pub fn dim_modforms(n: u64, k: i64) -> usize {
    assert!(k >= 0 && k % 2 == 0, "weight must be a nonnegative even integer");
    let g = genus(n) as i64;
    match k {
        0 => 1,
        2 => (g + nu_infinity(n) as i64 - 1) as usize,
        _ => {
            let dim = (k - 1) * (g - 1)
                + (k / 4) * nu2(n) as i64
                + (k / 3) * nu3(n) as i64
                + (k / 2) * nu_infinity(n) as i64;
            dim as usize
        }
    }
}

/// Dimension of `S_k(Gamma_0(n))` for even `k >= 0`.
pub fn dim_cuspforms(n: u64, k: i64) -> usize {
    match k {
        0 => 0,
        2 => genus(n) as usize,
        _ => dim_modforms(n, k) - nu_infinity(n) as usize,
    }
}

/// Dimension of the Eisenstein subspace of `M_k(Gamma_0(n))`.
pub fn dim_eisenstein(n: u64, k: i64) -> usize {
    dim_modforms(n, k) - dim_cuspforms(n, k)
}

/// Sturm bound for `M_k(Gamma_0(n))`: forms agreeing through this
/// coefficient index are equal.
pub fn sturm_bound(n: u64, k: i64) -> usize {
    let mu = index_gamma0(n) as i64;
    ((k * mu + 11) / 12) as usize
}

static DECOMPOSITIONS: Lazy<Mutex<HashMap<u64, Arc<NewformDecomposition>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Shared newform decomposition of the level-`n` modular-symbol space.
pub fn decomposition(n: u64) -> Arc<NewformDecomposition> {
    let mut map = DECOMPOSITIONS.lock().unwrap();
    map.entry(n)
        .or_insert_with(|| Arc::new(decompose(Arc::new(ManinSymbolSpace::new(n)))))
        .clone()
}

/// Coordinate q-expansions of the newform orbit `k` at level `n`, one
/// series per power-basis coordinate of the Hecke field, each known to
/// `order`.
pub fn newform_coordinate_series(n: u64, k: usize, order: usize) -> Vec<QExpansion> {
    let dec = decomposition(n);
    let mut sym = dec.eigensymbol(k).expect("newform orbit index in range");
    let degree = sym.field().degree();
    let mut coords = vec![vec![BigRational::zero(); order + 1]; degree];
    for m in 1..=order as u64 {
        let a = sym.a_n(m);
        for (i, c) in a.coords().iter().enumerate() {
            coords[i][m as usize] = c.clone();
        }
    }
    coords
        .into_iter()
        .map(|c| QExpansion::new(n, 2, c))
        .collect()
}

/// Reduced row echelon form of a family of equal-weight series.
///
/// Pivot decisions use only coefficients `0..=sturm`; the returned rows
/// are full-length combinations of the inputs. Rows that vanish through
/// the Sturm bound are checked to vanish identically, which is the
/// consistency guarantee making the prefix elimination sound for genuine
/// modular forms.
pub fn rref_series(rows: &[QExpansion], sturm: usize) -> Vec<QExpansion> {
    if rows.is_empty() {
        return Vec::new();
    }
    let order = rows.iter().map(|r| r.order()).min().unwrap();
    assert!(order >= sturm, "series too short for the Sturm bound");
    let m = rows.len();
    let mut prefix: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.coeffs()[..=sturm].to_vec())
        .collect();
    let mut transform: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row = vec![BigRational::zero(); m];
            row[i] = BigRational::one();
            row
        })
        .collect();
    let mut rank = 0usize;
    for col in 0..=sturm {
        let Some(pivot) = (rank..m).find(|&r| !prefix[r][col].is_zero()) else {
            continue;
        };
        prefix.swap(rank, pivot);
        transform.swap(rank, pivot);
        let inv = prefix[rank][col].clone().recip();
        for c in prefix[rank].iter_mut() {
            *c *= &inv;
        }
        for c in transform[rank].iter_mut() {
            *c *= &inv;
        }
        for r in 0..m {
            if r == rank || prefix[r][col].is_zero() {
                continue;
            }
            let factor = prefix[r][col].clone();
            for j in 0..=sturm {
                let sub = &factor * &prefix[rank][j];
                prefix[r][j] -= sub;
            }
            for j in 0..m {
                let sub = &factor * &transform[rank][j];
                transform[r][j] -= sub;
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    let weight = rows[0].weight();
    let level = rows
        .iter()
        .fold(1u64, |acc, r| num_integer::lcm(acc, r.level()));
    let combine = |t: &[BigRational]| -> QExpansion {
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (j, c) in t.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, a) in rows[j].coeffs()[..=order].iter().enumerate() {
                if !a.is_zero() {
                    coeffs[k] += c * a;
                }
            }
        }
        QExpansion::new(level, weight, coeffs)
    };
    for t in transform[rank..].iter() {
        let tail = combine(t);
        assert!(
            tail.is_zero(),
            "dependent prefix with nonzero tail: inputs are not modular forms of the claimed weight"
        );
    }
    transform[..rank].iter().map(|t| combine(t)).collect()
}

fn eisenstein_weight2(n: u64, order: usize) -> Result<Vec<QExpansion>, ModformError> {
    let factors = factor_u64(n);
    let squarefree = factors.iter().all(|&(_, e)| e == 1);
    let mut out = Vec::new();
    if squarefree {
        for d in divisors_u64(n) {
            if d > 1 {
                out.push(e2_level(d, order));
            }
        }
    } else if factors.len() == 1 && factors[0].1 == 2 && factors[0].0 % 2 == 1 {
        let q = factors[0].0;
        out.push(e2_level(q, order));
        out.push(e2_level(n, order));
        out.extend(weight2_char_eisenstein(q, order)?);
    } else {
        return Err(ModformError::UnsupportedLevel(n));
    }
    Ok(out)
}

/// Cusp-form part of the weight-two space: coordinate series of every
/// newform orbit at every divisor level, pushed up by the degeneracy
/// maps `f(q) -> f(q^e)`.
pub fn weight2_cusp_spanning_set(n: u64, order: usize) -> Vec<QExpansion> {
    let mut out = Vec::new();
    for m in divisors_u64(n) {
        if genus(m) == 0 {
            continue;
        }
        let dec = decomposition(m);
        for k in 0..dec.num_newforms() {
            let series = newform_coordinate_series(m, k, order);
            for e in divisors_u64(n / m) {
                for s in &series {
                    out.push(s.embed(e).truncate(order).with_level(n));
                }
            }
        }
    }
    out
}

/// Echelonized basis of `M_2(Gamma_0(n))`, Eisenstein and cusp parts
/// together, each series known to `order`.
pub fn weight2_basis(n: u64, order: usize) -> Result<Vec<QExpansion>, ModformError> {
    let sturm = sturm_bound(n, 2);
    assert!(order >= sturm, "order {} below the Sturm bound {}", order, sturm);
    let mut rows = eisenstein_weight2(n, order)?;
    rows.extend(weight2_cusp_spanning_set(n, order));
    let basis = rref_series(&rows, sturm);
    let expected = dim_modforms(n, 2);
    if basis.len() != expected {
        return Err(ModformError::RankDeficient {
            weight: 2,
            achieved: basis.len(),
            needed: expected,
        });
    }
    Ok(basis)
}

/// Echelonized basis of the cusp forms of weight two.
pub fn weight2_cusp_basis(n: u64, order: usize) -> Vec<QExpansion> {
    let sturm = sturm_bound(n, 2);
    assert!(order >= sturm);
    let rows = weight2_cusp_spanning_set(n, order);
    let basis = rref_series(&rows, sturm);
    assert_eq!(basis.len(), dim_cuspforms(n, 2));
    basis
}

/// Echelonized basis of the Fricke-plus subspace of `S_2(Gamma_0(n))`
/// for prime `n`: the pullbacks of the forms on the Atkin-Lehner
/// quotient.
pub fn weight2_plus_cusp_basis(n: u64, order: usize) -> Vec<QExpansion> {
    assert!(factor_u64(n).len() == 1 && factor_u64(n)[0].1 == 1, "level must be prime");
    let dec = decomposition(n);
    let mut rows = Vec::new();
    for k in 0..dec.num_newforms() {
        let sym = dec.eigensymbol(k).expect("orbit in range");
        if sym.atkin_lehner(n) == 1 {
            rows.extend(newform_coordinate_series(n, k, order));
        }
    }
    rref_series(&rows, sturm_bound(n, 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_table() {
        for (n, g) in [
            (1, 0),
            (11, 1),
            (37, 2),
            (43, 3),
            (58, 6),
            (61, 4),
            (67, 5),
            (73, 5),
            (77, 7),
            (83, 7),
            (85, 7),
            (89, 7),
            (101, 8),
            (107, 9),
            (131, 11),
            (169, 8),
        ] {
            assert_eq!(genus(n), g, "genus of X_0({})", n);
        }
    }

    #[test]
    fn cusp_and_elliptic_counts() {
        assert_eq!(nu_infinity(1), 1);
        assert_eq!(nu_infinity(37), 2);
        assert_eq!(nu_infinity(85), 4);
        assert_eq!(nu_infinity(169), 14);
        assert_eq!(nu2(1), 1);
        assert_eq!(nu2(37), 2);
        assert_eq!(nu3(1), 1);
        assert_eq!(nu3(37), 2);
        assert_eq!(nu2(43), 0);
        assert_eq!(nu3(43), 2);
    }

    #[test]
    fn dimension_formula_spot_values() {
        assert_eq!(dim_modforms(1, 0), 1);
        assert_eq!(dim_modforms(1, 2), 0);
        assert_eq!(dim_modforms(1, 4), 1);
        assert_eq!(dim_modforms(1, 12), 2);
        assert_eq!(dim_cuspforms(1, 12), 1);
        assert_eq!(dim_modforms(37, 2), 3);
        assert_eq!(dim_modforms(37, 4), 11);
        assert_eq!(dim_modforms(37, 6), 17);
        assert_eq!(dim_modforms(43, 4), 12);
        assert_eq!(dim_modforms(77, 4), 26);
        assert_eq!(dim_cuspforms(77, 4), 22);
        assert_eq!(dim_modforms(85, 2), 10);
        assert_eq!(dim_modforms(85, 4), 30);
        assert_eq!(dim_modforms(169, 2), 21);
        assert_eq!(dim_eisenstein(169, 2), 13);
        assert_eq!(dim_modforms(169, 4), 53);
    }

    #[test]
    fn sturm_bound_examples() {
        for (n, b) in [
            (37u64, 7usize),
            (43, 8),
            (58, 15),
            (61, 11),
            (77, 16),
            (83, 14),
            (85, 18),
            (89, 15),
            (101, 17),
            (131, 22),
        ] {
            assert_eq!(sturm_bound(n, 2), b, "sturm bound at level {}", n);
        }
        assert_eq!(sturm_bound(1, 12), 1);
    }

    #[test]
    fn level_one_weight_two_space_is_empty() {
        assert_eq!(weight2_basis(1, 5).unwrap().len(), 0);
    }
}
