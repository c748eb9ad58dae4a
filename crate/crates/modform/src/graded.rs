//! Graded-ring presentations of `M_*(Gamma_0(N))`: generator discovery
//! in weight at most six, per-weight monomial bases, and exact
//! expression of forms in monomial coordinates.

use crate::eisenstein::{e4, e6, rankin_cohen1, serre_derivative};
use crate::qexp::QExpansion;
use crate::spaces::{dim_modforms, sturm_bound, weight2_basis};
use crate::ModformError;
use chabauty_arith::primes::divisors_u64;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;

/// How a ring generator was produced. Downstream consumers use this to
/// attach a value at a CM point to each generator: echelon basis
/// elements and level-one Eisenstein embeddings get recognized values,
/// while Serre derivatives and Rankin-Cohen brackets reduce to values
/// and Shimura-Maass derivatives of earlier generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenSource {
    /// Element `i` of the echelonized weight-two basis.
    Weight2(usize),
    /// Serre derivative of generator `k`.
    Theta(usize),
    /// First Rankin-Cohen bracket of generators `i` and `j`.
    RankinCohen(usize, usize),
    /// `E_weight(q^d)` for `d` dividing the level.
    EisensteinEmbed { weight: i64, d: u64 },
}

/// A named generator of the graded ring.
#[derive(Clone)]
pub struct Generator {
    pub name: String,
    pub weight: i64,
    pub source: GenSource,
    pub series: QExpansion,
}

/// A form written as a rational combination of generator monomials.
#[derive(Clone, Debug)]
pub struct GradedPoly {
    pub weight: i64,
    /// Terms `(coefficient, exponent vector over the ring generators)`.
    pub terms: Vec<(BigRational, Vec<u32>)>,
}

impl GradedPoly {
    /// Evaluates the polynomial through a ring homomorphism given by
    /// the images of the generators.
    pub fn eval<R: Clone>(
        &self,
        gen_values: &[R],
        one: &R,
        add: impl Fn(&R, &R) -> R,
        mul: impl Fn(&R, &R) -> R,
        scale: impl Fn(&BigRational, &R) -> R,
    ) -> R {
        let mut acc: Option<R> = None;
        for (c, expo) in &self.terms {
            let mut m = one.clone();
            for (i, &e) in expo.iter().enumerate() {
                for _ in 0..e {
                    m = mul(&m, &gen_values[i]);
                }
            }
            let term = scale(c, &m);
            acc = Some(match acc {
                None => term,
                Some(a) => add(&a, &term),
            });
        }
        acc.unwrap_or_else(|| scale(&BigRational::zero(), one))
    }
}

/// All exponent vectors over the given generator weights with total
/// weight `w`, first exponent largest first. With the first generator
/// as an anchor this enumerates anchor-heavy monomials before
/// anchor-free ones.
pub fn monomials_of_weight(weights: &[i64], w: i64) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; weights.len()];
    descend(weights, 0, w, &mut current, &mut out);
    out
}

fn descend(weights: &[i64], idx: usize, remaining: i64, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    if idx >= weights.len() {
        return;
    }
    let max_e = remaining / weights[idx];
    for e in (0..=max_e).rev() {
        current[idx] = e as u32;
        descend(weights, idx + 1, remaining - e * weights[idx], current, out);
    }
    current[idx] = 0;
}

/// Incremental reduced echelon over the first `ncols` series
/// coefficients, remembering how each echelon row combines the inserted
/// inputs.
struct PrefixEchelon {
    ncols: usize,
    rows: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
    /// `rows[r] = sum combos[r][k] * input_k` over accepted inputs,
    /// keyed by the caller's tags.
    combos: Vec<BTreeMap<usize, BigRational>>,
}

enum Inserted {
    Independent,
    Dependent(BTreeMap<usize, BigRational>),
}

impl PrefixEchelon {
    fn new(ncols: usize) -> Self {
        PrefixEchelon {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `prefix` against the echelon. Returns the residual row
    /// and the combination of accepted inputs that was subtracted.
    fn reduce(&self, prefix: &[BigRational]) -> (Vec<BigRational>, BTreeMap<usize, BigRational>) {
        let mut v = prefix.to_vec();
        let mut combo: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (r, row) in self.rows.iter().enumerate() {
            let c = v[self.pivots[r]].clone();
            if c.is_zero() {
                continue;
            }
            for (j, w) in row.iter().enumerate() {
                if !w.is_zero() {
                    let sub = &c * w;
                    v[j] -= sub;
                }
            }
            for (k, w) in &self.combos[r] {
                let add = &c * w;
                let entry = combo.entry(*k).or_insert_with(BigRational::zero);
                *entry += add;
                if entry.is_zero() {
                    combo.remove(k);
                }
            }
        }
        (v, combo)
    }

    /// Inserts input `tag` with the given coefficient prefix.
    fn insert(&mut self, tag: usize, prefix: &[BigRational]) -> Inserted {
        assert_eq!(prefix.len(), self.ncols);
        let (mut v, combo) = self.reduce(prefix);
        let Some(pivot) = v.iter().position(|c| !c.is_zero()) else {
            return Inserted::Dependent(combo);
        };
        let inv = v[pivot].clone().recip();
        for c in v.iter_mut() {
            *c *= &inv;
        }
        let mut new_combo: BTreeMap<usize, BigRational> = BTreeMap::new();
        new_combo.insert(tag, inv.clone());
        for (k, w) in combo {
            let entry = -(&w * &inv);
            if !entry.is_zero() {
                new_combo.insert(k, entry);
            }
        }
        // Eliminate the new pivot column from the existing rows.
        for r in 0..self.rows.len() {
            let c = self.rows[r][pivot].clone();
            if c.is_zero() {
                continue;
            }
            for j in 0..self.ncols {
                if !v[j].is_zero() {
                    let sub = &c * &v[j];
                    self.rows[r][j] -= sub;
                }
            }
            for (k, w) in &new_combo {
                let sub = &c * w;
                let entry = self.combos[r].entry(*k).or_insert_with(BigRational::zero);
                *entry -= sub;
                if entry.is_zero() {
                    let key = *k;
                    self.combos[r].remove(&key);
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(pivot);
        self.combos.push(new_combo);
        Inserted::Independent
    }
}

/// A basis of `M_w` made of generator monomials, with exact expression
/// of arbitrary forms.
pub struct WeightBasis {
    weight: i64,
    sturm: usize,
    monomials: Vec<Vec<u32>>,
    series: Vec<QExpansion>,
    echelon: PrefixEchelon,
}

impl WeightBasis {
    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    /// Exponent vectors of the selected monomial basis.
    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    /// Full series of the selected monomials, in the same order.
    pub fn series(&self) -> &[QExpansion] {
        &self.series
    }

    /// Exact coordinates of `f` over the monomial basis. The candidate
    /// expansion found on the Sturm prefix is verified against every
    /// known coefficient of `f`.
    pub fn express(&self, f: &QExpansion) -> Result<Vec<BigRational>, ModformError> {
        assert_eq!(f.weight(), self.weight, "weight mismatch in express");
        f.require_order(self.sturm)?;
        let (residual, combo) = self.echelon.reduce(&f.coeffs()[..=self.sturm]);
        if let Some(j) = residual.iter().position(|c| !c.is_zero()) {
            return Err(ModformError::NotInSpan {
                weight: self.weight,
                residual_from: j,
            });
        }
        let mut coords = vec![BigRational::zero(); self.monomials.len()];
        for (k, c) in combo {
            coords[k] = c;
        }
        let check_to = f.order().min(self.series[0].order());
        for n in 0..=check_to {
            let mut acc = BigRational::zero();
            for (k, c) in coords.iter().enumerate() {
                if !c.is_zero() {
                    acc += c * self.series[k].coeff(n);
                }
            }
            if &acc != f.coeff(n) {
                return Err(ModformError::NotInSpan {
                    weight: self.weight,
                    residual_from: n,
                });
            }
        }
        Ok(coords)
    }
}

/// A generating presentation of the even-weight graded ring.
pub struct GradedRing {
    level: u64,
    order: usize,
    gens: Vec<Generator>,
    bases: BTreeMap<i64, WeightBasis>,
}

impl GradedRing {
    /// Builds the presentation: the echelonized weight-two basis seeds
    /// the generator list, Serre derivatives, Eisenstein embeddings, and
    /// Rankin-Cohen brackets complete it in weights four and six, and
    /// monomial bases are then constructed and dimension-checked for
    /// every even weight up to `verify_to`.
    pub fn new(level: u64, order: usize, verify_to: i64) -> Result<Self, ModformError> {
        assert!(verify_to >= 6, "presentations are generated in weight at most six");
        let top_sturm = sturm_bound(level, verify_to);
        assert!(
            order >= top_sturm,
            "order {} below the weight-{} Sturm bound {}",
            order,
            verify_to,
            top_sturm
        );
        let w2 = weight2_basis(level, order)?;
        let mut gens: Vec<Generator> = w2
            .iter()
            .enumerate()
            .map(|(i, series)| Generator {
                name: format!("b{}", i),
                weight: 2,
                source: GenSource::Weight2(i),
                series: series.clone(),
            })
            .collect();
        for target in [4i64, 6] {
            Self::complete_weight(level, order, target, &mut gens)?;
        }
        let mut ring = GradedRing {
            level,
            order,
            gens,
            bases: BTreeMap::new(),
        };
        let mut w = 2;
        while w <= verify_to {
            let basis = ring.build_basis(w)?;
            ring.bases.insert(w, basis);
            w += 2;
        }
        Ok(ring)
    }

    /// The default presentation, dimension-verified through weight 12.
    pub fn standard(level: u64, order: usize) -> Result<Self, ModformError> {
        GradedRing::new(level, order, 12)
    }

    fn complete_weight(
        level: u64,
        order: usize,
        target: i64,
        gens: &mut Vec<Generator>,
    ) -> Result<(), ModformError> {
        let dim = dim_modforms(level, target);
        let sturm = sturm_bound(level, target);
        let mut ech = PrefixEchelon::new(sturm + 1);
        let weights: Vec<i64> = gens.iter().map(|g| g.weight).collect();
        for expo in monomials_of_weight(&weights, target) {
            if ech.rank() == dim {
                return Ok(());
            }
            let series = monomial_series(gens, &expo, order);
            ech.insert(0, &series.coeffs()[..=sturm]);
        }
        let mut pool: Vec<(String, GenSource, QExpansion)> = Vec::new();
        if target == 4 || target == 6 {
            for d in divisors_u64(level) {
                let base = if target == 4 { e4(order) } else { e6(order) };
                let series = if d == 1 {
                    base
                } else {
                    base.embed(d).truncate(order)
                };
                let name = if d == 1 {
                    format!("E{}", target)
                } else {
                    format!("E{}|{}", target, d)
                };
                pool.push((
                    name,
                    GenSource::EisensteinEmbed { weight: target, d },
                    series.with_level(level),
                ));
            }
        }
        for (k, g) in gens.iter().enumerate() {
            if g.weight == target - 2 {
                pool.push((
                    format!("theta({})", g.name),
                    GenSource::Theta(k),
                    serre_derivative(&g.series).truncate(order),
                ));
            }
        }
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if gens[i].weight + gens[j].weight + 2 == target {
                    pool.push((
                        format!("rc1({},{})", gens[i].name, gens[j].name),
                        GenSource::RankinCohen(i, j),
                        rankin_cohen1(&gens[i].series, &gens[j].series).truncate(order),
                    ));
                }
            }
        }
        for (name, source, series) in pool {
            if ech.rank() == dim {
                break;
            }
            if let Inserted::Independent = ech.insert(0, &series.coeffs()[..=sturm]) {
                gens.push(Generator {
                    name,
                    weight: target,
                    source,
                    series,
                });
            }
        }
        if ech.rank() != dim {
            return Err(ModformError::RankDeficient {
                weight: target,
                achieved: ech.rank(),
                needed: dim,
            });
        }
        Ok(())
    }

    fn build_basis(&self, w: i64) -> Result<WeightBasis, ModformError> {
        let dim = dim_modforms(self.level, w);
        let sturm = sturm_bound(self.level, w);
        let weights: Vec<i64> = self.gens.iter().map(|g| g.weight).collect();
        let mut ech = PrefixEchelon::new(sturm + 1);
        let mut monomials = Vec::new();
        let mut series_list = Vec::new();
        for expo in monomials_of_weight(&weights, w) {
            if ech.rank() == dim {
                break;
            }
            let series = monomial_series(&self.gens, &expo, self.order);
            let tag = monomials.len();
            if let Inserted::Independent = ech.insert(tag, &series.coeffs()[..=sturm]) {
                monomials.push(expo);
                series_list.push(series);
            }
        }
        if ech.rank() != dim {
            return Err(ModformError::RankDeficient {
                weight: w,
                achieved: ech.rank(),
                needed: dim,
            });
        }
        Ok(WeightBasis {
            weight: w,
            sturm,
            monomials,
            series: series_list,
            echelon: ech,
        })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    /// The monomial basis at an even weight covered by the presentation.
    pub fn basis(&self, w: i64) -> Option<&WeightBasis> {
        self.bases.get(&w)
    }

    /// Expresses `f` as a polynomial in the generators.
    pub fn express(&self, f: &QExpansion) -> Result<GradedPoly, ModformError> {
        let basis = self
            .bases
            .get(&f.weight())
            .unwrap_or_else(|| panic!("no basis stored for weight {}", f.weight()));
        let coords = basis.express(f)?;
        let terms = coords
            .into_iter()
            .zip(basis.monomials())
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, e)| (c, e.clone()))
            .collect();
        Ok(GradedPoly {
            weight: f.weight(),
            terms,
        })
    }
}

/// Product series of a generator monomial, truncated to `order`.
pub fn monomial_series(gens: &[Generator], expo: &[u32], order: usize) -> QExpansion {
    let level = gens
        .first()
        .map(|g| g.series.level())
        .unwrap_or(1);
    let mut acc = QExpansion::constant(level, num_traits::One::one(), order);
    let mut weight = 0;
    for (g, &e) in gens.iter().zip(expo) {
        for _ in 0..e {
            acc = acc.mul(&g.series);
            if acc.order() > order {
                acc = acc.truncate(order);
            }
            weight += g.weight;
        }
    }
    acc.with_weight(weight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::big;

    #[test]
    fn monomial_enumeration_is_anchor_heavy() {
        let monos = monomials_of_weight(&[2, 2, 4], 4);
        assert_eq!(monos, vec![
            vec![2, 0, 0],
            vec![1, 1, 0],
            vec![0, 2, 0],
            vec![0, 0, 1],
        ]);
    }

    #[test]
    fn level_one_ring_is_generated_by_e4_and_e6() {
        let ring = GradedRing::standard(1, 16).unwrap();
        let names: Vec<&str> = ring.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, vec!["E4", "E6"]);
        assert_eq!(ring.basis(12).unwrap().dim(), 2);
        let delta = {
            let e4 = crate::eisenstein::e4(16);
            let e6 = crate::eisenstein::e6(16);
            e4.pow(3)
                .sub(&e6.pow(2))
                .scale(&BigRational::new(big(1), big(1728)))
        };
        let poly = ring.express(&delta).unwrap();
        assert_eq!(poly.terms.len(), 2);
        for (c, e) in &poly.terms {
            if e == &vec![3, 0] {
                assert_eq!(*c, BigRational::new(big(1), big(1728)));
            } else {
                assert_eq!(e, &vec![0, 2]);
                assert_eq!(*c, BigRational::new(big(-1), big(1728)));
            }
        }
    }
}
