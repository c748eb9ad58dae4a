//! Exact linear algebra over a field, generic in the coefficient type.
//!
//! Two workhorses live here. `Mat` is a dense matrix with row reduction,
//! kernel, solve, and characteristic polynomial (Faddeev-LeVerrier), sized
//! for the small eigenspace computations this project needs (dimensions in
//! the tens). `SparseEchelon` is an incremental sparse row-echelon structure
//! for large homogeneous relation systems, where rows arrive one at a time
//! and most entries are zero.
//!
//! Coefficients implement [`FieldElem`], which uses exemplar-based
//! constructors (`f_zero`, `f_one` on `&self`) so that types carrying a
//! runtime context, like number field elements, can participate.

use crate::numfield::NfElem;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Field operations on elements that may carry a runtime context.
pub trait FieldElem: Clone {
    fn f_zero(&self) -> Self;
    fn f_one(&self) -> Self;
    fn f_add(&self, other: &Self) -> Self;
    fn f_sub(&self, other: &Self) -> Self;
    fn f_mul(&self, other: &Self) -> Self;
    fn f_neg(&self) -> Self;
    fn f_inv(&self) -> Self;
    fn f_is_zero(&self) -> bool;
    fn f_from_i64(&self, n: i64) -> Self;
}

impl FieldElem for BigRational {
    fn f_zero(&self) -> Self {
        BigRational::zero()
    }
    fn f_one(&self) -> Self {
        BigRational::one()
    }
    fn f_add(&self, other: &Self) -> Self {
        self + other
    }
    fn f_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn f_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn f_neg(&self) -> Self {
        -self
    }
    fn f_inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero rational");
        self.recip()
    }
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn f_from_i64(&self, n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
}

impl FieldElem for NfElem {
    fn f_zero(&self) -> Self {
        NfElem::zero(self.field())
    }
    fn f_one(&self) -> Self {
        NfElem::one(self.field())
    }
    fn f_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn f_sub(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn f_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn f_neg(&self) -> Self {
        self.neg()
    }
    fn f_inv(&self) -> Self {
        self.inv().expect("inverse of zero field element")
    }
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn f_from_i64(&self, n: i64) -> Self {
        NfElem::from_i64(self.field(), n)
    }
}

/// Dense matrix over a field.
#[derive(Clone, Debug)]
pub struct Mat<F> {
    nrows: usize,
    ncols: usize,
    data: Vec<F>,
}

impl<F: FieldElem> Mat<F> {
    pub fn new(nrows: usize, ncols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), nrows * ncols, "matrix data length mismatch");
        assert!(!data.is_empty(), "matrix needs at least one entry as exemplar");
        Mat { nrows, ncols, data }
    }

    pub fn zero(nrows: usize, ncols: usize, exemplar: &F) -> Self {
        Mat { nrows, ncols, data: vec![exemplar.f_zero(); nrows * ncols] }
    }

    pub fn identity(n: usize, exemplar: &F) -> Self {
        let mut m = Self::zero(n, n, exemplar);
        for i in 0..n {
            m.set(i, i, exemplar.f_one());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.ncols + j] = v;
    }

    fn exemplar(&self) -> &F {
        &self.data[0]
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.f_add(b))
            .collect();
        Mat { nrows: self.nrows, ncols: self.ncols, data }
    }

    pub fn scale(&self, s: &F) -> Self {
        let data = self.data.iter().map(|a| a.f_mul(s)).collect();
        Mat { nrows: self.nrows, ncols: self.ncols, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in matrix product");
        let ex = self.exemplar();
        let mut out = Self::zero(self.nrows, other.ncols, ex);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.get(i, k);
                if a.f_is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let b = other.get(k, j);
                    if b.f_is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).f_add(&a.f_mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.ncols, v.len());
        let ex = self.exemplar();
        (0..self.nrows)
            .map(|i| {
                let mut acc = ex.f_zero();
                for j in 0..self.ncols {
                    let a = self.get(i, j);
                    if !a.f_is_zero() && !v[j].f_is_zero() {
                        acc = acc.f_add(&a.f_mul(&v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let ex = self.exemplar();
        let mut out = Self::zero(self.ncols, self.nrows, ex);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> F {
        assert_eq!(self.nrows, self.ncols);
        let mut acc = self.exemplar().f_zero();
        for i in 0..self.nrows {
            acc = acc.f_add(self.get(i, i));
        }
        acc
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r >= self.nrows {
                break;
            }
            // Find a nonzero pivot in column c at or below row r.
            let mut pr = None;
            for i in r..self.nrows {
                if !self.get(i, c).f_is_zero() {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            self.swap_rows(r, pr);
            let inv = self.get(r, c).f_inv();
            for j in c..self.ncols {
                let v = self.get(r, j).f_mul(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.nrows {
                if i == r || self.get(i, c).f_is_zero() {
                    continue;
                }
                let factor = self.get(i, c).clone();
                for j in c..self.ncols {
                    let v = self.get(i, j).f_sub(&factor.f_mul(self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.ncols {
            self.data.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel {v : Av = 0}.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let ex = self.exemplar().clone();
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![ex.f_zero(); self.ncols];
            v[free] = ex.f_one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = m.get(r, free).f_neg();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of Ax = b, if consistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.nrows);
        let ex = self.exemplar().clone();
        // Augment with b, reduce, and read off.
        let mut aug = Mat::zero(self.nrows, self.ncols + 1, &ex);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.ncols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.ncols) {
            return None;
        }
        let mut x = vec![ex.f_zero(); self.ncols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.ncols).clone();
        }
        Some(x)
    }

    /// Characteristic polynomial det(xI − A), coefficients low degree first,
    /// monic of degree n. Faddeev-LeVerrier; requires characteristic zero.
    pub fn charpoly(&self) -> Vec<F> {
        assert_eq!(self.nrows, self.ncols, "charpoly requires a square matrix");
        let n = self.nrows;
        let ex = self.exemplar();
        let mut coeffs = vec![ex.f_zero(); n + 1];
        coeffs[n] = ex.f_one();
        let mut m = Mat::identity(n, ex);
        for k in 1..=n {
            m = self.mul(&m);
            let c = m.trace().f_mul(&ex.f_from_i64(k as i64).f_inv()).f_neg();
            for i in 0..n {
                let v = m.get(i, i).f_add(&c);
                m.set(i, i, v);
            }
            coeffs[n - k] = c;
        }
        coeffs
    }
}

/// Incremental sparse row echelon over a field.
///
/// Rows are sparse column-to-coefficient maps. Each accepted row is stored
/// normalized with leading coefficient 1 at its pivot column. After all rows
/// are added, call [`SparseEchelon::back_substitute`] once; `reduce` then
/// expresses any vector in terms of the non-pivot (free) columns.
pub struct SparseEchelon<F> {
    pivots: BTreeMap<usize, BTreeMap<usize, F>>,
    reduced: bool,
}

impl<F: FieldElem> Default for SparseEchelon<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: FieldElem> SparseEchelon<F> {
    pub fn new() -> Self {
        SparseEchelon { pivots: BTreeMap::new(), reduced: false }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    fn reduce_once(&self, row: &mut BTreeMap<usize, F>) -> bool {
        // Eliminate the smallest column that has a pivot; returns true if
        // anything changed.
        let hit = row
            .iter()
            .find(|(c, v)| !v.f_is_zero() && self.pivots.contains_key(c))
            .map(|(c, v)| (*c, v.clone()));
        let Some((c, coeff)) = hit else { return false };
        let prow = &self.pivots[&c];
        for (pc, pv) in prow {
            let delta = coeff.f_mul(pv);
            match row.get_mut(pc) {
                Some(e) => {
                    *e = e.f_sub(&delta);
                    if e.f_is_zero() {
                        row.remove(pc);
                    }
                }
                None => {
                    row.insert(*pc, delta.f_neg());
                }
            }
        }
        true
    }

    /// Fully reduce a row against the current pivots.
    pub fn reduce(&self, mut row: BTreeMap<usize, F>) -> BTreeMap<usize, F> {
        row.retain(|_, v| !v.f_is_zero());
        while self.reduce_once(&mut row) {}
        row
    }

    /// Add a relation row. Returns the new pivot column if the row was
    /// independent, None if it reduced to zero.
    pub fn add_row(&mut self, row: BTreeMap<usize, F>) -> Option<usize> {
        self.reduced = false;
        let mut row = self.reduce(row);
        let (&lead, _) = row.iter().next()?;
        let inv = row[&lead].f_inv();
        for v in row.values_mut() {
            *v = v.f_mul(&inv);
        }
        self.pivots.insert(lead, row);
        Some(lead)
    }

    /// Reduce every pivot row against all other pivots, so that subsequent
    /// `reduce` calls express vectors purely in free columns.
    pub fn back_substitute(&mut self) {
        let cols: Vec<usize> = self.pivots.keys().copied().collect();
        // Work from the largest pivot down so each row needs one pass.
        for &c in cols.iter().rev() {
            let row = self.pivots.remove(&c).unwrap();
            let row = self.reduce_with_pivot_kept(row, c);
            self.pivots.insert(c, row);
        }
        self.reduced = true;
    }

    fn reduce_with_pivot_kept(&self, mut row: BTreeMap<usize, F>, keep: usize) -> BTreeMap<usize, F> {
        loop {
            let hit = row
                .iter()
                .find(|(c, v)| **c != keep && !v.f_is_zero() && self.pivots.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((c, coeff)) = hit else { break };
            let prow = self.pivots[&c].clone();
            for (pc, pv) in &prow {
                let delta = coeff.f_mul(pv);
                match row.get_mut(pc) {
                    Some(e) => {
                        *e = e.f_sub(&delta);
                        if e.f_is_zero() {
                            row.remove(pc);
                        }
                    }
                    None => {
                        row.insert(*pc, delta.f_neg());
                    }
                }
            }
        }
        row
    }

    pub fn is_back_substituted(&self) -> bool {
        self.reduced
    }

    /// Express unit vector e_col in free columns: returns the sparse
    /// combination, or just {col: 1} if col is free. Requires
    /// back_substitute to have run.
    pub fn express(&self, col: usize, exemplar: &F) -> BTreeMap<usize, F> {
        assert!(self.reduced, "call back_substitute before express");
        let mut row = BTreeMap::new();
        row.insert(col, exemplar.f_one());
        self.reduce(row)
    }
}
