//! Dense matrices over a field and exact elimination.
//!
//! Every elimination uses the same pivot rule: scan columns left to right and
//! take the first row (from the top of the unreduced block) with a nonzero
//! entry. Kernels and subspace bases are therefore reproducible.

use super::ring::Ring;
use crate::error::{KzpError, Result};

#[derive(Clone, Debug)]
pub struct Matrix<R: Ring> {
    ring: R,
    rows: usize,
    cols: usize,
    data: Vec<R::Elem>,
}

impl<R: Ring> PartialEq for Matrix<R> {
    fn eq(&self, o: &Self) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.data == o.data
    }
}

/// Result of row reduction.
#[derive(Clone, Debug)]
pub struct Rref<R: Ring> {
    pub matrix: Matrix<R>,
    pub pivots: Vec<usize>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(ring: R, rows: usize, cols: usize) -> Self {
        let data = vec![ring.zero(); rows * cols];
        Matrix { ring, rows, cols, data }
    }

    pub fn identity(ring: R, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.ring.one();
        }
        m
    }

    pub fn from_rows(ring: R, rows: Vec<Vec<R::Elem>>, cols: usize) -> Self {
        let nr = rows.len();
        let mut data = Vec::with_capacity(nr * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { ring, rows: nr, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(ring: R, cols: &[Vec<R::Elem>], nrows: usize) -> Self {
        let mut m = Self::zeros(ring, nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows);
            for (i, x) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = x.clone();
            }
        }
        m
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &R::Elem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<R::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<R::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<R::Elem>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ring.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.ring.is_zero(x))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(KzpError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let r = &self.ring;
        let mut out = Self::zeros(r.clone(), self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if r.is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    let mut acc = out.data[idx].clone();
                    r.mul_add_assign(&mut acc, a, o.get(k, j));
                    out.data[idx] = acc;
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.checked_mul(o).expect("matrix dimension mismatch")
    }

    pub fn mul_vec(&self, v: &[R::Elem]) -> Vec<R::Elem> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        let r = &self.ring;
        (0..self.rows)
            .map(|i| {
                let mut acc = r.zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !r.is_zero(a) && !r.is_zero(x) {
                        r.mul_add_assign(&mut acc, a, x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols);
        let data = self.data.iter().zip(&o.data).map(|(a, b)| self.ring.add(a, b)).collect();
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols);
        let data = self.data.iter().zip(&o.data).map(|(a, b)| self.ring.sub(a, b)).collect();
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let data = self.data.iter().map(|a| self.ring.mul(a, c)).collect();
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Rows selected by index, in order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let rows = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        Self::from_rows(self.ring.clone(), rows, self.cols)
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let cols: Vec<Vec<R::Elem>> = idx.iter().map(|&j| self.col(j)).collect();
        Self::from_cols(self.ring.clone(), &cols, self.rows)
    }

    /// Stack vertically.
    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix { ring: self.ring.clone(), rows: self.rows + o.rows, cols: self.cols, data }
    }

    /// Reduced row echelon form with the first-nonzero pivot rule.
    pub fn rref(&self) -> Rref<R> {
        let r = self.ring.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..m.cols {
            if prow == m.rows {
                break;
            }
            let Some(piv) = (prow..m.rows).find(|&i| !r.is_zero(m.get(i, c))) else { continue };
            if piv != prow {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, prow * m.cols + j);
                }
            }
            let inv = r.inv(m.get(prow, c)).expect("pivot must be a unit: ring is not a field");
            for j in c..m.cols {
                let v = r.mul(m.get(prow, j), &inv);
                m.set(prow, j, v);
            }
            for i in 0..m.rows {
                if i == prow {
                    continue;
                }
                let f = m.get(i, c).clone();
                if r.is_zero(&f) {
                    continue;
                }
                for j in c..m.cols {
                    let t = r.mul(&f, m.get(prow, j));
                    let v = r.sub(m.get(i, j), &t);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            prow += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Null space basis: one vector per free column, with that coordinate 1.
    pub fn kernel(&self) -> Vec<Vec<R::Elem>> {
        let Rref { matrix: m, pivots } = self.rref();
        let r = &self.ring;
        let mut is_pivot = vec![usize::MAX; self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            is_pivot[c] = row;
        }
        let mut out = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f] != usize::MAX {
                continue;
            }
            let mut v = vec![r.zero(); self.cols];
            v[f] = r.one();
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = r.neg(m.get(row, f));
            }
            out.push(v);
        }
        out
    }

    /// One solution x of self·x = b (free variables set to zero).
    pub fn solve(&self, b: &[R::Elem]) -> Option<Vec<R::Elem>> {
        assert_eq!(b.len(), self.rows);
        let r = &self.ring;
        let mut aug = Self::zeros(r.clone(), self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let Rref { matrix: m, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![r.zero(); self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            x[c] = m.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(KzpError::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let r = &self.ring;
        let mut aug = Self::zeros(r.clone(), n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, r.one());
        }
        let Rref { matrix: m, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(KzpError::Singular);
        }
        let mut out = Self::zeros(r.clone(), n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, m.get(i, n + j).clone());
            }
        }
        Ok(out)
    }

    pub fn det(&self) -> R::Elem {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let r = &self.ring;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = r.one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&i| !r.is_zero(m.get(i, c))) else { return r.zero() };
            if piv != c {
                for j in 0..n {
                    m.data.swap(piv * n + j, c * n + j);
                }
                det = r.neg(&det);
            }
            let pv = m.get(c, c).clone();
            det = r.mul(&det, &pv);
            let inv = r.inv(&pv).expect("pivot must be a unit: ring is not a field");
            for i in c + 1..n {
                let f = r.mul(m.get(i, c), &inv);
                if r.is_zero(&f) {
                    continue;
                }
                for j in c..n {
                    let t = r.mul(&f, m.get(c, j));
                    let v = r.sub(m.get(i, j), &t);
                    m.set(i, j, v);
                }
            }
        }
        det
    }
}

/// A subspace of R^d stored as an RREF row basis.
#[derive(Clone, Debug)]
pub struct Subspace<R: Ring> {
    ring: R,
    dim_ambient: usize,
    basis: Vec<Vec<R::Elem>>,
}

impl<R: Ring> Subspace<R> {
    pub fn span(ring: R, dim_ambient: usize, vecs: &[Vec<R::Elem>]) -> Self {
        if vecs.is_empty() {
            return Subspace { ring, dim_ambient, basis: Vec::new() };
        }
        let m = Matrix::from_rows(ring.clone(), vecs.to_vec(), dim_ambient);
        let Rref { matrix, pivots } = m.rref();
        let basis = (0..pivots.len()).map(|i| matrix.row(i).to_vec()).collect();
        Subspace { ring, dim_ambient, basis }
    }

    pub fn whole(ring: R, d: usize) -> Self {
        let id = Matrix::identity(ring.clone(), d);
        Subspace { ring, dim_ambient: d, basis: id.row_vecs() }
    }

    pub fn zero(ring: R, d: usize) -> Self {
        Subspace { ring, dim_ambient: d, basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim_ambient
    }

    pub fn basis(&self) -> &[Vec<R::Elem>] {
        &self.basis
    }

    pub fn contains(&self, v: &[R::Elem]) -> bool {
        let mut all = self.basis.clone();
        all.push(v.to_vec());
        Subspace::span(self.ring.clone(), self.dim_ambient, &all).dim() == self.dim()
    }

    pub fn contains_space(&self, o: &Self) -> bool {
        self.sum(o).dim() == self.dim()
    }

    pub fn sum(&self, o: &Self) -> Self {
        let mut all = self.basis.clone();
        all.extend(o.basis.iter().cloned());
        Subspace::span(self.ring.clone(), self.dim_ambient, &all)
    }

    pub fn equals(&self, o: &Self) -> bool {
        self.dim() == o.dim() && self.contains_space(o)
    }

    pub fn intersect(&self, o: &Self) -> Self {
        if self.dim() == 0 || o.dim() == 0 {
            return Subspace::zero(self.ring.clone(), self.dim_ambient);
        }
        // solve Σ x_i u_i = Σ y_j w_j via kernel of [U^T | -W^T]
        let r = &self.ring;
        let mut cols: Vec<Vec<R::Elem>> = self.basis.clone();
        cols.extend(o.basis.iter().map(|w| w.iter().map(|x| r.neg(x)).collect()));
        let m = Matrix::from_cols(r.clone(), &cols, self.dim_ambient);
        let vecs: Vec<Vec<R::Elem>> = m
            .kernel()
            .into_iter()
            .map(|k| {
                let mut v = vec![r.zero(); self.dim_ambient];
                for (i, u) in self.basis.iter().enumerate() {
                    for (t, x) in v.iter_mut().zip(u) {
                        r.mul_add_assign(t, &k[i], x);
                    }
                }
                v
            })
            .collect();
        Subspace::span(r.clone(), self.dim_ambient, &vecs)
    }

    /// Image under a linear map given as a matrix acting on column vectors.
    pub fn image(&self, m: &Matrix<R>) -> Self {
        let vecs: Vec<Vec<R::Elem>> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        Subspace::span(self.ring.clone(), m.rows(), &vecs)
    }

    /// Kernel of `m` restricted to this subspace.
    pub fn kernel_of(&self, m: &Matrix<R>) -> Self {
        if self.dim() == 0 {
            return Subspace::zero(self.ring.clone(), self.dim_ambient);
        }
        let r = &self.ring;
        let b = Matrix::from_cols(r.clone(), &self.basis, self.dim_ambient);
        let mb = m.mul(&b);
        let vecs: Vec<Vec<R::Elem>> = mb.kernel().into_iter().map(|k| b.mul_vec(&k)).collect();
        Subspace::span(r.clone(), self.dim_ambient, &vecs)
    }
}
