//! Dense matrices and sparse incremental elimination over Q(zeta_N).

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::CyclotomicScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    order: u32,
    rows: usize,
    cols: usize,
    data: Vec<CyclotomicScalar>,
}

impl Matrix {
    pub fn zeros(order: u32, rows: usize, cols: usize) -> Self {
        Matrix {
            order,
            rows,
            cols,
            data: vec![CyclotomicScalar::zero(order); rows * cols],
        }
    }

    pub fn identity(order: u32, n: usize) -> Self {
        let mut m = Self::zeros(order, n, n);
        for i in 0..n {
            m.set(i, i, CyclotomicScalar::one(order));
        }
        m
    }

    pub fn from_rows(order: u32, rows: Vec<Vec<CyclotomicScalar>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        if rows.iter().flatten().any(|x| x.order() != order) {
            return Err(LinalgError::Shape("entry from another field".into()));
        }
        Ok(Matrix {
            order,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_ints(order: u32, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| CyclotomicScalar::from_int(order, x)).collect())
            .collect();
        Self::from_rows(order, rows).expect("rectangular integer matrix")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(order: u32, rows: usize, columns: &[Vec<CyclotomicScalar>]) -> Self {
        let mut m = Self::zeros(order, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CyclotomicScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: CyclotomicScalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[CyclotomicScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<CyclotomicScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CyclotomicScalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.order, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Matrix {
            order: self.order,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(CyclotomicScalar::conj).collect(),
        }
    }

    pub fn scale(&self, c: &CyclotomicScalar) -> Self {
        Matrix {
            order: self.order,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            order: self.order,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            order: self.order,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.order, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[CyclotomicScalar]) -> Vec<CyclotomicScalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = CyclotomicScalar::zero(self.order);
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> CyclotomicScalar {
        let mut acc = CyclotomicScalar::zero(self.order);
        for i in 0..self.rows.min(self.cols) {
            acc += self.get(i, i);
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.order, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in 0..m.cols {
                let x = m.get(r, j) * &inv;
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let x = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<CyclotomicScalar>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![CyclotomicScalar::zero(self.order); self.cols];
                v[f] = CyclotomicScalar::one(self.order);
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f);
                }
                v
            })
            .collect()
    }

    /// Basis of the column space, taken from the pivot columns.
    pub fn column_space(&self) -> Vec<Vec<CyclotomicScalar>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.column(c)).collect()
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.order, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, CyclotomicScalar::one(self.order));
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        let mut inv = Self::zeros(self.order, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    pub fn det(&self) -> CyclotomicScalar {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = CyclotomicScalar::one(self.order);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return CyclotomicScalar::zero(self.order);
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) * &inv;
                for j in c..n {
                    let x = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, x);
                }
            }
        }
        det
    }

    /// Solves `self * x = b` for one solution, if any.
    pub fn solve(&self, b: &[CyclotomicScalar]) -> Option<Vec<CyclotomicScalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.order, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![CyclotomicScalar::zero(self.order); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    /// Block of rows `r0..r1` and columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut m = Self::zeros(self.order, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                m.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        m
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Sparse vector: strictly increasing indices with nonzero values.
pub type SparseVec = Vec<(usize, CyclotomicScalar)>;

/// Collapses an unordered list of contributions into a `SparseVec`.
pub fn sparse_from_terms(terms: impl IntoIterator<Item = (usize, CyclotomicScalar)>) -> SparseVec {
    let mut acc: BTreeMap<usize, CyclotomicScalar> = BTreeMap::new();
    for (i, x) in terms {
        if x.is_zero() {
            continue;
        }
        acc.entry(i)
            .and_modify(|y| *y += &x)
            .or_insert(x);
    }
    acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

/// `a - c * b` for sparse vectors.
fn sparse_axpy(a: &SparseVec, c: &CyclotomicScalar, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ai = a.get(i).map(|t| t.0);
        let bj = b.get(j).map(|t| t.0);
        match (ai, bj) {
            (Some(x), Some(y)) if x == y => {
                let v = &a[i].1 - &(c * &b[j].1);
                if !v.is_zero() {
                    out.push((x, v));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(a[i].clone());
                i += 1;
            }
            (Some(_), None) => {
                out.push(a[i].clone());
                i += 1;
            }
            (_, Some(y)) => {
                out.push((y, -(c * &b[j].1)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Incremental row echelon basis of a span of sparse vectors.
///
/// Columns are eliminated in increasing index order, so callers that want
/// some coordinates eliminated first should give them the smallest indices.
#[derive(Clone, Debug)]
pub struct Eliminator {
    order: u32,
    pivots: BTreeMap<usize, SparseVec>,
}

impl Eliminator {
    pub fn new(order: u32) -> Self {
        Eliminator {
            order,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the current basis.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut pos = 0;
        while pos < v.len() {
            let lead = v[pos].0;
            match self.pivots.get(&lead) {
                Some(row) => {
                    let c = v[pos].1.clone();
                    v = sparse_axpy(&v, &c, row);
                }
                None => pos += 1,
            }
        }
        v
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut v = v;
        loop {
            let Some((lead, c)) = v.first().cloned() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(row) => v = sparse_axpy(&v, &c, row),
                None => {
                    let inv = c.inv().expect("nonzero leading entry");
                    let row: SparseVec = v.into_iter().map(|(i, x)| (i, &x * &inv)).collect();
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Leading column of each basis row.
    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn basis(&self) -> impl Iterator<Item = &SparseVec> {
        self.pivots.values()
    }

    pub fn order(&self) -> u32 {
        self.order
    }
}

/// Rank of a family of sparse vectors.
pub fn sparse_rank(order: u32, vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Eliminator::new(order);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

pub fn dense_to_sparse(v: &[CyclotomicScalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sparse_to_dense(order: u32, len: usize, v: &SparseVec) -> Vec<CyclotomicScalar> {
    let mut out = vec![CyclotomicScalar::zero(order); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let a = Matrix::from_ints(1, &[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert_eq!(a.det(), CyclotomicScalar::one(1));
        let s = Matrix::from_ints(1, &[&[1, 2], &[2, 4]]);
        assert_eq!(s.inverse(), Err(LinalgError::Singular));
        assert!(s.det().is_zero());
    }

    #[test]
    fn kernel_and_rank() {
        let a = Matrix::from_ints(1, &[&[1, 1, 0], &[0, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(CyclotomicScalar::is_zero));
    }

    #[test]
    fn eliminator_tracks_span() {
        let one = CyclotomicScalar::one(1);
        let mut e = Eliminator::new(1);
        assert!(e.insert(vec![(0, one.clone()), (2, one.clone())]));
        assert!(e.insert(vec![(2, one.clone())]));
        assert!(!e.insert(vec![(0, one.clone())]));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(vec![(0, CyclotomicScalar::from_int(1, 3))]));
        assert!(!e.contains(vec![(1, one)]));
    }

    #[test]
    fn solve_consistent_system() {
        let a = Matrix::from_ints(1, &[&[1, 1], &[1, -1]]);
        let b = vec![CyclotomicScalar::from_int(1, 3), CyclotomicScalar::from_int(1, 1)];
        let x = a.solve(&b).unwrap();
        assert_eq!(x, vec![CyclotomicScalar::from_int(1, 2), CyclotomicScalar::from_int(1, 1)]);
    }
}
