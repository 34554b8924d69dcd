//! Compressed sparse row storage for complex operator matrices.
//!
//! Entries inside a row are kept sorted by column and exact zeros are never
//! stored, so two matrices built from the same triplets are bit-identical.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::par;

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

const ZERO: C64 = C64::new(0.0, 0.0);

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            row_ptr: vec![0; nrows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![C64::new(1.0, 0.0); dim])
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        Self::from_triplets(
            diag.len(),
            diag.len(),
            diag.iter().enumerate().map(|(i, &v)| (i, i, v)),
        )
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicates are
    /// summed in input order; entries that end up exactly zero are dropped.
    pub fn from_triplets<I>(nrows: usize, ncols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, C64)>,
    {
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r},{c}) out of bounds");
            rows[r].push((c, v));
        }
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            // stable sort keeps summation order deterministic
            row.sort_by_key(|&(c, _)| c);
            let mut iter = row.into_iter().peekable();
            while let Some((c, mut v)) = iter.next() {
                while let Some(&(c2, v2)) = iter.peek() {
                    if c2 != c {
                        break;
                    }
                    v += v2;
                    iter.next();
                }
                if v != ZERO {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        }
    }

    fn from_rows(nrows: usize, ncols: usize, rows: Vec<Vec<(usize, C64)>>) -> Self {
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        row_ptr.push(0);
        let nnz = rows.iter().map(Vec::len).sum();
        let mut col_idx = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        for row in rows {
            for (c, v) in row {
                col_idx.push(c);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    /// All stored entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.nrows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[span.clone()].binary_search(&c) {
            Ok(k) => self.values[span.start + k],
            Err(_) => ZERO,
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); self.ncols];
        // row-major traversal pushes columns in ascending order
        for (r, c, v) in self.triplets() {
            rows[c].push((r, v.conj()));
        }
        Self::from_rows(self.ncols, self.nrows, rows)
    }

    pub fn scale(&self, s: C64) -> Self {
        if s == ZERO {
            return Self::zeros(self.nrows, self.ncols);
        }
        let rows = (0..self.nrows)
            .map(|r| {
                self.row(r)
                    .map(|(c, v)| (c, v * s))
                    .filter(|&(_, v)| v != ZERO)
                    .collect()
            })
            .collect();
        Self::from_rows(self.nrows, self.ncols, rows)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// `alpha * self + beta * other`, merged row by row.
    pub fn lin_comb(&self, alpha: C64, other: &Self, beta: C64) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let rows = (0..self.nrows)
            .map(|r| {
                let mut out = Vec::new();
                let mut a = self.row(r).peekable();
                let mut b = other.row(r).peekable();
                loop {
                    let next = match (a.peek(), b.peek()) {
                        (None, None) => break,
                        (Some(&(ca, va)), None) => {
                            a.next();
                            (ca, alpha * va)
                        }
                        (None, Some(&(cb, vb))) => {
                            b.next();
                            (cb, beta * vb)
                        }
                        (Some(&(ca, va)), Some(&(cb, vb))) => {
                            if ca < cb {
                                a.next();
                                (ca, alpha * va)
                            } else if cb < ca {
                                b.next();
                                (cb, beta * vb)
                            } else {
                                a.next();
                                b.next();
                                (ca, alpha * va + beta * vb)
                            }
                        }
                    };
                    if next.1 != ZERO {
                        out.push(next);
                    }
                }
                out
            })
            .collect();
        Self::from_rows(self.nrows, self.ncols, rows)
    }

    /// Sparse product `self * rhs`, rows computed independently.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.ncols, rhs.nrows, "dimension mismatch in matmul");
        let ncols = rhs.ncols;
        let rows = par::map_range(self.nrows, |r| {
            let mut acc: Vec<C64> = Vec::new();
            let mut touched: Vec<usize> = Vec::new();
            let mut mark: Vec<bool> = Vec::new();
            for (k, a) in self.row(r) {
                for (c, b) in rhs.row(k) {
                    if mark.is_empty() {
                        acc = vec![ZERO; ncols];
                        mark = vec![false; ncols];
                    }
                    if !mark[c] {
                        mark[c] = true;
                        touched.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            touched.sort_unstable();
            touched
                .into_iter()
                .map(|c| (c, acc[c]))
                .filter(|&(_, v)| v != ZERO)
                .collect::<Vec<_>>()
        });
        Self::from_rows(self.nrows, ncols, rows)
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(self.ncols, x.len());
        (0..self.nrows)
            .map(|r| self.row(r).fold(ZERO, |s, (c, v)| s + v * x[c]))
            .collect()
    }

    /// `<x| self |y>` with `x` conjugated.
    pub fn expectation(&self, x: &[C64], y: &[C64]) -> C64 {
        let ay = self.matvec(y);
        x.iter().zip(&ay).fold(ZERO, |s, (a, b)| s + a.conj() * b)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other) - other.matmul(self)
    }

    /// Per-column sums of absolute values.
    pub fn column_abs_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.ncols];
        for (_, c, v) in self.triplets() {
            sums[c] += v.norm();
        }
        sums
    }

    /// Operator 1-norm (maximum absolute column sum).
    pub fn norm1(&self) -> f64 {
        self.column_abs_sums().into_iter().fold(0.0, f64::max)
    }

    /// 1-norm of `self` restricted to the columns where `mask` is true,
    /// i.e. the norm of `self * P` for the coordinate projector `P`.
    pub fn norm1_masked(&self, mask: &[bool]) -> f64 {
        assert_eq!(mask.len(), self.ncols);
        self.column_abs_sums()
            .into_iter()
            .zip(mask)
            .filter(|(_, &keep)| keep)
            .fold(0.0, |m, (s, _)| m.max(s))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Keeps only the entries for which `keep(row, col)` holds.
    pub fn filter<F: Fn(usize, usize) -> bool>(&self, keep: F) -> Self {
        let rows = (0..self.nrows)
            .map(|r| self.row(r).filter(|&(c, _)| keep(r, c)).collect())
            .collect();
        Self::from_rows(self.nrows, self.ncols, rows)
    }

    /// Dense copy of the sub-block selected by `rows` x `cols`.
    pub fn dense_block(&self, rows: &[usize], cols: &[usize]) -> DMatrix<C64> {
        let mut pos = vec![usize::MAX; self.ncols];
        for (j, &c) in cols.iter().enumerate() {
            pos[c] = j;
        }
        let mut out = DMatrix::from_element(rows.len(), cols.len(), ZERO);
        for (i, &r) in rows.iter().enumerate() {
            for (c, v) in self.row(r) {
                if pos[c] != usize::MAX {
                    out[(i, pos[c])] = v;
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let rows: Vec<usize> = (0..self.nrows).collect();
        let cols: Vec<usize> = (0..self.ncols).collect();
        self.dense_block(&rows, &cols)
    }

    /// Block-diagonal direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (r0, c0) = (self.nrows, self.ncols);
        Self::from_triplets(
            r0 + other.nrows,
            c0 + other.ncols,
            self.triplets()
                .chain(other.triplets().map(|(r, c, v)| (r + r0, c + c0, v))),
        )
    }

    /// Hermiticity defect `‖A − A†‖₁`.
    pub fn hermiticity_defect(&self) -> f64 {
        (self - &self.adjoint()).norm1()
    }
}

impl<'a> Add<&'a SparseMatrix> for &'a SparseMatrix {
    type Output = SparseMatrix;
    fn add(self, rhs: &SparseMatrix) -> SparseMatrix {
        self.lin_comb(C64::new(1.0, 0.0), rhs, C64::new(1.0, 0.0))
    }
}

impl<'a> Sub<&'a SparseMatrix> for &'a SparseMatrix {
    type Output = SparseMatrix;
    fn sub(self, rhs: &SparseMatrix) -> SparseMatrix {
        self.lin_comb(C64::new(1.0, 0.0), rhs, C64::new(-1.0, 0.0))
    }
}

impl Add for SparseMatrix {
    type Output = SparseMatrix;
    fn add(self, rhs: SparseMatrix) -> SparseMatrix {
        &self + &rhs
    }
}

impl Sub for SparseMatrix {
    type Output = SparseMatrix;
    fn sub(self, rhs: SparseMatrix) -> SparseMatrix {
        &self - &rhs
    }
}

impl<'a> Mul<&'a SparseMatrix> for &'a SparseMatrix {
    type Output = SparseMatrix;
    fn mul(self, rhs: &SparseMatrix) -> SparseMatrix {
        self.matmul(rhs)
    }
}

impl Mul for SparseMatrix {
    type Output = SparseMatrix;
    fn mul(self, rhs: SparseMatrix) -> SparseMatrix {
        self.matmul(&rhs)
    }
}

impl Mul<C64> for &SparseMatrix {
    type Output = SparseMatrix;
    fn mul(self, s: C64) -> SparseMatrix {
        self.scale(s)
    }
}

impl Mul<f64> for &SparseMatrix {
    type Output = SparseMatrix;
    fn mul(self, s: f64) -> SparseMatrix {
        self.scale_real(s)
    }
}

impl Neg for &SparseMatrix {
    type Output = SparseMatrix;
    fn neg(self) -> SparseMatrix {
        self.scale_real(-1.0)
    }
}
