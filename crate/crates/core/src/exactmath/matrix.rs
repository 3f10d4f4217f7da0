//! Exact rational matrices: rank, kernels, inverses and span tests.
//!
//! The main elimination works on sparse rows and picks, within each column,
//! the candidate row with the fewest nonzeros (ties broken by pivot bit size).
//! Operator matrices from the finite element spaces are sparse, so this keeps
//! fill and coefficient growth small. A dense fraction-free (Bareiss) routine
//! is kept alongside as an independent integer-only route for rank and
//! determinant.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::{bit_size, lcm_of_denominators, ExactScalar};

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ExactScalar>,
}

type SparseRow = Vec<(usize, ExactScalar)>;

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ExactScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ExactScalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<ExactScalar>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| ExactScalar::from_integer(v.into())).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExactScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[ExactScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<ExactScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * c).collect() }
    }

    fn sparse_rows(&self) -> Vec<SparseRow> {
        (0..self.rows)
            .map(|i| self.row(i).iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect())
            .collect()
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ: {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        let b = other.sparse_rows();
        let mut out = ExactMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for (k, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, bv) in &b[k] {
                    let idx = i * out.cols + j;
                    out.data[idx] += a * bv;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[ExactScalar]) -> Vec<ExactScalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).fold(ExactScalar::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn hcat(parts: &[&ExactMatrix]) -> ExactMatrix {
        let rows = parts.first().map(|p| p.rows).unwrap_or(0);
        assert!(parts.iter().all(|p| p.rows == rows), "hcat row mismatch");
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = ExactMatrix::zeros(rows, cols);
        let mut off = 0;
        for p in parts {
            for i in 0..rows {
                for j in 0..p.cols {
                    out.set(i, off + j, p.get(i, j).clone());
                }
            }
            off += p.cols;
        }
        out
    }

    pub fn vcat(parts: &[&ExactMatrix]) -> ExactMatrix {
        let cols = parts.first().map(|p| p.cols).unwrap_or(0);
        assert!(parts.iter().all(|p| p.cols == cols), "vcat column mismatch");
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            data.extend(p.data.iter().cloned());
            rows += p.rows;
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> ExactMatrix {
        ExactMatrix::from_rows(idx.iter().map(|&i| self.row(i).to_vec()).collect()).with_cols_if_empty(self.cols)
    }

    pub fn select_columns(&self, idx: &[usize]) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out.set(i, k, self.get(i, j).clone());
            }
        }
        out
    }

    fn with_cols_if_empty(mut self, cols: usize) -> Self {
        if self.rows == 0 {
            self.cols = cols;
        }
        self
    }

    fn echelon(&self) -> Echelon {
        Echelon::compute(self.cols, self.sparse_rows())
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the right kernel; each vector is scaled to a primitive integer vector.
    pub fn nullspace(&self) -> Vec<Vec<ExactScalar>> {
        self.echelon().nullspace(self.cols)
    }

    /// Kernel basis as the columns of a `cols × nullity` matrix.
    pub fn nullspace_matrix(&self) -> ExactMatrix {
        ExactMatrix::from_columns(self.cols, &self.nullspace())
    }

    /// Kernel basis together with the free column of each basis vector. Basis
    /// vector `j` vanishes at every other free column, so coordinates of a
    /// kernel element are read off at the free columns.
    pub fn kernel(&self) -> Kernel {
        let e = self.echelon();
        let free = e.free_columns(self.cols);
        Kernel { basis: ExactMatrix::from_columns(self.cols, &e.nullspace(self.cols)), free }
    }

    /// Indices of a maximal set of linearly independent rows, chosen greedily from the top.
    pub fn independent_rows(&self) -> Vec<usize> {
        self.transpose().echelon().pivots.iter().map(|(c, _)| *c).collect()
    }

    /// Solves `self · X = rhs` when every column of `rhs` lies in the column
    /// space of `self` and the columns of `self` are independent.
    pub fn solve_in_span(&self, rhs: &ExactMatrix) -> Option<ExactMatrix> {
        assert_eq!(self.rows, rhs.rows);
        let rows = self.independent_rows();
        if rows.len() != self.cols {
            return None;
        }
        let x = self.select_rows(&rows).inverse()?.mul(&rhs.select_rows(&rows));
        (self.mul(&x) == *rhs).then_some(x)
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<ExactMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let aug = ExactMatrix::hcat(&[self, &ExactMatrix::identity(n)]);
        let mut rows: Vec<Vec<ExactScalar>> = (0..n).map(|i| aug.row(i).to_vec()).collect();
        for c in 0..n {
            let p = (c..n).filter(|&r| !rows[r][c].is_zero()).min_by_key(|&r| bit_size(&rows[r][c]))?;
            rows.swap(c, p);
            let inv = ExactScalar::one() / &rows[c][c];
            for v in rows[c].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            let pivot_row = rows[c].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == c || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v -= &f * pv;
                    }
                }
            }
        }
        Some(ExactMatrix::from_rows(rows.into_iter().map(|r| r[n..].to_vec()).collect()))
    }

    /// Solves `self · X = rhs` for square nonsingular `self`.
    pub fn solve(&self, rhs: &ExactMatrix) -> Option<ExactMatrix> {
        self.inverse().map(|inv| inv.mul(rhs))
    }

    /// Rank by fraction-free Gaussian elimination on integer-scaled rows.
    pub fn rank_fraction_free(&self) -> usize {
        bareiss(self.integer_rows()).0
    }

    /// Determinant by fraction-free elimination.
    pub fn determinant(&self) -> ExactScalar {
        assert_eq!(self.rows, self.cols);
        let scale =
            (0..self.rows).map(|i| ExactScalar::from_integer(lcm_of_denominators(self.row(i)))).fold(ExactScalar::one(), |a, b| a * b);
        let (rank, det) = bareiss(self.integer_rows());
        if rank < self.rows {
            return ExactScalar::zero();
        }
        ExactScalar::from_integer(det) / scale
    }

    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let l = lcm_of_denominators(self.row(i));
                self.row(i).iter().map(|v| (v * ExactScalar::from_integer(l.clone())).to_integer()).collect()
            })
            .collect()
    }

    /// Does the column space of `self` contain every column of `other`?
    pub fn column_span_contains(&self, other: &ExactMatrix) -> bool {
        ExactMatrix::hcat(&[self, other]).rank() == self.rank()
    }

    /// Do the two matrices have the same column space?
    pub fn same_column_span(&self, other: &ExactMatrix) -> bool {
        let ra = self.rank();
        let rb = other.rank();
        ra == rb && ExactMatrix::hcat(&[self, other]).rank() == ra
    }

    /// Does the row space of `self` contain the given row vector?
    pub fn row_span_contains(&self, row: &[ExactScalar]) -> bool {
        let extra = ExactMatrix::from_rows(vec![row.to_vec()]);
        ExactMatrix::vcat(&[self, &extra]).rank() == self.rank()
    }

    pub fn max_abs(&self) -> ExactScalar {
        self.data.iter().map(|v| v.abs()).max().unwrap_or_else(ExactScalar::zero)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| -v).collect() }
    }
}

struct Echelon {
    /// Pivot rows in the order they were chosen; pivot columns increase.
    pivots: Vec<(usize, SparseRow)>,
}

fn axpy(target: &SparseRow, factor: &ExactScalar, pivot: &SparseRow) -> SparseRow {
    // target - factor * pivot
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let ti = target.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let pj = pivot.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ti < pj {
            out.push(target[i].clone());
            i += 1;
        } else if pj < ti {
            out.push((pj, -(factor * &pivot[j].1)));
            j += 1;
        } else {
            let v = &target[i].1 - factor * &pivot[j].1;
            if !v.is_zero() {
                out.push((ti, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// A kernel basis (as columns) and the free column attached to each vector.
#[derive(Debug, Clone)]
pub struct Kernel {
    pub basis: ExactMatrix,
    pub free: Vec<usize>,
}

impl Kernel {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Coordinates of the columns of `v` in the kernel basis, `None` unless
    /// every column lies in the kernel span.
    pub fn coordinates(&self, v: &ExactMatrix) -> Option<ExactMatrix> {
        assert_eq!(v.rows(), self.basis.rows());
        let mut x = ExactMatrix::zeros(self.dim(), v.cols());
        for (j, &f) in self.free.iter().enumerate() {
            let scale = self.basis.get(f, j);
            for c in 0..v.cols() {
                let val = v.get(f, c);
                if !val.is_zero() {
                    x.set(j, c, val / scale);
                }
            }
        }
        (self.basis.mul(&x) == *v).then_some(x)
    }
}

impl Echelon {
    fn free_columns(&self, cols: usize) -> Vec<usize> {
        let mut is_pivot = vec![false; cols];
        for (c, _) in &self.pivots {
            is_pivot[*c] = true;
        }
        (0..cols).filter(|&c| !is_pivot[c]).collect()
    }

    fn compute(cols: usize, rows: Vec<SparseRow>) -> Self {
        let mut buckets: Vec<Vec<SparseRow>> = vec![Vec::new(); cols];
        for r in rows {
            if let Some(&(c, _)) = r.first() {
                buckets[c].push(r);
            }
        }
        let mut pivots = Vec::new();
        for c in 0..cols {
            let mut cand = std::mem::take(&mut buckets[c]);
            if cand.is_empty() {
                continue;
            }
            let best = (0..cand.len()).min_by_key(|&k| (cand[k].len(), bit_size(&cand[k][0].1))).expect("nonempty");
            let pivot = cand.swap_remove(best);
            for r in cand {
                let factor = &r[0].1 / &pivot[0].1;
                let reduced = axpy(&r, &factor, &pivot);
                if let Some(&(lead, _)) = reduced.first() {
                    debug_assert!(lead > c);
                    buckets[lead].push(reduced);
                }
            }
            pivots.push((c, pivot));
        }
        Echelon { pivots }
    }

    fn nullspace(&self, cols: usize) -> Vec<Vec<ExactScalar>> {
        let mut out = Vec::new();
        for f in self.free_columns(cols) {
            let mut x = vec![ExactScalar::zero(); cols];
            x[f] = ExactScalar::one();
            for (c, row) in self.pivots.iter().rev() {
                let mut acc = ExactScalar::zero();
                for (j, a) in &row[1..] {
                    if !x[*j].is_zero() {
                        acc += a * &x[*j];
                    }
                }
                if !acc.is_zero() {
                    x[*c] = -acc / &row[0].1;
                }
            }
            out.push(primitive(x));
        }
        out
    }
}

/// Rescales a rational vector to coprime integers with a positive leading entry.
pub fn primitive(v: Vec<ExactScalar>) -> Vec<ExactScalar> {
    let l = ExactScalar::from_integer(lcm_of_denominators(&v));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    let sign = ints.iter().find(|x| !x.is_zero()).map(|x| if x.is_negative() { -1 } else { 1 }).unwrap_or(1);
    let g = g * BigInt::from(sign);
    ints.into_iter().map(|x| ExactScalar::from_integer(x / &g)).collect()
}

/// Fraction-free elimination; returns the rank and, for full-rank square
/// input, the determinant of the integer matrix.
fn bareiss(mut m: Vec<Vec<BigInt>>) -> (usize, BigInt) {
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| m[i][c].bits()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    let det = if r == rows && rows == cols { sign * prev } else { BigInt::zero() };
    (r, det)
}
