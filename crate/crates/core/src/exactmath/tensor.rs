//! Scalar, vector and matrix fields with polynomial entries, and the
//! differential/algebraic operators of the elasticity diagrams.
//!
//! Component conventions (2D):
//! - `curl φ = (-∂₂φ, ∂₁φ)`; on a vector field, column `c` of `curl u` is `curl u_c`.
//! - `rot u = ∂₁u₂ - ∂₂u₁`; on a matrix field, entry `c` of `rot M` is the rot of column `c`.
//! - `grad u` of a vector field has entries `(grad u)_{ij} = ∂_i u_j`, so columns are
//!   component gradients and `rot ∘ grad = 0`.
//! - `div M` of a matrix field is taken column-wise: `(div M)_c = Σ_j ∂_j M_{jc}`.
//! - `mskw(s) = [[0, s], [-s, 0]]`, `sskw(M) = (M₁₂ - M₂₁)/2`.
//!
//! With these choices `rot skw u = -grad sskw u` and `-2 sskw(curl u) = div u`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::poly::MultiPoly;
use super::scalar::{ratio, ExactScalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape {
    pub rows: usize,
    pub cols: usize,
}

impl Shape {
    pub const SCALAR: Shape = Shape { rows: 1, cols: 1 };

    pub fn vector(n: usize) -> Self {
        Shape { rows: n, cols: 1 }
    }

    pub fn matrix(n: usize) -> Self {
        Shape { rows: n, cols: n }
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffOp {
    Grad,
    Curl,
    Rot,
    Div,
    Def,
    Sym,
    Skw,
    Mskw,
    Sskw,
    Hess,
    Inc3d,
    Transpose,
}

impl DiffOp {
    pub const ALL: [DiffOp; 12] = [
        DiffOp::Grad,
        DiffOp::Curl,
        DiffOp::Rot,
        DiffOp::Div,
        DiffOp::Def,
        DiffOp::Sym,
        DiffOp::Skw,
        DiffOp::Mskw,
        DiffOp::Sskw,
        DiffOp::Hess,
        DiffOp::Inc3d,
        DiffOp::Transpose,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            DiffOp::Grad => "grad",
            DiffOp::Curl => "curl",
            DiffOp::Rot => "rot",
            DiffOp::Div => "div",
            DiffOp::Def => "def",
            DiffOp::Sym => "sym",
            DiffOp::Skw => "skw",
            DiffOp::Mskw => "mskw",
            DiffOp::Sskw => "sskw",
            DiffOp::Hess => "hess",
            DiffOp::Inc3d => "inc_3d",
            DiffOp::Transpose => "transpose",
        }
    }

    /// Number of derivatives the operator takes.
    pub fn order(&self) -> u32 {
        match self {
            DiffOp::Grad | DiffOp::Curl | DiffOp::Rot | DiffOp::Div | DiffOp::Def => 1,
            DiffOp::Hess | DiffOp::Inc3d => 2,
            _ => 0,
        }
    }

    /// Output shape for an input of `shape` in `n` variables.
    pub fn output_shape(&self, shape: Shape, n: usize) -> Result<Shape, ShapeError> {
        let bad = || Err(ShapeError { op: self.name(), shape, nvars: n });
        let scalar = shape == Shape::SCALAR;
        let vector = shape == Shape::vector(n) && n > 1;
        let matrix = shape == Shape::matrix(n) && n > 1;
        match self {
            DiffOp::Grad if scalar => Ok(Shape::vector(n)),
            DiffOp::Grad if vector => Ok(Shape::matrix(n)),
            DiffOp::Curl if n == 2 && scalar => Ok(Shape::vector(2)),
            DiffOp::Curl if n == 2 && vector => Ok(Shape::matrix(2)),
            DiffOp::Curl if n == 3 && vector => Ok(Shape::vector(3)),
            DiffOp::Curl if n == 3 && matrix => Ok(Shape::matrix(3)),
            DiffOp::Rot if n == 2 && vector => Ok(Shape::SCALAR),
            DiffOp::Rot if n == 2 && matrix => Ok(Shape::vector(2)),
            DiffOp::Div if vector => Ok(Shape::SCALAR),
            DiffOp::Div if matrix => Ok(Shape::vector(n)),
            DiffOp::Def if vector => Ok(Shape::matrix(n)),
            DiffOp::Sym | DiffOp::Skw | DiffOp::Transpose if matrix => Ok(shape),
            DiffOp::Mskw if n == 2 && scalar => Ok(Shape::matrix(2)),
            DiffOp::Sskw if n == 2 && matrix => Ok(Shape::SCALAR),
            DiffOp::Hess if scalar => Ok(Shape::matrix(n)),
            DiffOp::Inc3d if n == 3 && matrix => Ok(Shape::matrix(3)),
            _ => bad(),
        }
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("operator `{op}` cannot act on a {shape} field in {nvars} variables")]
pub struct ShapeError {
    pub op: &'static str,
    pub shape: Shape,
    pub nvars: usize,
}

/// A field whose entries are polynomials, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyTensor {
    shape: Shape,
    nvars: usize,
    entries: Vec<MultiPoly>,
}

impl PolyTensor {
    pub fn zeros(shape: Shape, nvars: usize) -> Self {
        Self { shape, nvars, entries: vec![MultiPoly::zero(nvars); shape.len()] }
    }

    pub fn from_entries(shape: Shape, entries: Vec<MultiPoly>) -> Self {
        assert_eq!(entries.len(), shape.len(), "entry count does not match shape {shape}");
        let nvars = entries.first().map(|p| p.nvars()).unwrap_or(0);
        assert!(entries.iter().all(|p| p.nvars() == nvars));
        Self { shape, nvars, entries }
    }

    pub fn scalar(p: MultiPoly) -> Self {
        Self::from_entries(Shape::SCALAR, vec![p])
    }

    pub fn vector(entries: Vec<MultiPoly>) -> Self {
        Self::from_entries(Shape::vector(entries.len()), entries)
    }

    /// Row-major matrix from nested rows.
    pub fn matrix(rows: Vec<Vec<MultiPoly>>) -> Self {
        let n = rows.len();
        let m = rows.first().map(|r| r.len()).unwrap_or(0);
        assert!(rows.iter().all(|r| r.len() == m));
        Self::from_entries(Shape { rows: n, cols: m }, rows.into_iter().flatten().collect())
    }

    /// Constant-valued field.
    pub fn constant(shape: Shape, nvars: usize, values: &[ExactScalar]) -> Self {
        assert_eq!(values.len(), shape.len());
        Self::from_entries(shape, values.iter().map(|v| MultiPoly::constant(nvars, v.clone())).collect())
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let mut t = Self::zeros(Shape::matrix(n), nvars);
        for i in 0..n {
            *t.get_mut(i, i) = MultiPoly::one(nvars);
        }
        t
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn entries(&self) -> &[MultiPoly] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<MultiPoly> {
        self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [MultiPoly] {
        &mut self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.shape.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut MultiPoly {
        &mut self.entries[i * self.shape.cols + j]
    }

    /// Entry of a vector (or scalar with `i = 0`).
    pub fn comp(&self, i: usize) -> &MultiPoly {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn degree(&self) -> u32 {
        self.entries.iter().map(|p| p.degree()).max().unwrap_or(0)
    }

    pub fn map(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> Self {
        Self { shape: self.shape, nvars: self.nvars, entries: self.entries.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn eval(&self, point: &[ExactScalar]) -> Vec<ExactScalar> {
        self.entries.iter().map(|p| p.eval(point)).collect()
    }

    pub fn column(&self, c: usize) -> PolyTensor {
        PolyTensor::vector((0..self.shape.rows).map(|i| self.get(i, c).clone()).collect())
    }

    pub fn from_columns(cols: &[PolyTensor]) -> Self {
        let n = cols[0].shape.rows;
        let m = cols.len();
        let rows = (0..n).map(|i| (0..m).map(|c| cols[c].comp(i).clone()).collect()).collect();
        Self::matrix(rows)
    }

    pub fn transpose(&self) -> Self {
        let Shape { rows, cols } = self.shape;
        let rows_out = (0..cols).map(|j| (0..rows).map(|i| self.get(i, j).clone()).collect()).collect();
        Self::matrix(rows_out)
    }

    pub fn trace(&self) -> MultiPoly {
        assert_eq!(self.shape.rows, self.shape.cols);
        let mut acc = MultiPoly::zero(self.nvars);
        for i in 0..self.shape.rows {
            acc += self.get(i, i);
        }
        acc
    }

    /// Entrywise Laplacian.
    pub fn laplacian(&self) -> Self {
        self.map(|p| {
            let mut acc = MultiPoly::zero(p.nvars());
            for i in 0..p.nvars() {
                acc += &p.diff(i).diff(i);
            }
            acc
        })
    }

    /// Frobenius contraction `A : B`.
    pub fn contract(&self, other: &PolyTensor) -> MultiPoly {
        assert_eq!(self.shape, other.shape);
        let mut acc = MultiPoly::zero(self.nvars);
        for (a, b) in self.entries.iter().zip(&other.entries) {
            acc += &(a * b);
        }
        acc
    }

    pub fn matmul(&self, other: &PolyTensor) -> PolyTensor {
        assert_eq!(self.shape.cols, other.shape.rows);
        let (n, k, m) = (self.shape.rows, self.shape.cols, other.shape.cols);
        let mut out = PolyTensor::zeros(Shape { rows: n, cols: m }, self.nvars);
        for i in 0..n {
            for j in 0..m {
                let mut acc = MultiPoly::zero(self.nvars);
                for l in 0..k {
                    acc += &(self.get(i, l) * other.get(l, j));
                }
                *out.get_mut(i, j) = acc;
            }
        }
        out
    }

    pub fn apply(&self, op: DiffOp) -> Result<PolyTensor, ShapeError> {
        poly_diff(self, op)
    }

    /// Composes every entry with the substitution `x_i -> subs[i]`.
    pub fn compose(&self, subs: &[MultiPoly]) -> PolyTensor {
        let entries: Vec<MultiPoly> = self.entries.iter().map(|p| p.compose(subs)).collect();
        let nvars = entries.first().map(|p| p.nvars()).unwrap_or(0);
        Self { shape: self.shape, nvars, entries }
    }
}

impl fmt::Debug for PolyTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyTensor[{}](", self.shape)?;
        for (k, p) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl Add for &PolyTensor {
    type Output = PolyTensor;
    fn add(self, rhs: &PolyTensor) -> PolyTensor {
        assert_eq!(self.shape, rhs.shape, "shape mismatch in addition");
        PolyTensor { shape: self.shape, nvars: self.nvars, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &PolyTensor {
    type Output = PolyTensor;
    fn sub(self, rhs: &PolyTensor) -> PolyTensor {
        assert_eq!(self.shape, rhs.shape, "shape mismatch in subtraction");
        PolyTensor { shape: self.shape, nvars: self.nvars, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &PolyTensor {
    type Output = PolyTensor;
    fn neg(self) -> PolyTensor {
        self.map(|p| -p)
    }
}

/// The Levi-Civita symbol with `ε_012 = 1`.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i32 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

fn curl3(v: &[&MultiPoly]) -> Vec<MultiPoly> {
    let n = v[0].nvars();
    (0..3)
        .map(|i| {
            let mut acc = MultiPoly::zero(n);
            for j in 0..3 {
                for k in 0..3 {
                    match levi_civita(i, j, k) {
                        1 => acc += &v[k].diff(j),
                        -1 => acc -= &v[k].diff(j),
                        _ => {}
                    }
                }
            }
            acc
        })
        .collect()
}

/// Applies a differential or algebraic operator symbolically.
pub fn poly_diff(p: &PolyTensor, op: DiffOp) -> Result<PolyTensor, ShapeError> {
    let n = p.nvars;
    let out_shape = op.output_shape(p.shape, n)?;
    let half = ratio(1, 2);
    let out = match op {
        DiffOp::Grad => {
            if p.shape == Shape::SCALAR {
                PolyTensor::vector((0..n).map(|i| p.comp(0).diff(i)).collect())
            } else {
                let rows = (0..n).map(|i| (0..n).map(|j| p.comp(j).diff(i)).collect()).collect();
                PolyTensor::matrix(rows)
            }
        }
        DiffOp::Curl => {
            if n == 2 {
                let curl_scalar = |f: &MultiPoly| PolyTensor::vector(vec![-f.diff(1), f.diff(0)]);
                if p.shape == Shape::SCALAR {
                    curl_scalar(p.comp(0))
                } else {
                    let cols: Vec<PolyTensor> = (0..2).map(|c| curl_scalar(p.comp(c))).collect();
                    PolyTensor::from_columns(&cols)
                }
            } else if p.shape == Shape::vector(3) {
                PolyTensor::vector(curl3(&[p.comp(0), p.comp(1), p.comp(2)]))
            } else {
                let cols: Vec<PolyTensor> = (0..3).map(|c| PolyTensor::vector(curl3(&[p.get(0, c), p.get(1, c), p.get(2, c)]))).collect();
                PolyTensor::from_columns(&cols)
            }
        }
        DiffOp::Rot => {
            let rot = |a: &MultiPoly, b: &MultiPoly| &b.diff(0) - &a.diff(1);
            if p.shape == Shape::vector(2) {
                PolyTensor::scalar(rot(p.comp(0), p.comp(1)))
            } else {
                PolyTensor::vector((0..2).map(|c| rot(p.get(0, c), p.get(1, c))).collect())
            }
        }
        DiffOp::Div => {
            if p.shape.cols == 1 {
                let mut acc = MultiPoly::zero(n);
                for i in 0..n {
                    acc += &p.comp(i).diff(i);
                }
                PolyTensor::scalar(acc)
            } else {
                PolyTensor::vector(
                    (0..n)
                        .map(|c| {
                            let mut acc = MultiPoly::zero(n);
                            for j in 0..n {
                                acc += &p.get(j, c).diff(j);
                            }
                            acc
                        })
                        .collect(),
                )
            }
        }
        DiffOp::Def => poly_diff(&poly_diff(p, DiffOp::Grad)?, DiffOp::Sym)?,
        DiffOp::Sym => {
            let t = p.transpose();
            (p + &t).scale(&half)
        }
        DiffOp::Skw => {
            let t = p.transpose();
            (p - &t).scale(&half)
        }
        DiffOp::Transpose => p.transpose(),
        DiffOp::Mskw => {
            let s = p.comp(0);
            PolyTensor::matrix(vec![vec![MultiPoly::zero(n), s.clone()], vec![-s, MultiPoly::zero(n)]])
        }
        DiffOp::Sskw => PolyTensor::scalar((p.get(0, 1) - p.get(1, 0)).scale(&half)),
        DiffOp::Hess => {
            let f = p.comp(0);
            PolyTensor::matrix((0..n).map(|i| (0..n).map(|j| f.diff(i).diff(j)).collect()).collect())
        }
        DiffOp::Inc3d => {
            let c = poly_diff(p, DiffOp::Curl)?;
            poly_diff(&c.transpose(), DiffOp::Curl)?
        }
    };
    debug_assert_eq!(out.shape, out_shape);
    Ok(out)
}

/// Derivatives of every entry up to `order` at `point`: `[entry][order][multi-index]`,
/// multi-indices as in [`MultiPoly::jet`].
pub fn poly_jet(p: &PolyTensor, point: &[ExactScalar], order: usize) -> Vec<Vec<Vec<ExactScalar>>> {
    p.entries.iter().map(|e| e.jet(point, order)).collect()
}

/// The trace-reversal maps used by the linearized curvature identities:
/// `S g = g - tr(g) I` and `S⁻¹ g = g - ½ tr(g) I`.
pub fn trace_reverse(g: &PolyTensor) -> PolyTensor {
    let n = g.shape.rows;
    let tr = g.trace();
    let mut out = g.clone();
    for i in 0..n {
        *out.get_mut(i, i) = out.get(i, i) - &tr;
    }
    out
}

pub fn trace_reverse_inverse(g: &PolyTensor) -> PolyTensor {
    let n = g.shape.rows;
    let tr = g.trace().scale(&ratio(1, 2));
    let mut out = g.clone();
    for i in 0..n {
        *out.get_mut(i, i) = out.get(i, i) - &tr;
    }
    out
}

/// `c * I` as a field.
pub fn scaled_identity(n: usize, c: &MultiPoly) -> PolyTensor {
    let mut t = PolyTensor::zeros(Shape::matrix(n), c.nvars());
    for i in 0..n {
        *t.get_mut(i, i) = c.clone();
    }
    t
}
