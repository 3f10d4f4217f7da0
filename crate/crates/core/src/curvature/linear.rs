//! The nonlinear metric change `ι` and the linearized geometric operators on
//! polynomial fields, with pointwise linearizations through dual numbers.

use super::field::{Dual, Field};
use super::riemann::{curvature_at, Mat, MetricJet};
use num_traits::Signed;

use super::CurvatureError;
use crate::exactmath::poly::MultiPoly;
use crate::exactmath::tensor::{levi_civita, scaled_identity, trace_reverse, trace_reverse_inverse, DiffOp, PolyTensor, Shape};
use crate::exactmath::{ratio, ExactMatrix, ExactScalar};

fn apply(p: &PolyTensor, op: DiffOp) -> Result<PolyTensor, CurvatureError> {
    p.apply(op).map_err(|e| CurvatureError::Shape(e.to_string()))
}

fn square_field(h: &PolyTensor, dims: &[usize]) -> Result<usize, CurvatureError> {
    let n = h.shape().rows;
    if h.shape() != Shape::matrix(n) || h.nvars() != n || !dims.contains(&n) {
        return Err(CurvatureError::Shape(format!(
            "expected a square field in {dims:?} dimensions, got {} in {} variables",
            h.shape(),
            h.nvars()
        )));
    }
    Ok(n)
}

fn constant_matrix(m: &ExactMatrix, nvars: usize) -> PolyTensor {
    let n = m.rows();
    PolyTensor::matrix((0..n).map(|i| (0..n).map(|j| MultiPoly::constant(nvars, m.get(i, j).clone())).collect()).collect())
}

/// `ι(φ) = Dφ g₀ Dφᵗ - Dφ₀ g₀ Dφ₀ᵗ` with `(Dφ)_ij = ∂_i φ_j`.
pub fn iota(phi: &PolyTensor, phi0: &PolyTensor, g0: &ExactMatrix) -> Result<PolyTensor, CurvatureError> {
    let n = phi.nvars();
    if phi.shape() != Shape::vector(n) || phi0.shape() != phi.shape() || phi0.nvars() != n || g0.rows() != n || g0.cols() != n {
        return Err(CurvatureError::Shape("iota needs two maps R^n -> R^n and an n x n matrix".into()));
    }
    let g0 = constant_matrix(g0, n);
    let pull = |f: &PolyTensor| -> Result<PolyTensor, CurvatureError> {
        let d = apply(f, DiffOp::Grad)?;
        Ok(d.matmul(&g0).matmul(&d.transpose()))
    };
    Ok(&pull(phi)? - &pull(phi0)?)
}

pub fn identity_map(n: usize) -> PolyTensor {
    PolyTensor::vector((0..n).map(|i| MultiPoly::var(n, i)).collect())
}

pub fn identity_field(n: usize) -> PolyTensor {
    PolyTensor::identity(n, n)
}

pub fn trace(h: &PolyTensor) -> PolyTensor {
    PolyTensor::scalar(h.trace())
}

/// `S g = g - tr(g) I`, used in three dimensions only.
pub fn s_op(h: &PolyTensor) -> Result<PolyTensor, CurvatureError> {
    square_field(h, &[3])?;
    Ok(trace_reverse(h))
}

/// `S⁻¹ g = g - ½ tr(g) I`.
pub fn s_inv(h: &PolyTensor) -> Result<PolyTensor, CurvatureError> {
    square_field(h, &[2, 3])?;
    Ok(trace_reverse_inverse(h))
}

pub fn inc(h: &PolyTensor) -> Result<PolyTensor, CurvatureError> {
    square_field(h, &[3])?;
    apply(h, DiffOp::Inc3d)
}

pub fn rot_rot(h: &PolyTensor) -> Result<PolyTensor, CurvatureError> {
    square_field(h, &[2])?;
    apply(&apply(h, DiffOp::Rot)?, DiffOp::Rot)
}

pub fn div_div(h: &PolyTensor) -> Result<PolyTensor, CurvatureError> {
    apply(&apply(h, DiffOp::Div)?, DiffOp::Div)
}

pub fn div_div_s(h: &PolyTensor) -> Result<PolyTensor, CurvatureError> {
    div_div(&s_op(h)?)
}

/// `½(-Δh - hess tr h + 2 def div h)`.
pub fn ricci_expansion(h: &PolyTensor) -> Result<PolyTensor, CurvatureError> {
    let n = square_field(h, &[2, 3])?;
    let hess_tr = apply(&trace(h), DiffOp::Hess)?;
    let def_div = apply(&apply(h, DiffOp::Div)?, DiffOp::Def)?;
    let sum = &(&(-&h.laplacian()) - &hess_tr) + &def_div.scale(&ratio(2, 1));
    debug_assert_eq!(sum.shape(), Shape::matrix(n));
    Ok(sum.scale(&ratio(1, 2)))
}

/// `Δ tr h - div div h`.
pub fn trace_inc_expansion(h: &PolyTensor) -> Result<PolyTensor, CurvatureError> {
    Ok(&trace(h).laplacian() - &div_div(h)?)
}

pub fn eval_matrix(p: &PolyTensor, point: &[ExactScalar]) -> Mat<ExactScalar> {
    let (r, c) = (p.shape().rows, p.shape().cols);
    (0..r).map(|i| (0..c).map(|j| p.get(i, j).eval(point)).collect()).collect()
}

/// The `t`-linear parts of the curvature of `I + t h` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Linearized {
    pub contracted_christoffel: Vec<ExactScalar>,
    pub riemann: Vec<Vec<Vec<Vec<ExactScalar>>>>,
    pub ricci: Mat<ExactScalar>,
    pub scalar: ExactScalar,
    pub einstein: Mat<ExactScalar>,
}

fn eps2(m: &Mat<Dual>) -> Mat<ExactScalar> {
    m.iter().map(|r| r.iter().map(|x| x.eps.clone()).collect()).collect()
}

pub fn linearize_at(h: &PolyTensor, point: &[ExactScalar]) -> Result<Linearized, CurvatureError> {
    let n = square_field(h, &[2, 3])?;
    let jet = MetricJet::perturbed(&identity_field(n), h, point, 2)?;
    let v = curvature_at(&jet)?;
    debug_assert!(v.scalar.real() == ExactScalar::from_integer(0.into()));
    Ok(Linearized {
        contracted_christoffel: v.contracted.iter().map(|x| x.eps.clone()).collect(),
        riemann: v.riemann.iter().map(|a| a.iter().map(eps2).collect()).collect(),
        ricci: eps2(&v.ricci),
        scalar: v.scalar.eps.clone(),
        einstein: eps2(&v.einstein),
    })
}

/// Both sides of the linearized Ricci identity: the dual-number derivative and
/// the closed form `½(-Δh - hess tr h + 2 def div h)`, at a point.
pub fn linearize_ric(h: &PolyTensor, point: &[ExactScalar]) -> Result<(Mat<ExactScalar>, Mat<ExactScalar>), CurvatureError> {
    let derived = linearize_at(h, point)?.ricci;
    Ok((derived, eval_matrix(&ricci_expansion(h)?, point)))
}

/// `G_ijkl = ε_ijs ε_klt (inc h)_st` at a point.
pub fn inc_four_tensor(h: &PolyTensor, point: &[ExactScalar]) -> Result<Vec<Vec<Vec<Vec<ExactScalar>>>>, CurvatureError> {
    let inc_h = eval_matrix(&inc(h)?, point);
    let mut out = vec![vec![vec![vec![ExactScalar::from_integer(0.into()); 3]; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    for s in 0..3 {
                        for t in 0..3 {
                            let e = levi_civita(i, j, s) * levi_civita(k, l, t);
                            if e != 0 {
                                out[i][j][k][l] += ExactScalar::from_integer(e.into()) * &inc_h[s][t];
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Largest `|R_ijkl - c G_ijkl|` for the linearized Riemann tensor
/// `R_ijkl = g_km R^m_ijl` of `h`.
pub fn riemann4_identity(h: &PolyTensor, point: &[ExactScalar], c: &ExactScalar) -> Result<ExactScalar, CurvatureError> {
    square_field(h, &[3])?;
    let r = linearize_at(h, point)?.riemann;
    let g = inc_four_tensor(h, point)?;
    let mut worst = ExactScalar::from_integer(0.into());
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let d = (&r[i][j][k][l] - c * &g[i][j][k][l]).abs();
                    if d > worst {
                        worst = d;
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// A constant scalar multiple of the identity as a field in `n` variables.
pub fn constant_identity(n: usize, c: ExactScalar) -> PolyTensor {
    scaled_identity(n, &MultiPoly::constant(n, c))
}
