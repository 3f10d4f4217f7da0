//! Metric jets at a point and the curvature tensors they determine.

use super::field::{Dual, Field};
use super::CurvatureError;
use crate::exactmath::tensor::PolyTensor;
use crate::exactmath::{ExactMatrix, ExactScalar};

pub type Mat<F> = Vec<Vec<F>>;
pub type T3<F> = Vec<Vec<Vec<F>>>;
pub type T4<F> = Vec<Vec<Vec<Vec<F>>>>;

fn zeros2<F: Field>(n: usize) -> Mat<F> {
    vec![vec![F::zero(); n]; n]
}

fn zeros3<F: Field>(n: usize) -> T3<F> {
    vec![zeros2(n); n]
}

fn zeros4<F: Field>(n: usize) -> T4<F> {
    vec![zeros3(n); n]
}

fn mat_mul<F: Field>(a: &Mat<F>, b: &Mat<F>) -> Mat<F> {
    let n = a.len();
    let mut out = zeros2(n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = F::zero();
            for k in 0..n {
                acc = acc + a[i][k].clone() * b[k][j].clone();
            }
            out[i][j] = acc;
        }
    }
    out
}

fn mat_add<F: Field>(a: &Mat<F>, b: &Mat<F>) -> Mat<F> {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.clone() + y.clone()).collect()).collect()
}

fn mat_neg<F: Field>(a: &Mat<F>) -> Mat<F> {
    a.iter().map(|r| r.iter().map(|x| -x.clone()).collect()).collect()
}

/// Gauss-Jordan inverse, pivoting on entries with a nonzero real part.
pub fn mat_inverse<F: Field>(a: &Mat<F>) -> Option<Mat<F>> {
    let n = a.len();
    let mut m: Vec<Vec<F>> = a.clone();
    let mut inv: Mat<F> = (0..n).map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !num_traits::Zero::is_zero(&m[r][c].real()))?;
        m.swap(c, p);
        inv.swap(c, p);
        let s = m[c][c].inverse()?;
        for j in 0..n {
            m[c][j] = m[c][j].clone() * s.clone();
            inv[c][j] = inv[c][j].clone() * s.clone();
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..n {
                    m[r][j] = m[r][j].clone() - f.clone() * m[c][j].clone();
                    inv[r][j] = inv[r][j].clone() - f.clone() * inv[c][j].clone();
                }
            }
        }
    }
    Some(inv)
}

/// Linear index of a derivative multi-index `(k_1, …, k_r)` in base `n`.
fn code(n: usize, ks: &[usize]) -> usize {
    ks.iter().rev().fold(0, |acc, &k| acc * n + k)
}

fn decode(n: usize, r: usize, mut c: usize) -> Vec<usize> {
    (0..r)
        .map(|_| {
            let k = c % n;
            c /= n;
            k
        })
        .collect()
}

/// Values and partial derivatives up to `order` of a metric at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricJet<F> {
    pub n: usize,
    pub order: usize,
    /// `derivs[r][code(k_1..k_r)]` is the matrix `∂_{k_1}…∂_{k_r} g`.
    derivs: Vec<Vec<Mat<F>>>,
}

fn jet_of<F: Field>(n: usize, order: usize, entry: impl Fn(&[usize], usize, usize) -> F) -> Vec<Vec<Mat<F>>> {
    (0..=order)
        .map(|r| {
            (0..n.pow(r as u32))
                .map(|c| {
                    let ks = decode(n, r, c);
                    (0..n).map(|i| (0..n).map(|j| entry(&ks, i, j)).collect()).collect()
                })
                .collect()
        })
        .collect()
}

fn check_field(g: &PolyTensor, point: &[ExactScalar]) -> Result<usize, CurvatureError> {
    let n = g.shape().rows;
    if !(2..=3).contains(&n) || g.shape().cols != n || g.nvars() != n {
        return Err(CurvatureError::Shape(format!("expected a {n}x{n} field in {n} variables, got {}", g.shape())));
    }
    if point.len() != n {
        return Err(CurvatureError::Shape(format!("point has {} coordinates, expected {n}", point.len())));
    }
    if *g != g.transpose() {
        return Err(CurvatureError::NonSymmetric("metric field".into()));
    }
    Ok(n)
}

impl<F: Field> MetricJet<F> {
    /// Validates symmetry in `(i, j)`, symmetry of mixed partials and positive definiteness.
    pub fn new(n: usize, derivs: Vec<Vec<Mat<F>>>) -> Result<Self, CurvatureError> {
        if !(2..=3).contains(&n) || derivs.is_empty() {
            return Err(CurvatureError::Shape(format!("metric jets live in 2 or 3 dimensions, got {n}")));
        }
        let order = derivs.len() - 1;
        for (r, level) in derivs.iter().enumerate() {
            if level.len() != n.pow(r as u32) || level.iter().any(|m| m.len() != n || m.iter().any(|row| row.len() != n)) {
                return Err(CurvatureError::Shape(format!("order-{r} derivatives have the wrong size")));
            }
            for (c, m) in level.iter().enumerate() {
                if (0..n).any(|i| (0..n).any(|j| m[i][j] != m[j][i])) {
                    return Err(CurvatureError::NonSymmetric(format!("order-{r} derivative of the metric")));
                }
                let mut ks = decode(n, r, c);
                ks.sort_unstable();
                if level[code(n, &ks)] != *m {
                    return Err(CurvatureError::NonSymmetric(format!("mixed partials of order {r}")));
                }
            }
        }
        let jet = MetricJet { n, order, derivs };
        jet.check_positive()?;
        Ok(jet)
    }

    fn check_positive(&self) -> Result<(), CurvatureError> {
        let g = self.value();
        for k in 1..=self.n {
            let minor = ExactMatrix::from_rows((0..k).map(|i| (0..k).map(|j| g[i][j].real()).collect()).collect());
            if minor.determinant() <= num_traits::Zero::zero() {
                return Err(CurvatureError::NotPositiveDefinite { minor: k });
            }
        }
        Ok(())
    }

    pub fn value(&self) -> &Mat<F> {
        &self.derivs[0][0]
    }

    pub fn d(&self, ks: &[usize]) -> &Mat<F> {
        &self.derivs[ks.len()][code(self.n, ks)]
    }

    fn require(&self, order: usize) -> Result<(), CurvatureError> {
        if self.order < order {
            Err(CurvatureError::JetOrder { needed: order, got: self.order })
        } else {
            Ok(())
        }
    }
}

impl MetricJet<ExactScalar> {
    /// The jet of a polynomial metric field at a point.
    pub fn from_poly(g: &PolyTensor, point: &[ExactScalar], order: usize) -> Result<Self, CurvatureError> {
        let n = check_field(g, point)?;
        Self::new(n, jet_of(n, order, |ks, i, j| g.get(i, j).diff_multi(ks).eval(point)))
    }
}

impl MetricJet<Dual> {
    /// The jet of `base + t h` with `t² = 0`.
    pub fn perturbed(base: &PolyTensor, h: &PolyTensor, point: &[ExactScalar], order: usize) -> Result<Self, CurvatureError> {
        let n = check_field(base, point)?;
        if check_field(h, point)? != n {
            return Err(CurvatureError::Shape("base and direction differ in dimension".into()));
        }
        Self::new(
            n,
            jet_of(n, order, |ks, i, j| Dual::new(base.get(i, j).diff_multi(ks).eval(point), h.get(i, j).diff_multi(ks).eval(point))),
        )
    }
}

/// `g⁻¹` with its first and (when available) second derivatives, and the
/// Christoffel symbols `Γ^i_jk` with derivatives as far as the jet allows.
struct Connection<F> {
    ginv: Mat<F>,
    dginv: Vec<Mat<F>>,
    gamma: T3<F>,
    /// `[l][i][j][k] = ∂_l Γ^i_jk`.
    dgamma: Option<Vec<T3<F>>>,
    /// `[p][l][i][j][k] = ∂_p ∂_l Γ^i_jk`.
    ddgamma: Option<Vec<Vec<T3<F>>>>,
}

impl<F: Field> Connection<F> {
    fn of(jet: &MetricJet<F>) -> Result<Self, CurvatureError> {
        jet.require(1)?;
        let n = jet.n;
        let half = F::from_rational(crate::exactmath::ratio(1, 2));
        let ginv = mat_inverse(jet.value()).ok_or(CurvatureError::NotPositiveDefinite { minor: n })?;
        let dginv: Vec<Mat<F>> = (0..n).map(|k| mat_neg(&mat_mul(&mat_mul(&ginv, jet.d(&[k])), &ginv))).collect();
        let ddginv: Option<Vec<Vec<Mat<F>>>> = (jet.order >= 2).then(|| {
            (0..n)
                .map(|p| {
                    (0..n)
                        .map(|k| {
                            // ∂_p(-G ∂_k g G) = -(∂_p G ∂_k g G + G ∂_p∂_k g G + G ∂_k g ∂_p G)
                            let a = mat_mul(&mat_mul(&dginv[p], jet.d(&[k])), &ginv);
                            let b = mat_mul(&mat_mul(&ginv, jet.d(&[p, k])), &ginv);
                            let c = mat_mul(&mat_mul(&ginv, jet.d(&[k])), &dginv[p]);
                            mat_neg(&mat_add(&mat_add(&a, &b), &c))
                        })
                        .collect()
                })
                .collect()
        });

        // A_mjk(extra) = ∂_j g_mk + ∂_k g_mj - ∂_m g_jk, differentiated by `extra`.
        let lowered = |extra: &[usize], m: usize, j: usize, k: usize| -> F {
            let d = |a: usize, r: usize, s: usize| {
                let mut ks = extra.to_vec();
                ks.push(a);
                jet.d(&ks)[r][s].clone()
            };
            d(j, m, k) + d(k, m, j) - d(m, j, k)
        };
        let raise = |inv: &Mat<F>, extra: &[usize]| -> T3<F> {
            let mut out = zeros3(n);
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut acc = F::zero();
                        for m in 0..n {
                            acc = acc + inv[i][m].clone() * lowered(extra, m, j, k);
                        }
                        out[i][j][k] = half.clone() * acc;
                    }
                }
            }
            out
        };
        let add3 = |a: T3<F>, b: &T3<F>| -> T3<F> {
            a.into_iter()
                .zip(b)
                .map(|(x, y)| x.into_iter().zip(y).map(|(r, s)| r.into_iter().zip(s).map(|(u, v)| u + v.clone()).collect()).collect())
                .collect()
        };
        let gamma = raise(&ginv, &[]);
        let dgamma = (jet.order >= 2).then(|| (0..n).map(|l| add3(raise(&dginv[l], &[]), &raise(&ginv, &[l]))).collect::<Vec<_>>());
        let ddgamma = match (&ddginv, jet.order >= 3) {
            (Some(ddginv), true) => Some(
                (0..n)
                    .map(|p| {
                        (0..n)
                            .map(|l| {
                                let t = add3(raise(&ddginv[p][l], &[]), &raise(&dginv[l], &[p]));
                                let t = add3(t, &raise(&dginv[p], &[l]));
                                add3(t, &raise(&ginv, &[p, l]))
                            })
                            .collect()
                    })
                    .collect(),
            ),
            _ => None,
        };
        Ok(Connection { ginv, dginv, gamma, dgamma, ddgamma })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureValues<F> {
    pub n: usize,
    /// `[i][j][k] = Γ^i_jk`.
    pub christoffel: T3<F>,
    /// `Γ^i = g^{jk} Γ^i_jk`.
    pub contracted: Vec<F>,
    /// `[k][i][j][l] = R^k_{ijl} = ∂_iΓ^k_jl - ∂_jΓ^k_il + Γ^k_im Γ^m_jl - Γ^k_jm Γ^m_il`.
    pub riemann_up: T4<F>,
    /// `[i][j][k][l] = R_ijkl = g_km R^m_ijl`.
    pub riemann: T4<F>,
    /// `R_jl = R^i_ijl`.
    pub ricci: Mat<F>,
    pub scalar: F,
    pub einstein: Mat<F>,
}

fn riemann_up<F: Field>(n: usize, gamma: &T3<F>, dgamma: &[T3<F>]) -> T4<F> {
    let mut r = zeros4(n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let mut acc = dgamma[i][k][j][l].clone() - dgamma[j][k][i][l].clone();
                    for m in 0..n {
                        acc = acc + gamma[k][i][m].clone() * gamma[m][j][l].clone() - gamma[k][j][m].clone() * gamma[m][i][l].clone();
                    }
                    r[k][i][j][l] = acc;
                }
            }
        }
    }
    r
}

fn contract_ricci<F: Field>(n: usize, r: &T4<F>) -> Mat<F> {
    let mut ric = zeros2(n);
    for j in 0..n {
        for l in 0..n {
            let mut acc = F::zero();
            for i in 0..n {
                acc = acc + r[i][i][j][l].clone();
            }
            ric[j][l] = acc;
        }
    }
    ric
}

pub fn curvature_at<F: Field>(jet: &MetricJet<F>) -> Result<CurvatureValues<F>, CurvatureError> {
    jet.require(2)?;
    let n = jet.n;
    let conn = Connection::of(jet)?;
    let dgamma = conn.dgamma.as_ref().expect("order 2");
    let up = riemann_up(n, &conn.gamma, dgamma);
    let g = jet.value();
    let mut low = zeros4(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut acc = F::zero();
                    for m in 0..n {
                        acc = acc + g[k][m].clone() * up[m][i][j][l].clone();
                    }
                    low[i][j][k][l] = acc;
                }
            }
        }
    }
    let ricci = contract_ricci(n, &up);
    let mut scalar = F::zero();
    for j in 0..n {
        for l in 0..n {
            scalar = scalar + conn.ginv[j][l].clone() * ricci[j][l].clone();
        }
    }
    let half = F::from_rational(crate::exactmath::ratio(1, 2));
    let einstein =
        (0..n).map(|i| (0..n).map(|j| ricci[i][j].clone() - half.clone() * scalar.clone() * g[i][j].clone()).collect()).collect();
    let contracted = (0..n)
        .map(|i| {
            let mut acc = F::zero();
            for j in 0..n {
                for k in 0..n {
                    acc = acc + conn.ginv[j][k].clone() * conn.gamma[i][j][k].clone();
                }
            }
            acc
        })
        .collect();
    Ok(CurvatureValues { n, christoffel: conn.gamma, contracted, riemann_up: up, riemann: low, ricci, scalar, einstein })
}

/// A symmetric tensor field's value and first derivatives (`d[k] = ∂_k σ`) at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct SymJet<F> {
    pub value: Mat<F>,
    pub d: Vec<Mat<F>>,
}

impl SymJet<ExactScalar> {
    pub fn from_poly(s: &PolyTensor, point: &[ExactScalar]) -> Self {
        let n = s.shape().rows;
        let at = |ks: &[usize]| (0..n).map(|i| (0..n).map(|j| s.get(i, j).diff_multi(ks).eval(point)).collect()).collect();
        SymJet { value: at(&[]), d: (0..n).map(|k| at(&[k])).collect() }
    }
}

/// The Ricci tensor with its first derivatives, from a jet of order 3.
pub fn ricci_jet<F: Field>(jet: &MetricJet<F>) -> Result<SymJet<F>, CurvatureError> {
    jet.require(3)?;
    let n = jet.n;
    let conn = Connection::of(jet)?;
    let (dgamma, ddgamma) = (conn.dgamma.as_ref().expect("order 3"), conn.ddgamma.as_ref().expect("order 3"));
    let value = contract_ricci(n, &riemann_up(n, &conn.gamma, dgamma));
    let d = (0..n)
        .map(|p| {
            let mut dr = zeros4(n);
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        for l in 0..n {
                            let mut acc = ddgamma[p][i][k][j][l].clone() - ddgamma[p][j][k][i][l].clone();
                            for m in 0..n {
                                acc = acc
                                    + dgamma[p][k][i][m].clone() * conn.gamma[m][j][l].clone()
                                    + conn.gamma[k][i][m].clone() * dgamma[p][m][j][l].clone()
                                    - dgamma[p][k][j][m].clone() * conn.gamma[m][i][l].clone()
                                    - conn.gamma[k][j][m].clone() * dgamma[p][m][i][l].clone();
                            }
                            dr[k][i][j][l] = acc;
                        }
                    }
                }
            }
            contract_ricci(n, &dr)
        })
        .collect();
    Ok(SymJet { value, d })
}

/// `∇^i(σ_ij - ½ (tr_g σ) g_ij)` for the Levi-Civita connection of `g`.
pub fn bianchi_at<F: Field>(jet: &MetricJet<F>, sigma: &SymJet<F>) -> Result<Vec<F>, CurvatureError> {
    let n = jet.n;
    let sym = |m: &Mat<F>| (0..n).all(|i| (0..n).all(|j| m[i][j] == m[j][i]));
    if sigma.value.len() != n || sigma.d.len() != n {
        return Err(CurvatureError::Shape("sigma jet does not match the metric dimension".into()));
    }
    if !sym(&sigma.value) || !sigma.d.iter().all(sym) {
        return Err(CurvatureError::NonSymmetric("sigma".into()));
    }
    let conn = Connection::of(jet)?;
    let (s, ds, gam) = (&sigma.value, &sigma.d, &conn.gamma);
    let half = F::from_rational(crate::exactmath::ratio(1, 2));
    Ok((0..n)
        .map(|j| {
            let mut div = F::zero();
            for i in 0..n {
                for k in 0..n {
                    let mut cov = ds[k][i][j].clone();
                    for m in 0..n {
                        cov = cov - gam[m][k][i].clone() * s[m][j].clone() - gam[m][k][j].clone() * s[i][m].clone();
                    }
                    div = div + conn.ginv[i][k].clone() * cov;
                }
            }
            let mut dtr = F::zero();
            for a in 0..n {
                for b in 0..n {
                    dtr = dtr + conn.dginv[j][a][b].clone() * s[a][b].clone() + conn.ginv[a][b].clone() * ds[j][a][b].clone();
                }
            }
            div - half.clone() * dtr
        })
        .collect())
}

/// Number of violated entries among the algebraic symmetries of the
/// Christoffel symbols and the lowered Riemann tensor.
pub fn symmetry_defects<F: Field>(v: &CurvatureValues<F>) -> usize {
    let n = v.n;
    let (g, r) = (&v.christoffel, &v.riemann);
    let mut bad = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                bad += usize::from(g[i][j][k] != g[i][k][j]);
                for l in 0..n {
                    let x = &r[i][j][k][l];
                    bad += usize::from(*x != -r[j][i][k][l].clone());
                    bad += usize::from(*x != -r[i][j][l][k].clone());
                    bad += usize::from(*x != r[k][l][i][j]);
                    let cyclic = x.clone() + r[i][k][l][j].clone() + r[i][l][j][k].clone();
                    bad += usize::from(!cyclic.is_zero());
                }
            }
        }
    }
    bad
}
