//! The seeded identity suite: each identity is evaluated exactly on a corpus
//! of random polynomial fields at random rational points, or on supplied test
//! vectors, and reports its largest residual.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::linear::{
    div_div_s, eval_matrix, identity_field, identity_map, inc, iota, linearize_at, linearize_ric, riemann4_identity, rot_rot, s_inv, s_op,
    trace_inc_expansion,
};
use super::riemann::{bianchi_at, curvature_at, ricci_jet, symmetry_defects, MetricJet};
use num_traits::Signed;

use super::CurvatureError;
use crate::exactmath::poly::{monomials_up_to, MultiPoly};
use crate::exactmath::tensor::{DiffOp, PolyTensor};
use crate::exactmath::{format_rational, int, parse_poly, parse_rational, ratio, ExactMatrix, ExactScalar};

/// Which field a case supplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Input {
    /// A map `φ`, used through `ι(φ) + I`.
    Map,
    /// A metric `g`.
    Metric,
    /// A symmetric direction `h` around the Euclidean metric.
    Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IdentityKind {
    /// The identity exactly as written in the source formulas.
    Stated,
    /// The sign- or operator-corrected form of a stated identity that fails.
    Corrected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

struct Identity {
    name: &'static str,
    statement: &'static str,
    kind: IdentityKind,
    dims: &'static [usize],
    input: Input,
}

const IDENTITIES: &[Identity] = &[
    Identity {
        name: "symmetries",
        statement: "Γ^i_jk = Γ^i_kj; R_ijkl = -R_jikl = -R_ijlk = R_klij; R_i[jkl] = 0",
        kind: IdentityKind::Stated,
        dims: &[2, 3],
        input: Input::Metric,
    },
    Identity { name: "ric-iota", statement: "Riemann(ι(φ) + I) = 0", kind: IdentityKind::Stated, dims: &[2, 3], input: Input::Map },
    Identity { name: "bianchi", statement: "Bian_g(Ric g) = 0", kind: IdentityKind::Stated, dims: &[2, 3], input: Input::Metric },
    Identity {
        name: "christoffel",
        statement: "t-linear part of Γ^i(I + t h) = (div S⁻¹ h)^i",
        kind: IdentityKind::Stated,
        dims: &[2, 3],
        input: Input::Direction,
    },
    Identity { name: "rotrot-2d", statement: "R'(h) = rot rot h", kind: IdentityKind::Stated, dims: &[2], input: Input::Direction },
    Identity {
        name: "rotrot-2d-corrected",
        statement: "R'(h) = -rot rot h",
        kind: IdentityKind::Corrected,
        dims: &[2],
        input: Input::Direction,
    },
    Identity {
        name: "ricci-3d-expansion",
        statement: "Ric'(h) = ½(-Δh - hess tr h + 2 def div h)",
        kind: IdentityKind::Stated,
        dims: &[3],
        input: Input::Direction,
    },
    Identity {
        name: "ricci-3d-sinv-inc",
        statement: "Ric'(h) = ½ S⁻¹ inc h",
        kind: IdentityKind::Stated,
        dims: &[3],
        input: Input::Direction,
    },
    Identity {
        name: "ricci-3d-s-inc",
        statement: "Ric'(h) = ½ S inc h",
        kind: IdentityKind::Corrected,
        dims: &[3],
        input: Input::Direction,
    },
    Identity { name: "einstein-3d", statement: "Ein'(h) = ½ inc h", kind: IdentityKind::Stated, dims: &[3], input: Input::Direction },
    Identity {
        name: "riemann4-3d",
        statement: "R'_ijkl = ½ ε_ijs ε_klt (inc h)_st",
        kind: IdentityKind::Stated,
        dims: &[3],
        input: Input::Direction,
    },
    Identity {
        name: "riemann4-3d-corrected",
        statement: "R'_ijkl = -½ ε_ijs ε_klt (inc h)_st",
        kind: IdentityKind::Corrected,
        dims: &[3],
        input: Input::Direction,
    },
    Identity { name: "scalar-3d", statement: "R'(h) = -div div S h", kind: IdentityKind::Stated, dims: &[3], input: Input::Direction },
    Identity {
        name: "scalar-3d-corrected",
        statement: "R'(h) = div div S h",
        kind: IdentityKind::Corrected,
        dims: &[3],
        input: Input::Direction,
    },
    Identity {
        name: "trace-inc",
        statement: "tr inc h = Δ tr h - div div h (as polynomials)",
        kind: IdentityKind::Stated,
        dims: &[3],
        input: Input::Direction,
    },
];

pub fn identity_names() -> Vec<&'static str> {
    IDENTITIES.iter().map(|i| i.name).collect()
}

/// Identities selected by `all`, an exact name, or a name prefix ending at a `-`.
fn select(check: &str) -> Result<Vec<(usize, &'static Identity)>, CurvatureError> {
    let picked: Vec<_> = IDENTITIES
        .iter()
        .enumerate()
        .filter(|(_, id)| check == "all" || id.name == check || id.name.strip_prefix(check).is_some_and(|r| r.starts_with('-')))
        .collect();
    if picked.is_empty() {
        return Err(CurvatureError::UnknownCheck { name: check.to_string(), valid: identity_names().join(", ") });
    }
    Ok(picked)
}

/// One evaluation of an identity: a field and a point.
#[derive(Debug, Clone)]
struct Case {
    field: PolyTensor,
    point: Vec<ExactScalar>,
}

fn max_abs_diff<'a>(a: impl IntoIterator<Item = &'a ExactScalar>, b: impl IntoIterator<Item = &'a ExactScalar>) -> ExactScalar {
    a.into_iter().zip(b).map(|(x, y)| (x - y).abs()).max().unwrap_or_else(|| int(0))
}

fn flat(m: &[Vec<ExactScalar>]) -> Vec<ExactScalar> {
    m.iter().flatten().cloned().collect()
}

fn scaled(m: &[Vec<ExactScalar>], c: &ExactScalar) -> Vec<ExactScalar> {
    m.iter().flatten().map(|x| x * c).collect()
}

fn residual(id: &Identity, case: &Case) -> Result<ExactScalar, CurvatureError> {
    let (h, x) = (&case.field, case.point.as_slice());
    let half = ratio(1, 2);
    let n = h.nvars();
    Ok(match id.name {
        "symmetries" => {
            let v = curvature_at(&MetricJet::from_poly(h, x, 2)?)?;
            int(symmetry_defects(&v) as i64)
        }
        "ric-iota" => {
            let g = &iota(h, &identity_map(n), &ExactMatrix::identity(n))? + &identity_field(n);
            let v = curvature_at(&MetricJet::from_poly(&g, x, 2)?)?;
            v.riemann.iter().flatten().flatten().flatten().map(|r| r.abs()).max().unwrap_or_else(|| int(0))
        }
        "bianchi" => {
            let jet = MetricJet::from_poly(h, x, 3)?;
            let b = bianchi_at(&jet, &ricci_jet(&jet)?)?;
            b.iter().map(|r| r.abs()).max().unwrap_or_else(|| int(0))
        }
        "christoffel" => {
            let lin = linearize_at(h, x)?.contracted_christoffel;
            let rhs = s_inv(h)?.apply(DiffOp::Div).map_err(|e| CurvatureError::Shape(e.to_string()))?.eval(x);
            max_abs_diff(&lin, &rhs)
        }
        "rotrot-2d" | "rotrot-2d-corrected" => {
            let r = linearize_at(h, x)?.scalar;
            let rr = rot_rot(h)?.comp(0).eval(x);
            let rhs = if id.kind == IdentityKind::Stated { rr } else { -rr };
            (r - rhs).abs()
        }
        "ricci-3d-expansion" => {
            let (derived, closed) = linearize_ric(h, x)?;
            max_abs_diff(&flat(&derived), &flat(&closed))
        }
        "ricci-3d-sinv-inc" | "ricci-3d-s-inc" => {
            let ric = linearize_at(h, x)?.ricci;
            let inc_h = inc(h)?;
            let rhs = if id.name == "ricci-3d-sinv-inc" { s_inv(&inc_h)? } else { s_op(&inc_h)? };
            max_abs_diff(&flat(&ric), &scaled(&eval_matrix(&rhs, x), &half))
        }
        "einstein-3d" => {
            let ein = linearize_at(h, x)?.einstein;
            max_abs_diff(&flat(&ein), &scaled(&eval_matrix(&inc(h)?, x), &half))
        }
        "riemann4-3d" => riemann4_identity(h, x, &half)?,
        "riemann4-3d-corrected" => riemann4_identity(h, x, &-&half)?,
        "scalar-3d" | "scalar-3d-corrected" => {
            let r = linearize_at(h, x)?.scalar;
            let dd = div_div_s(h)?.comp(0).eval(x);
            let rhs = if id.kind == IdentityKind::Stated { -dd } else { dd };
            (r - rhs).abs()
        }
        "trace-inc" => {
            let diff = &PolyTensor::scalar(inc(h)?.trace()) - &trace_inc_expansion(h)?;
            diff.comp(0).max_abs_coeff()
        }
        other => unreachable!("identity {other} has no evaluator"),
    })
}

/// A rational on the lattice `p/q`, `|p| ≤ 4`, `q ≤ 4`.
fn lattice_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<ExactScalar> {
    (0..n).map(|_| ratio(rng.random_range(-4..=4), rng.random_range(1..=4))).collect()
}

fn random_poly(rng: &mut ChaCha8Rng, nvars: usize, degree: u32, coeff: i64) -> MultiPoly {
    let mut p = MultiPoly::zero(nvars);
    for m in monomials_up_to(nvars, degree) {
        if rng.random_bool(0.5) {
            let c = rng.random_range(-coeff..=coeff);
            if c != 0 {
                p.add_term(m, int(c));
            }
        }
    }
    p
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, degree: u32) -> PolyTensor {
    let mut m = PolyTensor::zeros(crate::exactmath::tensor::Shape::matrix(n), n);
    for i in 0..n {
        for j in i..n {
            let p = random_poly(rng, n, degree, 3);
            *m.get_mut(i, j) = p.clone();
            *m.get_mut(j, i) = p;
        }
    }
    m
}

fn positive_at(g: &PolyTensor, x: &[ExactScalar]) -> bool {
    MetricJet::from_poly(g, x, 0).is_ok()
}

fn random_case(rng: &mut ChaCha8Rng, input: Input, n: usize) -> Case {
    let point = lattice_point(rng, n);
    let field = match input {
        Input::Direction => random_symmetric(rng, n, 3),
        Input::Metric => {
            let p = random_symmetric(rng, n, 3);
            // Halve the perturbation until the metric is positive definite at the point.
            let mut c = ratio(1, 4);
            loop {
                let g = &identity_field(n) + &p.scale(&c);
                if positive_at(&g, &point) {
                    break g;
                }
                c *= ratio(1, 2);
            }
        }
        Input::Map => loop {
            let phi = &identity_map(n) + &PolyTensor::vector((0..n).map(|_| random_poly(rng, n, 3, 2)).collect());
            let d = phi.apply(DiffOp::Grad).expect("vector map");
            let jac = ExactMatrix::from_rows(eval_matrix(&d, &point));
            if !num_traits::Zero::is_zero(&jac.determinant()) {
                break phi;
            }
        },
    };
    Case { field, point }
}

/// A supplied case: the dimension, one of the fields, and the sample points.
/// Polynomials use the variables `x, y, z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorCase {
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Vec<String>>>,
    pub points: Vec<Vec<String>>,
}

fn parse_matrix(rows: &[Vec<String>], n: usize) -> Result<PolyTensor, CurvatureError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(CurvatureError::Input(format!("expected a {n}x{n} matrix of polynomials")));
    }
    let entries = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_poly(s, n).map_err(|e| CurvatureError::Input(e.to_string()))).collect())
        .collect::<Result<Vec<Vec<_>>, _>>()?;
    Ok(PolyTensor::matrix(entries))
}

impl VectorCase {
    fn cases(&self, input: Input) -> Result<Vec<Case>, CurvatureError> {
        let n = self.dimension;
        let field = match input {
            Input::Map => match &self.phi {
                Some(phi) if phi.len() == n => PolyTensor::vector(
                    phi.iter().map(|s| parse_poly(s, n).map_err(|e| CurvatureError::Input(e.to_string()))).collect::<Result<_, _>>()?,
                ),
                Some(_) => return Err(CurvatureError::Input(format!("phi needs {n} components"))),
                None => return Ok(Vec::new()),
            },
            Input::Metric => match &self.g {
                Some(g) => parse_matrix(g, n)?,
                None => return Ok(Vec::new()),
            },
            Input::Direction => match &self.h {
                Some(h) => parse_matrix(h, n)?,
                None => return Ok(Vec::new()),
            },
        };
        self.points
            .iter()
            .map(|p| {
                if p.len() != n {
                    return Err(CurvatureError::Input(format!("sample point needs {n} coordinates")));
                }
                let point =
                    p.iter().map(|s| parse_rational(s).map_err(|e| CurvatureError::Input(e.to_string()))).collect::<Result<_, _>>()?;
                Ok(Case { field: field.clone(), point })
            })
            .collect()
    }
}

/// Result of one identity in one dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityResult {
    pub check: String,
    pub statement: String,
    pub kind: IdentityKind,
    pub dimension: usize,
    pub cases: usize,
    pub failures: usize,
    pub max_residual: String,
    pub residuals: Vec<String>,
    pub status: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurvatureReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub results: Vec<IdentityResult>,
}

impl CurvatureReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.status == Outcome::Pass)
    }

    pub fn result(&self, check: &str, dimension: usize) -> Option<&IdentityResult> {
        self.results.iter().find(|r| r.check == check && r.dimension == dimension)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityResult> {
        self.results.iter().filter(|r| r.status == Outcome::Fail)
    }
}

fn summarize(id: &Identity, n: usize, cases: &[Case]) -> Result<IdentityResult, CurvatureError> {
    let residuals = cases.iter().map(|c| residual(id, c)).collect::<Result<Vec<_>, _>>()?;
    let failures = residuals.iter().filter(|r| !num_traits::Zero::is_zero(*r)).count();
    let max = residuals.iter().max().cloned().unwrap_or_else(|| int(0));
    Ok(IdentityResult {
        check: id.name.to_string(),
        statement: id.statement.to_string(),
        kind: id.kind,
        dimension: n,
        cases: cases.len(),
        failures,
        max_residual: format_rational(&max),
        residuals: residuals.iter().map(format_rational).collect(),
        status: if failures == 0 { Outcome::Pass } else { Outcome::Fail },
    })
}

/// Runs the selected identities on `cases` seeded random fields per dimension.
pub fn run_seeded(check: &str, seed: u64, cases: usize) -> Result<CurvatureReport, CurvatureError> {
    let mut results = Vec::new();
    for (index, id) in select(check)? {
        for &n in id.dims {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((index * 4 + n) as u64);
            let corpus: Vec<Case> = (0..cases).map(|_| random_case(&mut rng, id.input, n)).collect();
            results.push(summarize(id, n, &corpus)?);
        }
    }
    Ok(CurvatureReport { seed: Some(seed), results })
}

/// Runs the selected identities on supplied test vectors; a case takes part
/// when it supplies the field an identity needs in one of its dimensions.
pub fn run_vectors(check: &str, vectors: &[VectorCase]) -> Result<CurvatureReport, CurvatureError> {
    let mut results = Vec::new();
    for (_, id) in select(check)? {
        for &n in id.dims {
            let mut corpus = Vec::new();
            for v in vectors.iter().filter(|v| v.dimension == n) {
                corpus.extend(v.cases(id.input)?);
            }
            if !corpus.is_empty() {
                results.push(summarize(id, n, &corpus)?);
            }
        }
    }
    if results.is_empty() {
        return Err(CurvatureError::Input(format!("no test vector applies to `{check}`")));
    }
    Ok(CurvatureReport { seed: None, results })
}
