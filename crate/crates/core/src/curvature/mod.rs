//! Pointwise-exact nonlinear curvature (metric change, Riemann, Ricci, the
//! contracted Bianchi operator) and the linearized operators around the
//! Euclidean metric.

pub mod field;
pub mod linear;
pub mod riemann;
pub mod suite;

use thiserror::Error;

pub use field::{Dual, Field};
pub use linear::{iota, linearize_at, linearize_ric, riemann4_identity, Linearized};
pub use riemann::{bianchi_at, curvature_at, ricci_jet, symmetry_defects, CurvatureValues, MetricJet, SymJet};
pub use suite::{identity_names, run_seeded, run_vectors, CurvatureReport, IdentityKind, IdentityResult, Outcome, VectorCase};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurvatureError {
    #[error("metric is not positive definite at the point (leading minor {minor})")]
    NotPositiveDefinite { minor: usize },
    #[error("{0} is not symmetric")]
    NonSymmetric(String),
    #[error("jet of order {got} given, order {needed} needed")]
    JetOrder { needed: usize, got: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("unknown check `{name}`; valid checks: all, {valid}")]
    UnknownCheck { name: String, valid: String },
    #[error("invalid test vector: {0}")]
    Input(String),
}
