//! Diagram chases for the stress and strain BGG diagrams on macro meshes.
//! Every claim is decided by exact ranks; a check carries the rank of its
//! residual, zero when the claim holds.

pub mod complex;
pub mod strain;
pub mod stress;

use serde::Serialize;
use thiserror::Error;

use crate::exactmath::ExactMatrix;
use crate::fespace::{FeError, FeSpace};
use crate::mesh::{MacroKind, MacroMesh};

pub use complex::{cohomology, ComplexReport};
pub use strain::{build_strain, StrainDiagram};
pub use stress::{build_stress, StressDiagram};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BggError {
    #[error("the {diagram} diagram needs {expected} macros, found a {got} macro")]
    WrongMacro { diagram: &'static str, expected: MacroKind, got: MacroKind },
    #[error(transparent)]
    Fe(#[from] FeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DofsEntry {
    pub vertex: usize,
    pub edge: usize,
    pub interior: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpaceEntry {
    pub name: String,
    pub dim: usize,
    pub dofs: DofsEntry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectorEntry {
    pub name: String,
    pub rank: usize,
    pub injective: bool,
    pub surjective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: Status,
    pub residual_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyEntry {
    pub complex: String,
    pub index: usize,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub diagram: String,
    pub spaces: Vec<SpaceEntry>,
    pub connectors: Vec<ConnectorEntry>,
    pub checks: Vec<CheckEntry>,
    pub cohomology: Vec<CohomologyEntry>,
}

impl Report {
    fn new(diagram: &str) -> Self {
        Report { diagram: diagram.to_string(), spaces: Vec::new(), connectors: Vec::new(), checks: Vec::new(), cohomology: Vec::new() }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    fn record(&mut self, name: impl Into<String>, residual_rank: usize) {
        let status = if residual_rank == 0 { Status::Pass } else { Status::Fail };
        self.checks.push(CheckEntry { name: name.into(), status, residual_rank });
    }

    fn space(&mut self, s: &FeSpace<'_>) {
        self.space_entry(s.name(), s.dim(), s.counts.vertex, s.counts.edge, s.counts.interior);
    }

    fn space_entry(&mut self, name: &str, dim: usize, vertex: usize, edge: usize, interior: usize) {
        self.spaces.push(SpaceEntry { name: name.to_string(), dim, dofs: DofsEntry { vertex, edge, interior } });
    }

    fn connector(&mut self, name: &str, m: &ExactMatrix) {
        let rank = m.rank();
        self.connectors.push(ConnectorEntry { name: name.to_string(), rank, injective: rank == m.cols(), surjective: rank == m.rows() });
    }

    fn complex(&mut self, c: &ComplexReport) {
        for (index, &dim) in c.cohomology.iter().enumerate() {
            self.cohomology.push(CohomologyEntry { complex: c.name.clone(), index, dim });
        }
    }

    /// Records that the cohomology of `c` equals `expected`, and that `c` is a complex.
    fn expect_cohomology(&mut self, c: &ComplexReport, expected: &[usize]) {
        self.record(format!("{}: d∘d = 0", c.name), usize::from(!c.is_complex));
        for (k, (&h, &e)) in c.cohomology.iter().zip(expected).enumerate() {
            self.record(format!("{}: H^{k} = {e}", c.name), h.abs_diff(e));
        }
    }
}

/// Ranks by which `span(a)` and `span(b)` each fail to contain the other.
pub fn span_defect(a: &ExactMatrix, b: &ExactMatrix) -> usize {
    let joint = ExactMatrix::hcat(&[a, b]).rank();
    (joint - a.rank()) + (joint - b.rank())
}

/// Rank by which `span(b)` fails to lie in `span(a)`.
pub fn containment_defect(a: &ExactMatrix, b: &ExactMatrix) -> usize {
    ExactMatrix::hcat(&[a, b]).rank() - a.rank()
}

/// Rank by which the rows of `b` fail to lie in the row space of `a`, given `rank(a)`.
fn row_containment_defect(a: &ExactMatrix, rank_a: usize, b: &ExactMatrix) -> usize {
    ExactMatrix::vcat(&[a, b]).rank() - rank_a
}

fn require_kind(mesh: &MacroMesh, diagram: &'static str, expected: MacroKind) -> Result<(), BggError> {
    match mesh.macros.iter().find(|c| c.element.kind != expected) {
        Some(c) => Err(BggError::WrongMacro { diagram, expected, got: c.element.kind }),
        None => Ok(()),
    }
}

/// Records one unisolvence check per element: on every macro the functionals
/// applied to the shape basis form a nonsingular square matrix.
fn unisolvence_checks(report: &mut Report, spaces: &[&FeSpace<'_>]) {
    for s in spaces {
        let mut residual = 0;
        for local in &s.locals {
            let m = local.dof_matrix.mul(&local.space.basis);
            residual += if m.rows() != m.cols() {
                m.rows().abs_diff(m.cols()).max(1)
            } else if num_traits::Zero::is_zero(&m.determinant()) {
                m.cols() - m.rank()
            } else {
                0
            };
        }
        report.record(format!("{} unisolvent", s.name()), residual);
    }
}

/// Rows of the identity at the given indices.
fn selector(n: usize, indices: impl IntoIterator<Item = usize>) -> ExactMatrix {
    let idx: Vec<usize> = indices.into_iter().collect();
    let mut m = ExactMatrix::zeros(idx.len(), n);
    for (r, &c) in idx.iter().enumerate() {
        m.set(r, c, crate::exactmath::int(1));
    }
    m
}
