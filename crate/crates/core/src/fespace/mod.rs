//! Finite element spaces on macro meshes. A shape space is the kernel of
//! exact continuity constraints on piecewise polynomials; its dual basis comes
//! from the inverse of the unisolvence matrix.

pub mod catalog;
pub mod dof;
pub mod field;
pub mod global;
pub mod local;

use thiserror::Error;

use crate::exactmath::tensor::ShapeError;
use crate::mesh::MacroKind;

pub use catalog::{element, elements_for, Continuity, EdgeDof, ElementDef, Pairing, PointDof, ELEMENT_NAMES};
pub use dof::{DofEntity, DofFunctional, Measure};
pub use field::{Layout, PiecewiseField};
pub use global::{assemble_global, functional_matrix, interpolate_global, operator_matrix, DimsRow, FeSpace, GlobalEntity};
pub use local::{build_local_space, unisolvence_check, DofCounts, LocalElement, LocalSpace, Unisolvence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeError {
    #[error("unknown element `{name}`; valid names: {valid}")]
    UnknownElement { name: String, valid: String },
    #[error("element {element} lives on {expected} macros, got a {got} macro")]
    KindMismatch { element: String, expected: MacroKind, got: MacroKind },
    #[error("element {element}: {rows} constraint rows leave no functions among {coefficients} coefficients")]
    EmptySpace { element: String, rows: usize, coefficients: usize },
    #[error("element {element}: {dofs} functionals of rank {rank} on a space of dimension {dim} are not unisolvent")]
    NotUnisolvent { element: String, dofs: usize, dim: usize, rank: usize },
    #[error("element {element}: {msg}")]
    Definition { element: String, msg: String },
    #[error("element {element}: traces disagree across edge {edge} for global DOF {dof}")]
    TraceMismatch { element: String, edge: usize, dof: usize },
    #[error("{op} of {from} basis function {basis} leaves {to} on macro {macro_index}, sub-triangle {tri}")]
    Membership { op: String, from: String, to: String, basis: usize, macro_index: usize, tri: usize },
    #[error("{what}: macros disagree on shared entry ({row}, {col})")]
    Conformity { what: String, row: usize, col: usize },
    #[error("spaces {from} and {to} live on different meshes")]
    MeshMismatch { from: String, to: String },
    #[error(transparent)]
    Shape(#[from] ShapeError),
}
