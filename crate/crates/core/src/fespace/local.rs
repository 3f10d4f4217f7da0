//! Local shape spaces on one macro, their degrees of freedom and dual bases.

use num_traits::Zero;

use super::catalog::{Continuity, ElementDef, Pairing};
use super::dof::{edge_weight, functional_rows, unit_vector, DofEntity, DofFunctional};
use super::field::{Layout, PiecewiseField};
use super::FeError;
use crate::exactmath::matrix::{primitive, ExactMatrix};
use crate::exactmath::scalar::{int, ratio, ExactScalar};
use crate::exactmath::tensor::{DiffOp, Shape};
use crate::mesh::{EdgeFrame, MacroElement, Point};

/// The constrained piecewise polynomial space on one macro; the basis is
/// stored as columns over the layout's coefficients.
#[derive(Debug, Clone)]
pub struct LocalSpace {
    pub element: String,
    pub macro_element: MacroElement,
    pub layout: Layout,
    pub basis: ExactMatrix,
    pub constraint_rows: usize,
    pub constraint_rank: usize,
}

impl LocalSpace {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis_field(&self, i: usize) -> PiecewiseField {
        self.layout.field(&self.basis.column(i))
    }

    /// Is the field a member of this space (exactly)?
    pub fn contains(&self, f: &PiecewiseField) -> bool {
        match self.layout.coefficients(f) {
            Ok(c) => self.basis.column_span_contains(&ExactMatrix::from_columns(c.len(), &[c])),
            Err(_) => false,
        }
    }
}

fn interp_point(a: &Point, b: &Point, t: &ExactScalar) -> Point {
    [&a[0] + t * (&b[0] - &a[0]), &a[1] + t * (&b[1] - &a[1])]
}

/// Points that determine a polynomial of the given degree along a segment.
fn segment_points(a: &Point, b: &Point, degree: u32) -> Vec<Point> {
    if degree == 0 {
        return vec![interp_point(a, b, &ratio(1, 2))];
    }
    (0..=degree).map(|j| interp_point(a, b, &ratio(j as i64, degree as i64))).collect()
}

fn pairing_contraction(pairing: Pairing, shape: Shape, frame: &EdgeFrame) -> Vec<ExactScalar> {
    let mut c = vec![ExactScalar::zero(); shape.len()];
    match pairing {
        Pairing::Entry(e) => c[e] = int(1),
        Pairing::Normal { column } | Pairing::Tangent { column } => {
            let dir = if matches!(pairing, Pairing::Normal { .. }) { &frame.normal } else { &frame.tangent };
            for i in 0..shape.rows {
                c[i * shape.cols + column] = dir[i].clone();
            }
        }
    }
    c
}

/// Pairs of point functionals `(side a, side b)` whose differences vanish
/// exactly when the continuity condition holds along the segment `p q`.
pub fn jump_functionals(
    cont: Continuity,
    def: &ElementDef,
    (p, q): (&Point, &Point),
    (tri_a, tri_b): (usize, usize),
) -> Vec<(DofFunctional, DofFunctional)> {
    let frame = EdgeFrame::of(p, q);
    let (op, out_shape, degree) = match cont {
        Continuity::Value | Continuity::NormalComponent => (None, def.shape, def.degree),
        Continuity::Derived(op) => {
            let shape = op.output_shape(def.shape, 2).expect("catalog operator fits the element shape");
            (Some(op), shape, def.degree.saturating_sub(op.order()))
        }
    };
    let contractions: Vec<Vec<ExactScalar>> = match cont {
        Continuity::NormalComponent => {
            (0..out_shape.cols).map(|c| pairing_contraction(Pairing::Normal { column: c }, out_shape, &frame)).collect()
        }
        _ => (0..out_shape.len()).map(|e| unit_vector(out_shape.len(), e)).collect(),
    };
    let mut out = Vec::new();
    for x in segment_points(p, q, degree) {
        for c in &contractions {
            let a = DofFunctional::point(DofEntity::Interior, tri_a, x.clone(), op, c.clone());
            let b = DofFunctional::point(DofEntity::Interior, tri_b, x.clone(), op, c.clone());
            out.push((a, b));
        }
    }
    out
}

/// Builds the shape space of `def` on `element` as the kernel of its constraints.
pub fn build_local_space(def: &ElementDef, element: &MacroElement) -> Result<LocalSpace, FeError> {
    let layout = Layout::new(element.face_count(), def.shape, def.degree);
    let mut rows: Vec<Vec<ExactScalar>> = Vec::new();
    for (k, edge) in element.interior_edges.iter().enumerate() {
        let (p, q) = (&element.points[edge[0]], &element.points[edge[1]]);
        let tris = element.triangles_at_interior_edge(k);
        for &cont in &def.continuity {
            for (a, b) in jump_functionals(cont, def, (p, q), tris) {
                let ra = a.row(&layout);
                let rb = b.row(&layout);
                rows.push(ra.iter().zip(&rb).map(|(x, y)| x - y).collect());
            }
        }
    }
    if def.singular_vertex_relation {
        if def.shape != Shape::SCALAR || element.face_count() != 4 {
            return Err(FeError::Definition {
                element: def.name.clone(),
                msg: "the singular-vertex relation needs a scalar field on a criss-cross macro".into(),
            });
        }
        let z = element.split_point().expect("criss-cross split").clone();
        let mut row = vec![ExactScalar::zero(); layout.len()];
        for t in 0..4 {
            let f = DofFunctional::point(DofEntity::Interior, t, z.clone(), None, vec![int(1)]);
            let sign = if t % 2 == 0 { int(1) } else { int(-1) };
            for (r, v) in row.iter_mut().zip(f.row(&layout)) {
                *r += &sign * v;
            }
        }
        rows.push(row);
    }
    let constraint_rows = rows.len();
    let (basis, rank) = if rows.is_empty() {
        (ExactMatrix::identity(layout.len()), 0)
    } else {
        let r = ExactMatrix::from_rows(rows);
        (r.nullspace_matrix(), r.rank())
    };
    if basis.cols() == 0 {
        return Err(FeError::EmptySpace { element: def.name.clone(), rows: constraint_rows, coefficients: layout.len() });
    }
    Ok(LocalSpace { element: def.name.clone(), macro_element: element.clone(), layout, basis, constraint_rows, constraint_rank: rank })
}

/// Vertex and edge functionals of `def` on `element` (local entity order).
pub fn vertex_edge_dofs(def: &ElementDef, element: &MacroElement) -> Vec<DofFunctional> {
    let mut out = Vec::new();
    for k in 0..element.corner_count() {
        let tri = element.triangle_at_corner(k);
        for (i, d) in def.vertex_dofs.iter().enumerate() {
            let shape = match d.op {
                Some(op) => op.output_shape(def.shape, 2).expect("catalog operator fits"),
                None => def.shape,
            };
            out.push(
                DofFunctional::point(DofEntity::Vertex(k), tri, element.points[k].clone(), d.op, unit_vector(shape.len(), d.entry))
                    .with_label(format!("{} vertex {k} #{i}", def.name)),
            );
        }
    }
    for k in 0..element.parent_edges.len() {
        let tri = element.triangle_at_parent_edge(k);
        let (from, to) = element.parent_edge_points(k);
        let frame = EdgeFrame::of(from, to);
        for (i, d) in def.edge_dofs.iter().enumerate() {
            let shape = match d.op {
                Some(op) => op.output_shape(def.shape, 2).expect("catalog operator fits"),
                None => def.shape,
            };
            out.push(
                DofFunctional::edge(
                    DofEntity::Edge(k),
                    tri,
                    (from.clone(), to.clone()),
                    d.op,
                    pairing_contraction(d.pairing, shape, &frame),
                    edge_weight(d.weight),
                )
                .with_label(format!("{} edge {k} #{i}", def.name)),
            );
        }
    }
    out
}

/// Moments against a basis of the space's subspace annihilated by `dofs`.
pub fn bubble_dofs(space: &LocalSpace, dofs: &[DofFunctional]) -> Vec<DofFunctional> {
    let coeff_dim = space.layout.len();
    let kernel = if dofs.is_empty() {
        ExactMatrix::identity(space.dim())
    } else {
        let f = ExactMatrix::from_rows(functional_rows(dofs, &space.layout));
        f.mul(&space.basis).nullspace_matrix()
    };
    let bubbles = space.basis.mul(&kernel);
    let element = &space.macro_element;
    let triangles: Vec<[Point; 3]> = (0..element.face_count())
        .map(|t| {
            let [a, b, c] = element.triangle_points(t);
            [a.clone(), b.clone(), c.clone()]
        })
        .collect();
    (0..bubbles.cols())
        .map(|j| {
            let field = space.layout.field(&primitive(bubbles.column(j)));
            debug_assert_eq!(bubbles.rows(), coeff_dim);
            DofFunctional::interior(triangles.clone(), field.pieces).with_label(format!("{} bubble #{j}", space.element))
        })
        .collect()
}

/// Outcome of applying a functional set to a shape space.
#[derive(Debug, Clone)]
pub struct Unisolvence {
    pub ok: bool,
    pub dofs: usize,
    pub dim: usize,
    pub rank: usize,
    /// Functional values on the space basis, `dofs × dim`.
    pub matrix: ExactMatrix,
}

impl Unisolvence {
    /// Exact determinant of the square unisolvence matrix (zero when not square).
    pub fn determinant(&self) -> ExactScalar {
        if self.dofs != self.dim {
            return ExactScalar::zero();
        }
        self.matrix.determinant()
    }
}

pub fn unisolvence_check(space: &LocalSpace, dofs: &[DofFunctional]) -> Unisolvence {
    let rows = if dofs.is_empty() {
        ExactMatrix::zeros(0, space.layout.len())
    } else {
        ExactMatrix::from_rows(functional_rows(dofs, &space.layout))
    };
    unisolvence_of_rows(space, &rows)
}

fn unisolvence_of_rows(space: &LocalSpace, rows: &ExactMatrix) -> Unisolvence {
    let matrix = rows.mul(&space.basis);
    let rank = matrix.rank();
    let dofs = rows.rows();
    Unisolvence { ok: dofs == space.dim() && rank == space.dim(), dofs, dim: space.dim(), rank, matrix }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DofCounts {
    pub vertex: usize,
    pub edge: usize,
    pub interior: usize,
}

impl DofCounts {
    pub fn total(&self) -> usize {
        self.vertex + self.edge + self.interior
    }
}

/// A unisolvent local element: space, functionals (vertex, edge, interior
/// order) and the dual basis.
#[derive(Debug, Clone)]
pub struct LocalElement {
    pub def: ElementDef,
    pub space: LocalSpace,
    pub dofs: Vec<DofFunctional>,
    /// Functionals as rows over the coefficients.
    pub dof_matrix: ExactMatrix,
    /// Dual basis as columns over the coefficients.
    pub dual: ExactMatrix,
    pub counts: DofCounts,
}

impl LocalElement {
    pub fn build(def: &ElementDef, element: &MacroElement) -> Result<LocalElement, FeError> {
        if def.macro_kind != element.kind {
            return Err(FeError::KindMismatch { element: def.name.clone(), expected: def.macro_kind, got: element.kind });
        }
        let space = build_local_space(def, element)?;
        let mut dofs = vertex_edge_dofs(def, element);
        let ve = dofs.len();
        let boundary_check = unisolvence_check(&space, &dofs);
        if boundary_check.rank < ve {
            return Err(FeError::NotUnisolvent { element: def.name.clone(), dofs: ve, dim: space.dim(), rank: boundary_check.rank });
        }
        dofs.extend(bubble_dofs(&space, &dofs));
        let dof_matrix = ExactMatrix::from_rows(functional_rows(&dofs, &space.layout));
        let check = unisolvence_of_rows(&space, &dof_matrix);
        if !check.ok {
            return Err(FeError::NotUnisolvent { element: def.name.clone(), dofs: check.dofs, dim: check.dim, rank: check.rank });
        }
        let inv = check.matrix.inverse().expect("nonsingular by the rank check");
        let dual = space.basis.mul(&inv);
        let counts = DofCounts {
            vertex: def.vertex_dofs.len() * element.corner_count(),
            edge: def.edge_dofs.len() * element.parent_edges.len(),
            interior: dofs.len() - ve,
        };
        Ok(LocalElement { def: def.clone(), space, dofs, dof_matrix, dual, counts })
    }

    pub fn dim(&self) -> usize {
        self.dual.cols()
    }

    pub fn dual_field(&self, j: usize) -> PiecewiseField {
        self.space.layout.field(&self.dual.column(j))
    }

    /// DOF values of a field, and whether the field is reproduced exactly by
    /// its dual-basis expansion (i.e. belongs to the space).
    pub fn interpolate(&self, coeffs: &[ExactScalar]) -> (Vec<ExactScalar>, bool) {
        let values = self.dof_matrix.mul_vec(coeffs);
        let back = self.dual.mul_vec(&values);
        let exact = back.as_slice() == coeffs;
        (values, exact)
    }

    /// First sub-triangle where the dual expansion of a field differs from it.
    pub fn leak_triangle(&self, coeffs: &[ExactScalar]) -> Option<usize> {
        let (values, _) = self.interpolate(coeffs);
        let back = self.dual.mul_vec(&values);
        let layout = &self.space.layout;
        let per_tri = layout.entries() * layout.monomials.len();
        (0..layout.ntri).find(|&t| back[t * per_tri..(t + 1) * per_tri] != coeffs[t * per_tri..(t + 1) * per_tri])
    }

    /// Local indices of the interior DOFs.
    pub fn interior_range(&self) -> std::ops::Range<usize> {
        self.counts.vertex + self.counts.edge..self.dofs.len()
    }

    /// Local DOF index of the `i`-th functional on corner `k`.
    pub fn vertex_dof(&self, k: usize, i: usize) -> usize {
        k * self.def.vertex_dofs.len() + i
    }

    /// Local DOF index of the `i`-th functional on parent edge `k`.
    pub fn edge_dof(&self, k: usize, i: usize) -> usize {
        self.counts.vertex + k * self.def.edge_dofs.len() + i
    }

    /// Applies an operator to each dual basis function, giving fields.
    pub fn apply(&self, op: Option<DiffOp>) -> Vec<PiecewiseField> {
        (0..self.dim())
            .map(|j| {
                let f = self.dual_field(j);
                match op {
                    Some(op) => f.apply(op).expect("operator fits by construction"),
                    None => f,
                }
            })
            .collect()
    }
}
