//! Global spaces on a macro mesh and exact operator matrices between them.

use std::collections::HashMap;

use num_traits::Zero;

use super::catalog::ElementDef;
use super::dof::DofFunctional;
use super::field::PiecewiseField;
use super::local::{jump_functionals, DofCounts, LocalElement};
use super::FeError;
use crate::exactmath::matrix::ExactMatrix;
use crate::exactmath::scalar::ExactScalar;
use crate::exactmath::tensor::{DiffOp, PolyTensor};
use crate::mesh::{MacroKind, MacroMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GlobalEntity {
    Vertex(usize),
    Edge(usize),
    Interior(usize),
}

/// A conforming global space. DOFs are numbered vertex by vertex, then
/// parent edge by parent edge (increasing global id), then macro by macro.
#[derive(Debug, Clone)]
pub struct FeSpace<'m> {
    pub def: ElementDef,
    pub mesh: &'m MacroMesh,
    pub locals: Vec<LocalElement>,
    pub local_to_global: Vec<Vec<usize>>,
    pub entities: Vec<GlobalEntity>,
    pub counts: DofCounts,
}

impl<'m> FeSpace<'m> {
    pub fn dim(&self) -> usize {
        self.entities.len()
    }

    pub fn name(&self) -> &str {
        &self.def.name
    }

    /// Does `other` carry the identical DOF table on the same mesh?
    pub fn same_dof_table(&self, other: &FeSpace<'_>) -> bool {
        (std::ptr::eq(self.mesh, other.mesh) || self.mesh == other.mesh)
            && self.def.same_space(&other.def)
            && self.local_to_global == other.local_to_global
            && self.entities == other.entities
    }

    /// Global index of the `i`-th functional at parent vertex `v`.
    pub fn vertex_dof(&self, v: usize, i: usize) -> usize {
        v * self.def.vertex_dofs.len() + i
    }

    /// Global index of the `i`-th functional on the `r`-th parent edge (by increasing edge id).
    pub fn edge_dof(&self, r: usize, i: usize) -> usize {
        self.counts.vertex + r * self.def.edge_dofs.len() + i
    }

    /// Global indices of the interior DOFs of every macro, in order.
    pub fn interior_dofs(&self) -> std::ops::Range<usize> {
        self.counts.vertex + self.counts.edge..self.dim()
    }

    /// The field of a global coefficient vector restricted to one macro.
    pub fn local_field(&self, m: usize, coeffs: &[ExactScalar]) -> PiecewiseField {
        let local = &self.locals[m];
        let local_coeffs: Vec<ExactScalar> = self.local_to_global[m].iter().map(|&g| coeffs[g].clone()).collect();
        local.space.layout.field(&local.dual.mul_vec(&local_coeffs))
    }

    /// Global basis function `g` on macro `m` (zero when `g` is not supported there).
    pub fn basis_on_macro(&self, g: usize, m: usize) -> PiecewiseField {
        let mut e = vec![ExactScalar::zero(); self.dim()];
        e[g] = ExactScalar::from_integer(1.into());
        self.local_field(m, &e)
    }
}

/// Builds the global space and re-verifies continuity across every parent
/// edge shared by two macros.
pub fn assemble_global<'m>(def: &ElementDef, mesh: &'m MacroMesh) -> Result<FeSpace<'m>, FeError> {
    for cell in &mesh.macros {
        if cell.element.kind != def.macro_kind {
            return Err(FeError::KindMismatch { element: def.name.clone(), expected: def.macro_kind, got: cell.element.kind });
        }
    }
    let locals = mesh.macros.iter().map(|cell| LocalElement::build(def, &cell.element)).collect::<Result<Vec<_>, _>>()?;
    let interior = locals[0].counts.interior;
    if let Some(l) = locals.iter().find(|l| l.counts.interior != interior) {
        return Err(FeError::Definition {
            element: def.name.clone(),
            msg: format!("bubble dimension varies between macros ({interior} vs {})", l.counts.interior),
        });
    }

    let per_vertex = def.vertex_dofs.len();
    let per_edge = def.edge_dofs.len();
    let parent_edges = mesh.parent_edge_ids();
    let mut edge_rank = vec![usize::MAX; mesh.edges.len()];
    for (i, &e) in parent_edges.iter().enumerate() {
        edge_rank[e] = i;
    }
    let nv = mesh.parent_vertex_count;
    let edge_base = nv * per_vertex;
    let interior_base = edge_base + parent_edges.len() * per_edge;

    let mut entities = Vec::new();
    for v in 0..nv {
        entities.extend(std::iter::repeat_n(GlobalEntity::Vertex(v), per_vertex));
    }
    for &e in &parent_edges {
        entities.extend(std::iter::repeat_n(GlobalEntity::Edge(e), per_edge));
    }
    for m in 0..mesh.macros.len() {
        entities.extend(std::iter::repeat_n(GlobalEntity::Interior(m), interior));
    }

    let local_to_global = mesh
        .macros
        .iter()
        .enumerate()
        .map(|(m, cell)| {
            let mut map = Vec::with_capacity(locals[m].dim());
            for k in 0..cell.element.corner_count() {
                map.extend((0..per_vertex).map(|i| cell.vertices[k] * per_vertex + i));
            }
            for &e in &cell.parent_edges {
                map.extend((0..per_edge).map(|i| edge_base + edge_rank[e] * per_edge + i));
            }
            map.extend((0..interior).map(|i| interior_base + m * interior + i));
            map
        })
        .collect();

    let space = FeSpace {
        def: def.clone(),
        mesh,
        locals,
        local_to_global,
        entities,
        counts: DofCounts { vertex: nv * per_vertex, edge: parent_edges.len() * per_edge, interior: interior * mesh.macros.len() },
    };
    verify_interfaces(&space)?;
    Ok(space)
}

fn verify_interfaces(space: &FeSpace<'_>) -> Result<(), FeError> {
    let mesh = space.mesh;
    for (e, a, b) in mesh.interfaces() {
        let [p, q] = mesh.edges[e].ends;
        let (p, q) = (&mesh.vertices[p], &mesh.vertices[q]);
        let (la, lb) = (&space.locals[a.macro_index], &space.locals[b.macro_index]);
        let ta = mesh.macros[a.macro_index].element.triangle_at_parent_edge(a.local_edge);
        let tb = mesh.macros[b.macro_index].element.triangle_at_parent_edge(b.local_edge);
        for &cont in &space.def.continuity {
            for (fa, fb) in jump_functionals(cont, &space.def, (p, q), (ta, tb)) {
                let va = ExactMatrix::from_rows(vec![fa.row(&la.space.layout)]).mul(&la.dual);
                let vb = ExactMatrix::from_rows(vec![fb.row(&lb.space.layout)]).mul(&lb.dual);
                let mut jump: HashMap<usize, ExactScalar> = HashMap::new();
                for (l, &g) in space.local_to_global[a.macro_index].iter().enumerate() {
                    *jump.entry(g).or_insert_with(ExactScalar::zero) += va.get(0, l);
                }
                for (l, &g) in space.local_to_global[b.macro_index].iter().enumerate() {
                    *jump.entry(g).or_insert_with(ExactScalar::zero) -= vb.get(0, l);
                }
                if let Some((&g, _)) = jump.iter().filter(|(_, v)| !v.is_zero()).min_by_key(|(g, _)| **g) {
                    return Err(FeError::TraceMismatch { element: space.def.name.clone(), edge: e, dof: g });
                }
            }
        }
    }
    Ok(())
}

/// Global sparse matrix whose shared entries must agree between macros.
struct Assembler {
    rows: usize,
    cols: usize,
    entries: HashMap<(usize, usize), ExactScalar>,
}

impl Assembler {
    fn new(rows: usize, cols: usize) -> Self {
        Assembler { rows, cols, entries: HashMap::new() }
    }

    fn set(&mut self, r: usize, c: usize, v: ExactScalar) -> Result<(), (usize, usize)> {
        match self.entries.get(&(r, c)) {
            Some(old) if *old != v => Err((r, c)),
            Some(_) => Ok(()),
            None => {
                self.entries.insert((r, c), v);
                Ok(())
            }
        }
    }

    fn finish(self) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.rows, self.cols);
        for ((r, c), v) in self.entries {
            if !v.is_zero() {
                m.set(r, c, v);
            }
        }
        m
    }
}

fn check_same_mesh(a: &FeSpace<'_>, b: &FeSpace<'_>) -> Result<(), FeError> {
    if std::ptr::eq(a.mesh, b.mesh) || a.mesh == b.mesh {
        Ok(())
    } else {
        Err(FeError::MeshMismatch { from: a.def.name.clone(), to: b.def.name.clone() })
    }
}

fn assemble_local(
    source: &FeSpace<'_>,
    target: &FeSpace<'_>,
    what: &str,
    local: impl Fn(usize) -> Result<ExactMatrix, FeError>,
) -> Result<ExactMatrix, FeError> {
    let mut asm = Assembler::new(target.dim(), source.dim());
    for m in 0..source.mesh.macros.len() {
        let block = local(m)?;
        for (t, &gt) in target.local_to_global[m].iter().enumerate() {
            for (s, &gs) in source.local_to_global[m].iter().enumerate() {
                asm.set(gt, gs, block.get(t, s).clone()).map_err(|(row, col)| FeError::Conformity { what: what.to_string(), row, col })?;
            }
        }
    }
    Ok(asm.finish())
}

/// Matrix of `op` (or the inclusion when `op` is `None`) from `source` to
/// `target`. Every image is checked to lie in the target space exactly.
pub fn operator_matrix(op: Option<DiffOp>, source: &FeSpace<'_>, target: &FeSpace<'_>) -> Result<ExactMatrix, FeError> {
    check_same_mesh(source, target)?;
    let op_name = op.map(|o| o.name()).unwrap_or("inclusion");
    let out_shape = match op {
        Some(o) => o.output_shape(source.def.shape, 2).map_err(FeError::Shape)?,
        None => source.def.shape,
    };
    if out_shape != target.def.shape {
        return Err(FeError::Definition {
            element: target.def.name.clone(),
            msg: format!("{op_name} of {} has shape {out_shape}, target has {}", source.def.name, target.def.shape),
        });
    }
    let what = format!("{op_name}: {} -> {}", source.def.name, target.def.name);
    assemble_local(source, target, &what, |m| {
        let (src, tgt) = (&source.locals[m], &target.locals[m]);
        let images = src.apply(op);
        let mut cols = Vec::with_capacity(images.len());
        for (s, img) in images.iter().enumerate() {
            let leak = |tri: usize| FeError::Membership {
                op: op_name.to_string(),
                from: source.def.name.clone(),
                to: target.def.name.clone(),
                basis: source.local_to_global[m][s],
                macro_index: m,
                tri,
            };
            let coeffs = tgt.space.layout.coefficients(img).map_err(|l| leak(l.tri))?;
            let (values, exact) = tgt.interpolate(&coeffs);
            if !exact {
                return Err(leak(tgt.leak_triangle(&coeffs).unwrap_or(0)));
            }
            cols.push(values);
        }
        Ok(ExactMatrix::from_columns(tgt.dim(), &cols))
    })
}

/// Matrix sending a source function to target DOF values prescribed by
/// functionals of the source field. `rows(m)` lists one functional per local
/// target DOF on macro `m`.
pub fn functional_matrix(
    source: &FeSpace<'_>,
    target: &FeSpace<'_>,
    name: &str,
    rows: impl Fn(usize) -> Vec<DofFunctional>,
) -> Result<ExactMatrix, FeError> {
    check_same_mesh(source, target)?;
    assemble_local(source, target, name, |m| {
        let src = &source.locals[m];
        let funcs = rows(m);
        assert_eq!(funcs.len(), target.locals[m].dim(), "one functional per target DOF");
        let f = ExactMatrix::from_rows(funcs.iter().map(|d| d.row(&src.space.layout)).collect());
        Ok(f.mul(&src.dual))
    })
}

/// One row of the dimension table.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct DimsRow {
    pub element: String,
    pub macro_kind: String,
    pub local_dim: usize,
    pub vertex_dofs: usize,
    pub edge_dofs: usize,
    pub interior_dofs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub global_dim: Option<usize>,
}

impl DimsRow {
    pub fn of(local: &LocalElement, kind: MacroKind, global_dim: Option<usize>) -> Self {
        DimsRow {
            element: local.def.name.clone(),
            macro_kind: kind.name().to_string(),
            local_dim: local.dim(),
            vertex_dofs: local.counts.vertex,
            edge_dofs: local.counts.edge,
            interior_dofs: local.counts.interior,
            global_dim,
        }
    }
}

/// Global DOF values of a polynomial field defined on the whole mesh. Fails
/// when the field is not in the space or when macros disagree on a shared DOF.
pub fn interpolate_global(space: &FeSpace<'_>, field: &PolyTensor) -> Result<Vec<ExactScalar>, FeError> {
    let mut values: Vec<Option<ExactScalar>> = vec![None; space.dim()];
    for (m, local) in space.locals.iter().enumerate() {
        let layout = &local.space.layout;
        let leak = |tri| FeError::Membership {
            op: "interpolation".into(),
            from: "polynomial field".into(),
            to: space.def.name.clone(),
            basis: 0,
            macro_index: m,
            tri,
        };
        let coeffs = layout.coefficients(&PiecewiseField::uniform(layout.ntri, field.clone())).map_err(|l| leak(l.tri))?;
        let (local_values, exact) = local.interpolate(&coeffs);
        if !exact {
            return Err(leak(local.leak_triangle(&coeffs).unwrap_or(0)));
        }
        for (l, v) in local_values.into_iter().enumerate() {
            let g = space.local_to_global[m][l];
            match &values[g] {
                Some(old) if *old != v => {
                    return Err(FeError::Conformity { what: format!("interpolation into {}", space.def.name), row: g, col: 0 });
                }
                _ => values[g] = Some(v),
            }
        }
    }
    Ok(values.into_iter().map(|v| v.expect("every DOF belongs to some macro")).collect())
}
