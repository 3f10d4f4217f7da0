//! The strain diagram on Clough-Tocher macros:
//!
//! ```text
//!   Z0 --grad--> Z1 --rot--> Z2
//!                 ^           ^
//!               mskw          I
//!   V0 --grad--> V1 --rot--> V2
//! ```
//!
//! The connector `mskw` is injective but not onto, so the reduced space is
//! `U1 = ker(sskw_h)` with `sskw_h` a discrete left inverse of `mskw`, and
//! the reduced complex `Z0 --def_h--> U1 --rot rot--> V2` is a strain complex.

use num_traits::Zero;

use super::complex::cohomology;
use super::{containment_defect, require_kind, row_containment_defect, selector, span_defect, unisolvence_checks, BggError, Report};
use crate::exactmath::tensor::DiffOp;
use crate::exactmath::{int, ratio, ExactMatrix, ExactScalar, Kernel};
use crate::fespace::{assemble_global, element, functional_matrix, operator_matrix, DofFunctional, FeSpace, Measure};
use crate::mesh::{MacroKind, MacroMesh};

/// Z1 functional indices: vertex `u` entries, vertex `rot u` entries, edge moments.
const U_ENTRIES: std::ops::Range<usize> = 0..4;
const ROT_ENTRIES: std::ops::Range<usize> = 4..6;
const EDGE_MOMENTS: std::ops::Range<usize> = 0..8;
const EDGE_ROT_TANGENT: usize = 8;
const EDGE_ROT_NORMAL: usize = 9;

pub struct StrainDiagram<'m> {
    pub mesh: &'m MacroMesh,
    pub z: [FeSpace<'m>; 3],
    pub v: [FeSpace<'m>; 3],
    pub grad_z: ExactMatrix,
    pub rot_z: ExactMatrix,
    pub grad_v: ExactMatrix,
    pub rot_v: ExactMatrix,
    /// `mskw: V0 → Z1`.
    pub mskw: ExactMatrix,
    /// `I: V1 → Z2`.
    pub identity: ExactMatrix,
    /// `sskw_h: Z1 → V0`.
    pub sskw_h: ExactMatrix,
    /// `U1 = ker sskw_h`, as columns over Z1.
    pub u1: Kernel,
    /// `def_h = (I - mskw sskw_h) grad: Z0 → Z1`, with range in U1.
    pub def_h: ExactMatrix,
}

fn space<'m>(name: &str, mesh: &'m MacroMesh) -> Result<FeSpace<'m>, BggError> {
    Ok(assemble_global(&element(name)?, mesh)?)
}

fn negated(f: &DofFunctional) -> DofFunctional {
    DofFunctional { contraction: f.contraction.iter().map(|c| -c).collect(), ..f.clone() }
}

/// Functionals of a Z1 field giving the V0 DOFs of `sskw_h`: at a vertex the
/// value `sskw u(a)` and the gradient `-rot u(a)`; on an edge `-∫ rot u · n`.
fn sskw_h_functionals(z1: &FeSpace<'_>, m: usize) -> Vec<DofFunctional> {
    let local = &z1.locals[m];
    let mut out = Vec::new();
    for k in 0..local.space.macro_element.corner_count() {
        let Measure::Point { tri, at } = &local.dofs[local.vertex_dof(k, 0)].measure else {
            unreachable!("Z1 vertex DOFs are point values")
        };
        out.push(DofFunctional::point(local.dofs[0].entity, *tri, at.clone(), Some(DiffOp::Sskw), vec![int(1)]));
        for i in ROT_ENTRIES {
            out.push(negated(&local.dofs[local.vertex_dof(k, i)]));
        }
    }
    for k in 0..local.space.macro_element.parent_edges.len() {
        out.push(negated(&local.dofs[local.edge_dof(k, EDGE_ROT_NORMAL)]));
    }
    out
}

/// `sskw_h` written directly in Z1 DOF coordinates.
fn sskw_h_from_dofs(z1: &FeSpace<'_>, v0: &FeSpace<'_>) -> ExactMatrix {
    let mut s = ExactMatrix::zeros(v0.dim(), z1.dim());
    for a in 0..z1.mesh.parent_vertex_count {
        s.set(v0.vertex_dof(a, 0), z1.vertex_dof(a, 1), ratio(1, 2));
        s.set(v0.vertex_dof(a, 0), z1.vertex_dof(a, 2), ratio(-1, 2));
        s.set(v0.vertex_dof(a, 1), z1.vertex_dof(a, ROT_ENTRIES.start), int(-1));
        s.set(v0.vertex_dof(a, 2), z1.vertex_dof(a, ROT_ENTRIES.start + 1), int(-1));
    }
    for r in 0..z1.mesh.parent_edge_count() {
        s.set(v0.edge_dof(r, 0), z1.edge_dof(r, EDGE_ROT_NORMAL), int(-1));
    }
    s
}

/// The U1 functionals as rows over Z1 DOF coordinates: `sym u(a)`, the edge
/// moments of `u`, `∫ rot u · t`, and the bubbles.
fn u1_functionals(z1: &FeSpace<'_>) -> ExactMatrix {
    let n = z1.dim();
    let mut rows = Vec::new();
    let unit = |i: usize, c: ExactScalar| {
        let mut row = vec![ExactScalar::zero(); n];
        row[i] = c;
        row
    };
    for a in 0..z1.mesh.parent_vertex_count {
        rows.push(unit(z1.vertex_dof(a, 0), int(1)));
        let mut sym = unit(z1.vertex_dof(a, 1), ratio(1, 2));
        sym[z1.vertex_dof(a, 2)] = ratio(1, 2);
        rows.push(sym);
        rows.push(unit(z1.vertex_dof(a, 3), int(1)));
    }
    for r in 0..z1.mesh.parent_edge_count() {
        rows.extend(EDGE_MOMENTS.map(|i| unit(z1.edge_dof(r, i), int(1))));
        rows.push(unit(z1.edge_dof(r, EDGE_ROT_TANGENT), int(1)));
    }
    rows.extend(z1.interior_dofs().map(|i| unit(i, int(1))));
    ExactMatrix::from_rows(rows)
}

pub fn build_strain(mesh: &MacroMesh) -> Result<StrainDiagram<'_>, BggError> {
    require_kind(mesh, "strain", MacroKind::CloughTocher)?;
    let z = [space("Z0", mesh)?, space("Z1", mesh)?, space("Z2", mesh)?];
    let v = [space("V0", mesh)?, space("V1", mesh)?, space("V2", mesh)?];
    let grad_z = operator_matrix(Some(DiffOp::Grad), &z[0], &z[1])?;
    let rot_z = operator_matrix(Some(DiffOp::Rot), &z[1], &z[2])?;
    let grad_v = operator_matrix(Some(DiffOp::Grad), &v[0], &v[1])?;
    let rot_v = operator_matrix(Some(DiffOp::Rot), &v[1], &v[2])?;
    let mskw = operator_matrix(Some(DiffOp::Mskw), &v[0], &z[1])?;
    let identity = operator_matrix(None, &v[1], &z[2])?;
    let sskw_h = functional_matrix(&z[1], &v[0], "sskw_h: Z1 -> V0", |m| sskw_h_functionals(&z[1], m))?;
    let u1 = sskw_h.kernel();
    let def_h = &grad_z - &mskw.mul(&sskw_h).mul(&grad_z);
    Ok(StrainDiagram { mesh, z, v, grad_z, rot_z, grad_v, rot_v, mskw, identity, sskw_h, u1, def_h })
}

impl StrainDiagram<'_> {
    /// `rot rot: Z1 → V2`, through the identity connector.
    pub fn rot_rot(&self) -> ExactMatrix {
        self.rot_v.mul(&self.identity.inverse().expect("identity connector")).mul(&self.rot_z)
    }

    /// Pointwise comparison of `sskw_h u` with `sskw u` and `-rot u` at the
    /// macro corners, over every local Z1 basis function; returns the mismatches.
    fn vertex_mismatches(&self) -> usize {
        let (z1, v0) = (&self.z[1], &self.v[0]);
        let mut bad = 0;
        for (m, local) in z1.locals.iter().enumerate() {
            let element = &local.space.macro_element;
            for (j, &g) in z1.local_to_global[m].iter().enumerate() {
                let u = local.dual_field(j);
                let s = v0.local_field(m, &self.sskw_h.column(g));
                for k in 0..element.corner_count() {
                    let t = element.triangle_at_corner(k);
                    let a = &element.points[k];
                    let sk = u.pieces[t].apply(DiffOp::Sskw).expect("matrix field").eval(a);
                    let rot = u.pieces[t].apply(DiffOp::Rot).expect("matrix field").eval(a);
                    let grad = s.pieces[t].apply(DiffOp::Grad).expect("scalar field").eval(a);
                    let value = s.pieces[t].eval(a);
                    if value != sk || grad[0] != -&rot[0] || grad[1] != -&rot[1] {
                        bad += 1;
                    }
                }
            }
        }
        bad
    }

    /// Does some U1 function have a nonzero skew-symmetric part?
    fn has_skew_member(&self) -> bool {
        let z1 = &self.z[1];
        (0..self.u1.dim()).any(|c| {
            let coeffs = self.u1.basis.column(c);
            (0..z1.locals.len()).any(|m| {
                let f = z1.local_field(m, &coeffs);
                !f.apply(DiffOp::Skw).expect("matrix field").is_zero()
            })
        })
    }

    pub fn verify(&self) -> Result<Report, BggError> {
        let [z0, z1, z2] = &self.z;
        let [v0, v1, v2] = &self.v;
        let mut r = Report::new("strain");
        for s in self.z.iter().chain(&self.v) {
            r.space(s);
        }
        let nv = self.mesh.parent_vertex_count;
        let ne = self.mesh.parent_edge_count();
        r.space_entry("U1", self.u1.dim(), 3 * nv, 9 * ne, z1.counts.interior);
        unisolvence_checks(&mut r, &[z0, z1, z2, v0, v1, v2]);

        let chi = self.mesh.euler_characteristic();
        let top = cohomology("Z row", &[z0.dim(), z1.dim(), z2.dim()], &[&self.grad_z, &self.rot_z]);
        let bottom = cohomology("V row", &[v0.dim(), v1.dim(), v2.dim()], &[&self.grad_v, &self.rot_v]);
        r.expect_cohomology(&top, &[2, 0, 0]);
        r.expect_cohomology(&bottom, &[1, 0, 0]);
        r.record("Z row: Euler characteristic", top.euler_characteristic().abs_diff(2 * chi) as usize);
        r.record("V row: Euler characteristic", bottom.euler_characteristic().abs_diff(chi) as usize);

        r.connector("mskw: V0 -> Z1", &self.mskw);
        r.connector("I: V1 -> Z2", &self.identity);
        r.connector("sskw_h: Z1 -> V0", &self.sskw_h);
        r.record("I: V1 and Z2 share the DOF table", usize::from(!v1.same_dof_table(z2)));
        r.record("I is the identity matrix", (&self.identity - &ExactMatrix::identity(z2.dim())).rank());
        r.record("rot mskw = -I grad", (&self.rot_z.mul(&self.mskw) + &self.identity.mul(&self.grad_v)).rank());
        r.record("mskw injective", v0.dim() - self.mskw.rank());
        r.record("mskw not onto Z1", usize::from(self.mskw.rank() == z1.dim()));

        r.record("sskw_h matches the Z1 DOF identities", (&self.sskw_h - &sskw_h_from_dofs(z1, v0)).rank());
        r.record("sskw_h at vertices: value sskw u, gradient -rot u", self.vertex_mismatches());
        r.record("sskw_h mskw = I", (&self.sskw_h.mul(&self.mskw) - &ExactMatrix::identity(v0.dim())).rank());
        r.record("sskw_h onto V0", v0.dim() - self.sskw_h.rank());

        r.record("dim U1 = dim Z1 - dim V0", self.u1.dim().abs_diff(z1.dim() - v0.dim()));
        r.record("U1 has a member with nonzero skew part", usize::from(!self.has_skew_member()));
        let fu = u1_functionals(z1);
        let on_u1 = fu.mul(&self.u1.basis);
        r.record("U1 DOFs unisolvent", fu.rows().abs_diff(self.u1.dim()) + (self.u1.dim() - on_u1.rank()));

        // Every Z1 DOF is determined by the U1 DOFs together with sskw_h = 0.
        let determined = ExactMatrix::vcat(&[&fu, &self.sskw_h]);
        let rank = determined.rank();
        let vertex = |range: std::ops::Range<usize>| (0..nv).flat_map(move |a| range.clone().map(move |i| z1.vertex_dof(a, i)));
        let edge = |range: std::ops::Range<usize>| (0..ne).flat_map(move |e| range.clone().map(move |i| z1.edge_dof(e, i)));
        let steps: [(&str, Vec<usize>); 6] = [
            ("u(a)", vertex(U_ENTRIES).collect()),
            ("rot u(a)", vertex(ROT_ENTRIES).collect()),
            ("edge moments of u", edge(EDGE_MOMENTS).collect()),
            ("edge moment of rot u . t", edge(EDGE_ROT_TANGENT..EDGE_ROT_TANGENT + 1).collect()),
            ("edge moment of rot u . n", edge(EDGE_ROT_NORMAL..EDGE_ROT_NORMAL + 1).collect()),
            ("bubbles", z1.interior_dofs().collect()),
        ];
        for (name, idx) in steps {
            let rows = selector(z1.dim(), idx);
            r.record(format!("U1 DOFs with sskw_h = 0 fix {name}"), row_containment_defect(&determined, rank, &rows));
        }

        r.record("sskw_h def_h = 0", self.sskw_h.mul(&self.def_h).rank());
        r.record("def_h maps into U1", containment_defect(&self.u1.basis, &self.def_h));
        let rr = self.rot_rot();
        r.record("rot rot def_h = 0", rr.mul(&self.def_h).rank());
        r.record("rot rot mskw = 0", rr.mul(&self.mskw).rank());
        let grad_plus_skew = ExactMatrix::hcat(&[&self.grad_z, &self.mskw]);
        r.record("ker rot rot = grad Z0 + mskw V0", span_defect(&rr.kernel().basis, &grad_plus_skew));

        let rr_u = rr.mul(&self.u1.basis);
        let ker_u = self.u1.basis.mul(&rr_u.kernel().basis);
        r.record("ker rot rot on U1 = def_h Z0", span_defect(&ker_u, &self.def_h));
        r.record("rot rot onto V2 from U1", v2.dim() - rr_u.rank());
        match self.u1.coordinates(&self.def_h) {
            Some(def_u) => {
                let reduced = cohomology("reduced strain", &[z0.dim(), self.u1.dim(), v2.dim()], &[&def_u, &rr_u]);
                r.record("reduced strain: d∘d = 0", usize::from(!reduced.is_complex));
                r.record("reduced strain: H^1 = 0", reduced.cohomology[1]);
                r.record("reduced strain: H^2 = 0", reduced.cohomology[2]);
                r.record("reduced strain: Euler characteristic", reduced.euler_characteristic().abs_diff(3 * chi) as usize);
                r.complex(&reduced);
            }
            None => r.record("reduced strain: def_h has coordinates in U1", 1),
        }
        r.complex(&top);
        r.complex(&bottom);
        Ok(r)
    }
}
