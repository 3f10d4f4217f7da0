//! The stress diagram on criss-cross macros:
//!
//! ```text
//!   W0 --curl--> W1 --div--> W2
//!                 ^           ^
//!                 I       -2 sskw
//!   Y0 --curl--> Y1 --div--> Y2
//! ```
//!
//! Its derived complex `W0 --curl curl--> ker(-2 sskw) --div--> Y2` is an
//! Airy stress complex.

use super::{complex::cohomology, require_kind, selector, unisolvence_checks, BggError, Report};
use crate::exactmath::poly::MultiPoly;
use crate::exactmath::tensor::{DiffOp, PolyTensor};
use crate::exactmath::{int, ExactMatrix, Kernel};
use crate::fespace::{assemble_global, element, interpolate_global, operator_matrix, FeSpace};
use crate::mesh::{MacroKind, MacroMesh};

pub struct StressDiagram<'m> {
    pub mesh: &'m MacroMesh,
    pub w: [FeSpace<'m>; 3],
    pub y: [FeSpace<'m>; 3],
    pub curl_w: ExactMatrix,
    pub div_w: ExactMatrix,
    pub curl_y: ExactMatrix,
    pub div_y: ExactMatrix,
    /// `I: Y0 → W1`.
    pub identity: ExactMatrix,
    /// `-2 sskw: Y1 → W2`.
    pub skew: ExactMatrix,
}

fn space<'m>(name: &str, mesh: &'m MacroMesh) -> Result<FeSpace<'m>, BggError> {
    Ok(assemble_global(&element(name)?, mesh)?)
}

pub fn build_stress(mesh: &MacroMesh) -> Result<StressDiagram<'_>, BggError> {
    require_kind(mesh, "stress", MacroKind::CrissCross)?;
    let w = [space("W0", mesh)?, space("W1", mesh)?, space("W2", mesh)?];
    let y = [space("Y0", mesh)?, space("Y1", mesh)?, space("Y2", mesh)?];
    let curl_w = operator_matrix(Some(DiffOp::Curl), &w[0], &w[1])?;
    let div_w = operator_matrix(Some(DiffOp::Div), &w[1], &w[2])?;
    let curl_y = operator_matrix(Some(DiffOp::Curl), &y[0], &y[1])?;
    let div_y = operator_matrix(Some(DiffOp::Div), &y[1], &y[2])?;
    let identity = operator_matrix(None, &y[0], &w[1])?;
    let skew = operator_matrix(Some(DiffOp::Sskw), &y[1], &w[2])?.scale(&int(-2));
    Ok(StressDiagram { mesh, w, y, curl_w, div_w, curl_y, div_y, identity, skew })
}

/// Interpolants of `1, x, y`.
fn linear_fields(space: &FeSpace<'_>) -> Result<ExactMatrix, BggError> {
    let fields = [MultiPoly::one(2), MultiPoly::var(2, 0), MultiPoly::var(2, 1)];
    let cols = fields.into_iter().map(|p| interpolate_global(space, &PolyTensor::scalar(p))).collect::<Result<Vec<_>, _>>()?;
    Ok(ExactMatrix::from_columns(space.dim(), &cols))
}

impl StressDiagram<'_> {
    pub fn kernel_of_skew(&self) -> Kernel {
        self.skew.kernel()
    }

    /// `curl curl: W0 → Y1`, through the identity connector.
    pub fn curl_curl(&self) -> ExactMatrix {
        self.curl_y.mul(&self.identity.inverse().expect("identity connector")).mul(&self.curl_w)
    }

    pub fn verify(&self) -> Result<Report, BggError> {
        let [w0, w1, w2] = &self.w;
        let [y0, y1, y2] = &self.y;
        let mut r = Report::new("stress");
        for s in self.w.iter().chain(&self.y) {
            r.space(s);
        }
        unisolvence_checks(&mut r, &[w0, w1, w2, y0, y1, y2]);

        let chi = self.mesh.euler_characteristic();
        let top = cohomology("W row", &[w0.dim(), w1.dim(), w2.dim()], &[&self.curl_w, &self.div_w]);
        let bottom = cohomology("Y row", &[y0.dim(), y1.dim(), y2.dim()], &[&self.curl_y, &self.div_y]);
        r.expect_cohomology(&top, &[1, 0, 0]);
        r.expect_cohomology(&bottom, &[2, 0, 0]);
        r.record("W row: Euler characteristic", top.euler_characteristic().abs_diff(chi) as usize);
        r.record("Y row: Euler characteristic", bottom.euler_characteristic().abs_diff(2 * chi) as usize);

        r.connector("I: Y0 -> W1", &self.identity);
        r.connector("-2 sskw: Y1 -> W2", &self.skew);
        r.record("I: Y0 and W1 share the DOF table", usize::from(!y0.same_dof_table(w1)));
        r.record("I is the identity matrix", (&self.identity - &ExactMatrix::identity(w1.dim())).rank());
        r.record("div I = -2 sskw curl", (&self.div_w.mul(&self.identity) - &self.skew.mul(&self.curl_y)).rank());
        r.record("-2 sskw onto W2", w2.dim() - self.skew.rank());

        let kernel = self.kernel_of_skew();
        let edges = selector(y1.dim(), y1.counts.vertex..y1.counts.vertex + y1.counts.edge);
        let edge_rank = edges.mul(&kernel.basis).rank();
        r.record("ker(-2 sskw): edge DOFs independent", y1.counts.edge - edge_rank);
        let interior = kernel.dim() - y1.counts.edge;
        r.space_entry("ker(-2 sskw)", kernel.dim(), 0, y1.counts.edge, interior);
        let per_macro = y1.counts.interior / self.mesh.macros.len() - w2.dim() / self.mesh.macros.len();
        r.record("ker(-2 sskw): interior DOFs = Y1 interior - W2", interior.abs_diff(per_macro * self.mesh.macros.len()));

        let cc = self.curl_curl();
        r.record("curl curl lands in ker(-2 sskw)", self.skew.mul(&cc).rank());
        let div_k = self.div_y.mul(&kernel.basis);
        match kernel.coordinates(&cc) {
            Some(cc_k) => {
                let derived = cohomology("derived stress", &[w0.dim(), kernel.dim(), y2.dim()], &[&cc_k, &div_k]);
                r.expect_cohomology(&derived, &[3, 0, 0]);
                r.complex(&derived);
            }
            None => r.record("derived stress: curl curl has coordinates in ker(-2 sskw)", 1),
        }
        let p1 = linear_fields(w0)?;
        r.record("ker curl curl contains P1", cc.mul(&p1).rank() + (3 - p1.rank()));
        r.record("div onto Y2 from ker(-2 sskw)", y2.dim() - div_k.rank());

        r.complex(&top);
        r.complex(&bottom);
        Ok(r)
    }
}
