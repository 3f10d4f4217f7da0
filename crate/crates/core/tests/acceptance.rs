//! Acceptance harness: one line per criterion, `criterion N: PASS|FAIL: detail`.
//! Run with `--nocapture` to see the lines.

use std::time::{Duration, Instant};

use bggfe::bgg::{build_strain, build_stress, cohomology, Report};
use bggfe::curvature::{run_seeded, IdentityKind, Outcome};
use bggfe::exactmath::{int, ratio, DiffOp, ExactMatrix, ExactScalar, MultiPoly, PolyTensor};
use bggfe::fespace::local::{bubble_dofs, vertex_edge_dofs};
use bggfe::fespace::{build_local_space, element, interpolate_global, unisolvence_check, LocalElement, ELEMENT_NAMES};
use bggfe::mesh::{ipoint, load_mesh, split_clough_tocher, split_crisscross, MacroElement, MacroKind};
use num_traits::Zero;

fn report(n: u32, pass: bool, detail: impl AsRef<str>) {
    println!("criterion {n}: {}: {}", if pass { "PASS" } else { "FAIL" }, detail.as_ref());
}

fn check(r: &Report, name: &str) -> bool {
    r.check(name).unwrap_or_else(|| panic!("report has no check `{name}`")).status == bggfe::bgg::Status::Pass
}

/// Cohomology of `0 → A →f B →g C → 0` from ranks alone.
fn three_term(dims: [usize; 3], f: &ExactMatrix, g: &ExactMatrix) -> [usize; 3] {
    let (rf, rg) = (f.rank(), g.rank());
    [dims[0] - rf, dims[1] - rg - rf, dims[2] - rg]
}

fn skew_quad() -> MacroElement {
    split_crisscross([ipoint(0, 0), ipoint(3, 0), [ratio(5, 2), int(2)], [ratio(-1, 2), int(1)]]).unwrap()
}

#[test]
fn criterion_1_dimension_counts_on_one_square() {
    let start = Instant::now();
    let mesh = load_mesh("unit-square-cc").unwrap();
    let d = build_stress(&mesh).unwrap();
    let ker = d.kernel_of_skew();
    let edge_rows: Vec<usize> = (0..d.y[1].counts.edge).map(|r| d.y[1].counts.vertex + r).collect();
    let ker_interior = ker.dim() - ker.basis.select_rows(&edge_rows).rank();
    let got = [d.w[1].counts.interior, d.w[2].dim(), d.y[1].counts.interior, d.y[2].dim(), ker_interior];
    let elapsed = start.elapsed();
    let pass = got == [10, 11, 16, 8, 5] && elapsed < Duration::from_secs(10);
    report(
        1,
        pass,
        format!(
            "W1 interior {}, W2 dim {}, Y1 interior {}, Y2 dim {}, ker(-2 sskw) interior {} in {:.2?}",
            got[0], got[1], got[2], got[3], got[4], elapsed
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_2_singular_vertex_relation() {
    let square = split_crisscross([ipoint(0, 0), ipoint(1, 0), ipoint(1, 1), ipoint(0, 1)]).unwrap();
    let mut checked = 0;
    let mut bad = 0;
    for m in [square, skew_quad()] {
        let l = LocalElement::build(&element("W1").unwrap(), &m).unwrap();
        let z = m.split_point().unwrap().clone();
        for j in 0..l.dim() {
            let div = l.dual_field(j).apply(DiffOp::Div).unwrap();
            let alt = (0..4).fold(ExactScalar::zero(), |acc, t| {
                let v = div.pieces[t].comp(0).eval(&z);
                if t % 2 == 0 {
                    acc + v
                } else {
                    acc - v
                }
            });
            checked += 1;
            bad += usize::from(!alt.is_zero());
        }
    }
    report(2, bad == 0, format!("{checked} W1 basis functions on the unit square and a skew quad, {bad} nonzero alternating sums"));
    assert_eq!(bad, 0);
}

#[test]
fn criterion_3_stress_derived_complex() {
    let mut lines = Vec::new();
    let mut pass = true;
    for name in ["grid:1x1:cc", "grid:2x2:cc", "grid:3x3:cc"] {
        let start = Instant::now();
        let mesh = load_mesh(name).unwrap();
        let d = build_stress(&mesh).unwrap();
        let k = d.kernel_of_skew();
        let cc = d.curl_curl();
        let cc_k = k.coordinates(&cc).expect("curl curl lands in ker(-2 sskw)");
        let div_k = d.div_y.mul(&k.basis);
        let dd = div_k.mul(&cc_k).is_zero();
        let h = three_term([d.w[0].dim(), k.dim(), d.y[2].dim()], &cc_k, &div_k);
        let p1: Vec<Vec<ExactScalar>> = [MultiPoly::one(2), MultiPoly::var(2, 0), MultiPoly::var(2, 1)]
            .into_iter()
            .map(|p| interpolate_global(&d.w[0], &PolyTensor::scalar(p)).unwrap())
            .collect();
        let p1_in_kernel = cc.mul(&ExactMatrix::from_columns(d.w[0].dim(), &p1)).is_zero();
        let elapsed = start.elapsed();
        let ok = dd && h == [3, 0, 0] && p1_in_kernel && (name != "grid:3x3:cc" || elapsed < Duration::from_secs(120));
        pass &= ok;
        lines.push(format!("{name}: d∘d = 0 {dd}, H = {h:?}, P1 ⊂ ker curl curl {p1_in_kernel}, {elapsed:.2?}"));
    }
    report(3, pass, lines.join("; "));
    assert!(pass);
}

#[test]
fn criterion_4_strain_diagram_identities() {
    let mut lines = Vec::new();
    let mut pass = true;
    for name in ["unit-triangle-ct", "grid:2x2:ct"] {
        let mesh = load_mesh(name).unwrap();
        let d = build_strain(&mesh).unwrap();
        let left_inverse = d.sskw_h.mul(&d.mskw) == ExactMatrix::identity(d.v[0].dim());
        let injective = d.mskw.rank() == d.v[0].dim();
        let rot_mskw = (&d.rot_z.mul(&d.mskw) + &d.identity.mul(&d.grad_v)).is_zero();
        let rr = d.rot_rot();
        let span = ExactMatrix::hcat(&[&d.grad_z, &d.mskw]);
        let kernel = rr.mul(&span).is_zero() && span.rank() == d.z[1].dim() - rr.rank();
        let ok = left_inverse && injective && rot_mskw && kernel;
        pass &= ok;
        lines.push(format!(
            "{name}: sskw_h mskw = I {left_inverse}, mskw injective {injective}, rot mskw = -grad {rot_mskw}, ker rot rot = grad Z0 + mskw V0 {kernel}"
        ));
    }
    report(4, pass, lines.join("; "));
    assert!(pass);
}

#[test]
fn criterion_5_reduced_strain_complex() {
    let mut lines = Vec::new();
    let mut pass = true;
    for name in ["unit-triangle-ct", "grid:2x2:ct"] {
        let mesh = load_mesh(name).unwrap();
        let d = build_strain(&mesh).unwrap();
        let sskw_def = d.sskw_h.mul(&d.def_h).is_zero();
        let rr = d.rot_rot();
        let rr_def = rr.mul(&d.def_h).is_zero();
        let dim_u1 = d.u1.dim() == d.z[1].dim() - d.v[0].dim();
        let def_u = d.u1.coordinates(&d.def_h).expect("def_h lands in U1");
        let rr_u = rr.mul(&d.u1.basis);
        let kernel = d.u1.dim() - rr_u.rank() == def_u.rank();
        let unisolvent = check(&d.verify().unwrap(), "U1 DOFs unisolvent");
        let ker_def = d.z[0].dim() - def_u.rank();
        let ok = sskw_def && rr_def && dim_u1 && kernel && unisolvent;
        pass &= ok;
        lines.push(format!(
            "{name}: sskw_h def_h = 0 {sskw_def}, rot rot def_h = 0 {rr_def}, dim U1 = {} {dim_u1}, ker rot rot|U1 = def_h Z0 {kernel}, U1 DOFs unisolvent {unisolvent}, dim ker def_h = {ker_def} (reported)",
            d.u1.dim()
        ));
    }
    report(5, pass, lines.join("; "));
    assert!(pass);
}

#[test]
fn criterion_6_unisolvence_suite() {
    let cc = [split_crisscross([ipoint(0, 0), ipoint(1, 0), ipoint(1, 1), ipoint(0, 1)]).unwrap(), skew_quad()];
    let ct = [
        split_clough_tocher([ipoint(0, 0), ipoint(1, 0), ipoint(0, 1)], None).unwrap(),
        split_clough_tocher([ipoint(0, 0), ipoint(4, 1), ipoint(1, 3)], Some([ratio(3, 2), ratio(5, 4)])).unwrap(),
    ];
    let mut bad = Vec::new();
    for name in ELEMENT_NAMES {
        let def = element(name).unwrap();
        let macros = if def.macro_kind == MacroKind::CrissCross { &cc } else { &ct };
        for m in macros {
            let space = build_local_space(&def, m).unwrap();
            let mut dofs = vertex_edge_dofs(&def, m);
            dofs.extend(bubble_dofs(&space, &dofs));
            let u = unisolvence_check(&space, &dofs);
            if !u.ok || u.determinant().is_zero() {
                bad.push(format!("{name} ({} DOFs, rank {}, dim {})", u.dofs, u.rank, u.dim));
            }
        }
    }
    let z0 = LocalElement::build(&element("Z0").unwrap(), &ct[1]).unwrap();
    let z1 = LocalElement::build(&element("Z1").unwrap(), &ct[1]).unwrap();
    let z0_interior = z0.counts.interior == 3 * 2;
    let pass = bad.is_empty() && z0_interior;
    report(
        6,
        pass,
        format!(
            "{} elements on two macros each, singular: [{}], Z1 {} DOFs on dim {}, Z0 interior {} = 3 per component",
            ELEMENT_NAMES.len(),
            bad.join(", "),
            z1.counts.total(),
            z1.dim(),
            z0.counts.interior
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_z_row_exactness() {
    let mut lines = Vec::new();
    let mut pass = true;
    for name in ["unit-triangle-ct", "grid:2x2:ct"] {
        let mesh = load_mesh(name).unwrap();
        let d = build_strain(&mesh).unwrap();
        let dims: Vec<usize> = d.z.iter().map(|s| s.dim()).collect();
        let zr = cohomology("Z row", &dims, &[&d.grad_z, &d.rot_z]);
        let (v, e, t) = (mesh.vertices.len() as i64, mesh.edges.len() as i64, mesh.triangles.len() as i64);
        let ok = zr.is_complex && zr.cohomology == vec![2, 0, 0] && v - e + t == 1;
        pass &= ok;
        lines.push(format!("{name}: H = {:?}, V - E + T = {}", zr.cohomology, v - e + t));
    }
    report(7, pass, lines.join("; "));
    assert!(pass);
}

/// Stated forms known to contradict the sign conventions under which the
/// other stated identities hold; each has a passing corrected variant.
const KNOWN_FALSE_STATEMENTS: [&str; 4] = ["rotrot-2d", "ricci-3d-sinv-inc", "riemann4-3d", "scalar-3d"];

#[test]
fn criterion_8_curvature_identity_suite() {
    let start = Instant::now();
    let r = run_seeded("all", 42, 50).unwrap();
    let elapsed = start.elapsed();
    let failing: Vec<&str> = r.results.iter().filter(|x| x.status == Outcome::Fail).map(|x| x.check.as_str()).collect();
    let few_cases = r.results.iter().filter(|x| x.cases < 50).count();
    let pass = failing.is_empty() && few_cases == 0 && elapsed < Duration::from_secs(120);
    report(
        8,
        pass,
        format!("{} identity runs, 50 cases each, failing stated forms: [{}], {elapsed:.2?}", r.results.len(), failing.join(", ")),
    );
    for x in &r.results {
        println!(
            "    {} ({}D) {}: {} of {} fail",
            x.check,
            x.dimension,
            if x.status == Outcome::Pass { "pass" } else { "FAIL" },
            x.failures,
            x.cases
        );
    }
    // The harness requires everything else to pass, and each known-false
    // statement to fail while its corrected variant passes.
    let mut expected: Vec<&str> = KNOWN_FALSE_STATEMENTS.to_vec();
    expected.sort_unstable();
    let mut got = failing.clone();
    got.sort_unstable();
    got.dedup();
    assert_eq!(got, expected);
    for name in KNOWN_FALSE_STATEMENTS {
        let corrected = format!("{name}-corrected");
        let fixed = match name {
            "ricci-3d-sinv-inc" => "ricci-3d-s-inc",
            _ => corrected.as_str(),
        };
        let v = r.results.iter().find(|x| x.check == fixed).unwrap_or_else(|| panic!("no {fixed}"));
        assert_eq!(v.status, Outcome::Pass, "{fixed}");
        assert_eq!(v.kind, IdentityKind::Corrected, "{fixed}");
    }
    assert_eq!(few_cases, 0);
    assert!(elapsed < Duration::from_secs(120));
}

#[test]
fn criterion_9_scope_statement() {
    report(
        9,
        true,
        "acceptance is exact and property based; no convergence rates or timing benchmarks are claimed beyond the runtime budgets above",
    );
}
