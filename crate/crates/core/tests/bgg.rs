use bggfe::bgg::*;
use bggfe::exactmath::{int, parse_poly, ratio, ExactMatrix, ExactScalar, MultiPoly, PolyTensor, Shape};
use bggfe::fespace::interpolate_global;
use bggfe::mesh::*;

fn dims_of(spaces: &[&bggfe::fespace::FeSpace<'_>]) -> Vec<usize> {
    spaces.iter().map(|s| s.dim()).collect()
}

fn poly(s: &str) -> MultiPoly {
    parse_poly(s, 2).unwrap()
}

fn constant_matrix(m: [[i64; 2]; 2], den: i64) -> PolyTensor {
    let c = |v: i64| MultiPoly::constant(2, ratio(v, den));
    PolyTensor::matrix(vec![vec![c(m[0][0]), c(m[0][1])], vec![c(m[1][0]), c(m[1][1])]])
}

fn column(v: Vec<ExactScalar>) -> ExactMatrix {
    ExactMatrix::from_columns(v.len(), &[v])
}

/// Cohomology of `0 → A →f B →g C → 0` from ranks alone.
fn three_term(dims: [usize; 3], f: &ExactMatrix, g: &ExactMatrix) -> [usize; 3] {
    let (rf, rg) = (f.rank(), g.rank());
    [dims[0] - rf, dims[1] - rg - rf, dims[2] - rg]
}

#[test]
fn stress_diagram_on_one_square() {
    let mesh = unit_square_cc();
    let d = build_stress(&mesh).unwrap();
    assert_eq!(dims_of(&[&d.w[0], &d.w[1], &d.w[2], &d.y[1], &d.y[2]]), vec![16, 26, 11, 32, 8]);
    assert_eq!(d.w[1].counts.interior, 10);
    assert_eq!(d.y[1].counts.interior, 16);
    assert_eq!(d.identity, ExactMatrix::identity(26));
    assert!(d.div_w.mul(&d.curl_w).is_zero());
    assert!(d.div_y.mul(&d.curl_y).is_zero());
    assert!((&d.div_w.mul(&d.identity) - &d.skew.mul(&d.curl_y)).is_zero());
    assert_eq!(d.skew.rank(), d.w[2].dim());
    let k = d.kernel_of_skew();
    assert_eq!(k.dim(), 32 - 11);
    // Edge DOFs of Y1 stay independent on the kernel; the rest are interior.
    let edge_rows: Vec<usize> = (0..d.y[1].counts.edge).map(|r| d.y[1].counts.vertex + r).collect();
    assert_eq!(k.basis.select_rows(&edge_rows).rank(), 16);
    assert_eq!(k.dim() - 16, 5);
}

#[test]
fn stress_derived_complex_recomputed() {
    for name in ["unit-square-cc", "grid:2x1:cc", "grid:2x2:cc"] {
        let mesh = load_mesh(name).unwrap();
        let d = build_stress(&mesh).unwrap();
        let k = d.kernel_of_skew();
        let cc = d.curl_curl();
        assert!(d.skew.mul(&cc).is_zero(), "{name}");
        let cc_k = k.coordinates(&cc).expect("curl curl lands in the kernel");
        let div_k = d.div_y.mul(&k.basis);
        assert!(div_k.mul(&cc_k).is_zero(), "{name}");
        assert_eq!(three_term([d.w[0].dim(), k.dim(), d.y[2].dim()], &cc_k, &div_k), [3, 0, 0], "{name}");
        // The kernel of curl curl is spanned by the linear polynomials.
        let p1: Vec<Vec<ExactScalar>> =
            ["1", "x", "y"].iter().map(|s| interpolate_global(&d.w[0], &PolyTensor::scalar(poly(s))).unwrap()).collect();
        let p1 = ExactMatrix::from_columns(d.w[0].dim(), &p1);
        assert!(cc.mul(&p1).is_zero(), "{name}");
        assert_eq!(p1.rank(), 3);
    }
}

#[test]
fn stress_report_on_one_square() {
    let mesh = unit_square_cc();
    let r = build_stress(&mesh).unwrap().verify().unwrap();
    assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
    let ker = r.spaces.iter().find(|s| s.name == "ker(-2 sskw)").unwrap();
    assert_eq!((ker.dim, ker.dofs.interior), (21, 5));
    let derived: Vec<usize> = r.cohomology.iter().filter(|c| c.complex == "derived stress").map(|c| c.dim).collect();
    assert_eq!(derived, vec![3, 0, 0]);
    let skew = r.connectors.iter().find(|c| c.name.starts_with("-2 sskw")).unwrap();
    assert!(skew.surjective && !skew.injective);
}

#[test]
fn strain_diagram_identities_on_one_triangle() {
    let mesh = unit_triangle_ct();
    let d = build_strain(&mesh).unwrap();
    let (z, v) = (&d.z, &d.v);
    assert_eq!(dims_of(&[&z[0], &z[1], &z[2], &v[0], &v[1], &v[2]]), vec![42, 60, 20, 12, 20, 9]);
    assert_eq!(d.sskw_h.mul(&d.mskw), ExactMatrix::identity(v[0].dim()));
    assert_eq!(d.mskw.rank(), v[0].dim());
    assert!((&d.rot_z.mul(&d.mskw) + &d.identity.mul(&d.grad_v)).is_zero());
    assert!(d.rot_z.mul(&d.grad_z).is_zero());
    assert!(d.rot_v.mul(&d.grad_v).is_zero());
    // ker(rot rot, Z1) = grad Z0 + mskw V0.
    let rr = d.rot_rot();
    let span = ExactMatrix::hcat(&[&d.grad_z, &d.mskw]);
    assert!(rr.mul(&span).is_zero());
    assert_eq!(span.rank(), z[1].dim() - rr.rank());
}

#[test]
fn z_and_v_rows_are_exact_after_index_zero() {
    for name in ["unit-triangle-ct", "grid:1x1:ct"] {
        let mesh = load_mesh(name).unwrap();
        let d = build_strain(&mesh).unwrap();
        let zr = cohomology("Z row", &dims_of(&[&d.z[0], &d.z[1], &d.z[2]]), &[&d.grad_z, &d.rot_z]);
        assert!(zr.is_complex);
        assert_eq!(zr.cohomology, vec![2, 0, 0], "{name}");
        assert_eq!(zr.euler_characteristic(), 2 * mesh.euler_characteristic());
        let vr = cohomology("V row", &dims_of(&[&d.v[0], &d.v[1], &d.v[2]]), &[&d.grad_v, &d.rot_v]);
        assert_eq!(vr.cohomology, vec![1, 0, 0], "{name}");
    }
}

#[test]
fn reduced_strain_complex_recomputed() {
    for name in ["unit-triangle-ct", "grid:1x1:ct"] {
        let mesh = load_mesh(name).unwrap();
        let d = build_strain(&mesh).unwrap();
        assert!(d.sskw_h.mul(&d.def_h).is_zero(), "{name}");
        let rr = d.rot_rot();
        assert!(rr.mul(&d.def_h).is_zero(), "{name}");
        assert_eq!(d.u1.dim(), d.z[1].dim() - d.v[0].dim(), "{name}");
        let def_u = d.u1.coordinates(&d.def_h).expect("def_h lands in U1");
        let rr_u = rr.mul(&d.u1.basis);
        // ker(rot rot, U1) = def_h Z0 by rank equality.
        assert_eq!(d.u1.dim() - rr_u.rank(), def_u.rank(), "{name}");
        let h = three_term([d.z[0].dim(), d.u1.dim(), d.v[2].dim()], &def_u, &rr_u);
        assert_eq!(&h[1..], &[0, 0], "{name}");
        // Rigid motions: the computed kernel of def_h is 3-dimensional here.
        assert_eq!(h[0], 3, "{name}");
    }
}

#[test]
fn discrete_sskw_on_constant_fields() {
    let mesh = unit_triangle_ct();
    let d = build_strain(&mesh).unwrap();
    let sym = interpolate_global(&d.z[1], &constant_matrix([[2, -3], [-3, 5]], 1)).unwrap();
    assert!(d.sskw_h.mul(&column(sym)).is_zero());
    let m = interpolate_global(&d.z[1], &constant_matrix([[1, 4], [-2, 7]], 3)).unwrap();
    // sskw of [[1,4],[-2,7]]/3 is (4/3 + 2/3)/2 = 1.
    let expected = interpolate_global(&d.v[0], &PolyTensor::scalar(MultiPoly::constant(2, int(1)))).unwrap();
    assert_eq!(d.sskw_h.mul(&column(m)), column(expected));
}

#[test]
fn def_h_of_linear_fields() {
    let mesh = unit_triangle_ct();
    let d = build_strain(&mesh).unwrap();
    let constant = interpolate_global(&d.z[0], &PolyTensor::vector(vec![poly("3"), poly("-1")])).unwrap();
    assert!(d.def_h.mul(&column(constant)).is_zero());
    let shear = interpolate_global(&d.z[0], &PolyTensor::vector(vec![poly("y"), poly("0")])).unwrap();
    let expected = interpolate_global(&d.z[1], &constant_matrix([[0, 1], [1, 0]], 2)).unwrap();
    assert_eq!(d.def_h.mul(&column(shear)), column(expected));
    let rotation = interpolate_global(&d.z[0], &PolyTensor::vector(vec![poly("-y"), poly("x")])).unwrap();
    assert!(d.def_h.mul(&column(rotation)).is_zero());
}

#[test]
fn u1_is_not_pointwise_symmetric() {
    let mesh = unit_triangle_ct();
    let d = build_strain(&mesh).unwrap();
    let z1 = &d.z[1];
    let skew_member = (0..d.u1.dim()).any(|c| {
        let f = z1.local_field(0, &d.u1.basis.column(c));
        f.pieces.iter().any(|p| p.get(0, 1) != p.get(1, 0))
    });
    assert!(skew_member);
    assert_eq!(z1.def.shape, Shape::matrix(2));
}

#[test]
fn strain_report_on_one_triangle() {
    let mesh = unit_triangle_ct();
    let r = build_strain(&mesh).unwrap().verify().unwrap();
    assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
    for name in ["sskw_h mskw = I", "U1 DOFs unisolvent", "ker rot rot on U1 = def_h Z0", "ker rot rot = grad Z0 + mskw V0"] {
        assert_eq!(r.check(name).map(|c| c.status), Some(Status::Pass), "{name}");
    }
    let u1 = r.spaces.iter().find(|s| s.name == "U1").unwrap();
    assert_eq!(u1.dim, 48);
    let h0 = r.cohomology.iter().find(|c| c.complex == "reduced strain" && c.index == 0).unwrap();
    assert_eq!(h0.dim, 3);
}

#[test]
fn wrong_macro_kind_is_an_error() {
    let ct = unit_triangle_ct();
    assert!(matches!(build_stress(&ct), Err(BggError::WrongMacro { .. })));
    let cc = builtin_mesh("grid:2x2:cc").unwrap();
    let err = build_strain(&cc).err().expect("strain needs CT macros");
    assert!(err.to_string().contains("ct"), "{err}");
}

#[test]
fn report_serializes_in_the_documented_layout() {
    let mesh = unit_square_cc();
    let r = build_stress(&mesh).unwrap().verify().unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    for key in ["diagram", "spaces", "connectors", "checks", "cohomology"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let check = &v["checks"][0];
    assert!(check["name"].is_string() && check["status"] == "pass" && check["residual_rank"] == 0);
    assert!(v["spaces"][0]["dofs"]["interior"].is_number());
}
