use bggfe::exactmath::{int, monomials_up_to, parse_poly, ratio, DiffOp, ExactMatrix, ExactScalar, MultiPoly, PolyTensor, Shape};
use bggfe::fespace::dof::unit_vector;
use bggfe::fespace::local::{bubble_dofs, vertex_edge_dofs};
use bggfe::fespace::*;
use bggfe::mesh::*;
use num_traits::Zero;

fn local(name: &str, m: &MacroElement) -> LocalElement {
    LocalElement::build(&element(name).unwrap(), m).unwrap()
}

fn unit_square() -> MacroElement {
    split_crisscross([ipoint(0, 0), ipoint(1, 0), ipoint(1, 1), ipoint(0, 1)]).unwrap()
}

/// A convex quad whose diagonals are not orthogonal and do not bisect each other.
fn skew_quad() -> MacroElement {
    split_crisscross([ipoint(0, 0), ipoint(3, 0), [ratio(5, 2), int(2)], [ratio(-1, 2), int(1)]]).unwrap()
}

fn unit_ct() -> MacroElement {
    split_clough_tocher([ipoint(0, 0), ipoint(1, 0), ipoint(0, 1)], None).unwrap()
}

fn skew_ct() -> MacroElement {
    split_clough_tocher([ipoint(0, 0), ipoint(4, 1), ipoint(1, 3)], Some([ratio(3, 2), ratio(5, 4)])).unwrap()
}

/// Dimension of the piecewise polynomial space on the refined mesh with
/// value (and, if `c1`, gradient) continuity across every interior edge,
/// counted as the kernel of exact jump constraints.
fn continuity_oracle(mesh: &MacroMesh, entries: usize, degree: u32, c1: bool) -> usize {
    let monos = monomials_up_to(2, degree);
    let per_tri = entries * monos.len();
    let cols = mesh.triangles.len() * per_tri;
    let mut rows = Vec::new();
    let eval = |m: &[u32], d: Option<usize>, pt: &[ExactScalar; 2]| {
        let p = MultiPoly::monomial(m.to_vec(), int(1));
        match d {
            Some(i) => p.diff(i).eval(pt),
            None => p.eval(pt),
        }
    };
    for e in &mesh.edges {
        if e.triangles.len() != 2 {
            continue;
        }
        let (a, b) = (&mesh.vertices[e.ends[0]], &mesh.vertices[e.ends[1]]);
        let at = |k: u32, n: u32| -> [ExactScalar; 2] {
            let t = ratio(k as i64, n as i64);
            [&a[0] + &t * (&b[0] - &a[0]), &a[1] + &t * (&b[1] - &a[1])]
        };
        let mut jumps: Vec<(Option<usize>, u32)> = vec![(None, degree)];
        if c1 {
            jumps.push((Some(0), degree - 1));
            jumps.push((Some(1), degree - 1));
        }
        for (d, deg) in jumps {
            for k in 0..=deg {
                let pt = at(k, deg.max(1));
                for c in 0..entries {
                    let mut row = vec![ExactScalar::zero(); cols];
                    for (side, &t) in e.triangles.iter().enumerate() {
                        let sign = if side == 0 { int(1) } else { int(-1) };
                        for (j, m) in monos.iter().enumerate() {
                            row[t * per_tri + c * monos.len() + j] = &sign * eval(m, d, &pt);
                        }
                    }
                    rows.push(row);
                }
            }
        }
    }
    cols - ExactMatrix::from_rows(rows).rank()
}

#[test]
fn classical_lagrange_on_one_triangle() {
    let tri = unsplit_triangle([ipoint(0, 0), ipoint(1, 0), ipoint(0, 1)]).unwrap();
    let p2 = ElementDef {
        name: "P2".into(),
        macro_kind: MacroKind::Triangle,
        shape: Shape::SCALAR,
        degree: 2,
        continuity: vec![],
        singular_vertex_relation: false,
        vertex_dofs: vec![],
        edge_dofs: vec![],
    };
    let space = build_local_space(&p2, &tri).unwrap();
    assert_eq!(space.dim(), 6);
    let nodes = [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 2), (0, 1, 2), (1, 0, 2)];
    let dofs: Vec<DofFunctional> = nodes
        .iter()
        .map(|&(x, y, d)| DofFunctional::point(DofEntity::Interior, 0, [ratio(x, d), ratio(y, d)], None, unit_vector(1, 0)))
        .collect();
    let u = unisolvence_check(&space, &dofs);
    assert!(u.ok);
    assert!(!u.determinant().is_zero());

    let p1 = ElementDef { degree: 1, ..p2 };
    let space = build_local_space(&p1, &tri).unwrap();
    assert_eq!(space.dim(), 3);
    let u = unisolvence_check(&space, &dofs[..2]);
    assert!(!u.ok);
    assert_eq!((u.dofs, u.dim), (2, 3));
    assert!(u.determinant().is_zero());
}

#[test]
fn gradient_of_quadratic_lagrange_has_rank_nine() {
    let ct = unit_ct();
    let def = ElementDef {
        name: "P2c".into(),
        macro_kind: MacroKind::CloughTocher,
        shape: Shape::SCALAR,
        degree: 2,
        continuity: vec![Continuity::Value],
        singular_vertex_relation: false,
        vertex_dofs: vec![],
        edge_dofs: vec![],
    };
    let space = build_local_space(&def, &ct).unwrap();
    assert_eq!(space.dim(), 10);
    let image = Layout::new(3, Shape::vector(2), 1);
    let cols: Vec<Vec<ExactScalar>> =
        (0..10).map(|i| image.coefficients(&space.basis_field(i).apply(DiffOp::Grad).unwrap()).unwrap()).collect();
    let grad = ExactMatrix::from_columns(image.len(), &cols);
    assert_eq!(grad.rank(), 9);
    let ns = grad.nullspace();
    assert_eq!(ns.len(), 1);
    // The kernel is the constant function.
    let combo = space.basis.mul_vec(&ns[0]);
    let f = space.layout.field(&combo);
    assert!(f.apply(DiffOp::Grad).unwrap().is_zero());
    assert!(!f.is_zero());
}

#[test]
fn local_dimensions_of_the_catalog() {
    let expected = [
        ("W0", 16, (12, 4, 0)),
        ("W1", 26, (8, 8, 10)),
        ("W2", 11, (0, 0, 11)),
        ("Y0", 26, (8, 8, 10)),
        ("Y1", 32, (0, 16, 16)),
        ("Y2", 8, (0, 0, 8)),
        ("Z0", 42, (18, 18, 6)),
        ("Z1", 60, (18, 30, 12)),
        ("Z2", 20, (6, 6, 8)),
        ("V0", 12, (9, 3, 0)),
        ("V1", 20, (6, 6, 8)),
        ("V2", 9, (0, 0, 9)),
    ];
    for (name, dim, (v, e, i)) in expected {
        let def = element(name).unwrap();
        let m = if def.macro_kind == MacroKind::CrissCross { unit_square() } else { unit_ct() };
        let l = local(name, &m);
        assert_eq!(l.dim(), dim, "{name}");
        assert_eq!((l.counts.vertex, l.counts.edge, l.counts.interior), (v, e, i), "{name}");
        assert_eq!(l.counts.total(), l.dim(), "{name}");
    }
}

#[test]
fn local_dimensions_match_the_continuity_oracle() {
    let sq = single_macro_mesh(&unit_square());
    let ct = single_macro_mesh(&unit_ct());
    assert_eq!(continuity_oracle(&sq, 1, 3, true), local("W0", &unit_square()).dim());
    assert_eq!(continuity_oracle(&sq, 2, 2, false), local("W1", &unit_square()).dim());
    assert_eq!(continuity_oracle(&ct, 1, 3, true), 12);
    assert_eq!(continuity_oracle(&ct, 1, 3, true), local("V0", &unit_ct()).dim());
    assert_eq!(continuity_oracle(&ct, 2, 4, true), local("Z0", &unit_ct()).dim());
    assert_eq!(continuity_oracle(&ct, 2, 2, false), local("Z2", &unit_ct()).dim());
}

#[test]
fn every_catalog_element_is_unisolvent_on_general_macros() {
    for name in ELEMENT_NAMES {
        let def = element(name).unwrap();
        let macros = if def.macro_kind == MacroKind::CrissCross { [unit_square(), skew_quad()] } else { [unit_ct(), skew_ct()] };
        for m in &macros {
            let space = build_local_space(&def, m).unwrap();
            let mut dofs = vertex_edge_dofs(&def, m);
            dofs.extend(bubble_dofs(&space, &dofs));
            let u = unisolvence_check(&space, &dofs);
            assert!(u.ok, "{name}: {} functionals, rank {}, dim {}", u.dofs, u.rank, u.dim);
            assert!(!u.determinant().is_zero(), "{name}");
        }
    }
}

#[test]
fn w0_boundary_functionals_alone_are_unisolvent() {
    // value + gradient at 4 corners and one normal moment per edge: 16 = dim W0.
    let m = unit_square();
    let def = element("W0").unwrap();
    let space = build_local_space(&def, &m).unwrap();
    let dofs = vertex_edge_dofs(&def, &m);
    assert_eq!(dofs.len(), 16);
    assert!(unisolvence_check(&space, &dofs).ok);
}

#[test]
fn z1_bubbles_fill_the_gap() {
    let l = local("Z1", &unit_ct());
    let boundary = element("Z1").unwrap().vertex_dofs.len() * 3 + element("Z1").unwrap().edge_dofs.len() * 3;
    assert_eq!(boundary, 48);
    assert_eq!(l.counts.interior, l.dim() - boundary);
}

#[test]
fn z0_has_three_interior_dofs_per_component() {
    assert_eq!(local("Z0", &unit_ct()).counts.interior, 6);
    assert_eq!(local("Z0", &skew_ct()).counts.interior, 6);
}

#[test]
fn singular_vertex_relation_for_w1_divergence() {
    for m in [unit_square(), skew_quad()] {
        let l = local("W1", &m);
        let z = m.split_point().unwrap().clone();
        for j in 0..l.dim() {
            let div = l.dual_field(j).apply(DiffOp::Div).unwrap();
            let mut alt = ExactScalar::zero();
            for t in 0..4 {
                let v = div.pieces[t].comp(0).eval(&z);
                alt += if t % 2 == 0 { v } else { -v };
            }
            assert!(alt.is_zero(), "basis {j}");
        }
    }
}

#[test]
fn singular_vertex_relation_is_not_vacuous() {
    // Discontinuous P1 on four triangles has dim 12; W2 drops exactly one.
    let m = unit_square();
    let free = ElementDef { singular_vertex_relation: false, ..element("W2").unwrap() };
    assert_eq!(build_local_space(&free, &m).unwrap().dim(), 12);
    assert_eq!(local("W2", &m).dim(), 11);
    let mut pieces = vec![PolyTensor::scalar(MultiPoly::zero(2)); 4];
    pieces[0] = PolyTensor::scalar(MultiPoly::one(2));
    let bump = PiecewiseField { pieces };
    assert!(!local("W2", &m).space.contains(&bump));
}

#[test]
fn global_dimensions() {
    let ct = unit_triangle_ct();
    assert_eq!(assemble_global(&element("Z2").unwrap(), &ct).unwrap().dim(), 20);
    let cc = unit_square_cc();
    assert_eq!(assemble_global(&element("Y2").unwrap(), &cc).unwrap().dim(), 8);
    let grid = builtin_mesh("grid:2x2:cc").unwrap();
    let w0 = assemble_global(&element("W0").unwrap(), &grid).unwrap();
    // 3 per parent vertex, 1 per parent edge.
    let expected = 3 * grid.parent_vertex_count + grid.parent_edge_count();
    assert_eq!(expected, 39);
    assert_eq!(w0.dim(), expected);
    assert_eq!(continuity_oracle(&grid, 1, 3, true), expected);
    let w1 = assemble_global(&element("W1").unwrap(), &grid).unwrap();
    assert_eq!(w1.dim(), continuity_oracle(&grid, 2, 2, false));
}

#[test]
fn ct_grid_global_dimensions_match_the_oracle() {
    let grid = builtin_mesh("grid:2x1:ct").unwrap();
    for (name, entries, degree, c1) in [("V0", 1, 3, true), ("Z2", 2, 2, false), ("Z0", 2, 4, true)] {
        let s = assemble_global(&element(name).unwrap(), &grid).unwrap();
        assert_eq!(s.dim(), continuity_oracle(&grid, entries, degree, c1), "{name}");
        assert_eq!(s.dim(), s.counts.total(), "{name}");
    }
}

#[test]
fn operator_matrix_examples() {
    let ct = unit_triangle_ct();
    let v0 = assemble_global(&element("V0").unwrap(), &ct).unwrap();
    let v1 = assemble_global(&element("V1").unwrap(), &ct).unwrap();
    let v2 = assemble_global(&element("V2").unwrap(), &ct).unwrap();
    let z1 = assemble_global(&element("Z1").unwrap(), &ct).unwrap();
    let grad = operator_matrix(Some(DiffOp::Grad), &v0, &v1).unwrap();
    let rot = operator_matrix(Some(DiffOp::Rot), &v1, &v2).unwrap();
    assert!(rot.mul(&grad).is_zero());
    let mskw = operator_matrix(Some(DiffOp::Mskw), &v0, &z1).unwrap();
    assert_eq!(mskw.rank(), v0.dim());

    let cc = builtin_mesh("grid:2x1:cc").unwrap();
    let y1 = assemble_global(&element("Y1").unwrap(), &cc).unwrap();
    let w2 = assemble_global(&element("W2").unwrap(), &cc).unwrap();
    let sskw = operator_matrix(Some(DiffOp::Sskw), &y1, &w2).unwrap();
    assert_eq!(sskw.rank(), w2.dim());
}

#[test]
fn membership_failure_names_the_leak() {
    let ct = unit_triangle_ct();
    let v0 = assemble_global(&element("V0").unwrap(), &ct).unwrap();
    let v1 = assemble_global(&element("V1").unwrap(), &ct).unwrap();
    let v2 = assemble_global(&element("V2").unwrap(), &ct).unwrap();
    assert!(operator_matrix(Some(DiffOp::Div), &v1, &v2).is_ok());
    // C1 cubics are not piecewise linear.
    match operator_matrix(None, &v0, &v2) {
        Err(FeError::Membership { op, from, to, .. }) => {
            assert_eq!((op.as_str(), from.as_str(), to.as_str()), ("inclusion", "V0", "V2"));
        }
        other => panic!("expected a membership error, got {other:?}"),
    }
    let other_mesh = builtin_mesh("grid:1x1:ct").unwrap();
    let v2_elsewhere = assemble_global(&element("V2").unwrap(), &other_mesh).unwrap();
    assert!(matches!(operator_matrix(Some(DiffOp::Rot), &v1, &v2_elsewhere), Err(FeError::MeshMismatch { .. })));
}

#[test]
fn interpolation_reproduces_global_polynomials() {
    let grid = builtin_mesh("grid:2x1:cc").unwrap();
    let w0 = assemble_global(&element("W0").unwrap(), &grid).unwrap();
    let u = PolyTensor::scalar(parse_poly("x^3 - 2*x*y^2 + y + 1/3", 2).unwrap());
    let dofs = interpolate_global(&w0, &u).unwrap();
    for m in 0..grid.macros.len() {
        let f = w0.local_field(m, &dofs);
        assert!(f.pieces.iter().all(|p| *p == u), "macro {m}");
    }
    let quartic = PolyTensor::scalar(parse_poly("x^4", 2).unwrap());
    assert!(matches!(interpolate_global(&w0, &quartic), Err(FeError::Membership { .. })));
}

#[test]
fn element_lookup_errors() {
    let err = element("bogus").unwrap_err();
    let msg = err.to_string();
    for name in ELEMENT_NAMES {
        assert!(msg.contains(name), "{msg}");
    }
    let err = LocalElement::build(&element("W0").unwrap(), &unit_ct()).unwrap_err();
    assert!(matches!(err, FeError::KindMismatch { .. }));
    assert!(assemble_global(&element("Z1").unwrap(), &unit_square_cc()).is_err());
}
