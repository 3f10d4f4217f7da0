#![allow(clippy::needless_range_loop)]

use bggfe::exactmath::tensor::{poly_jet, trace_reverse, trace_reverse_inverse};
use bggfe::exactmath::{
    int, monomials_up_to, parse_poly, parse_rational, ratio, DiffOp, ExactMatrix, ExactScalar, MultiPoly, PolyTensor, Shape,
};
use num_traits::Zero;
use proptest::prelude::*;

/// Plain Gauss-Jordan over the rationals, independent of the library's elimination.
fn oracle_rank(m: &ExactMatrix) -> usize {
    let mut a: Vec<Vec<ExactScalar>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        for r in 0..a.len() {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[rank][c];
                for k in 0..m.cols() {
                    let d = &f * &a[rank][k];
                    a[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn p2(s: &str) -> MultiPoly {
    parse_poly(s, 2).unwrap()
}

fn apply(p: &PolyTensor, op: DiffOp) -> PolyTensor {
    p.apply(op).unwrap()
}

fn matrix_strategy() -> impl Strategy<Value = ExactMatrix> {
    (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r)
            .prop_map(|rows| ExactMatrix::from_rows(rows.into_iter().map(|row| row.into_iter().map(int).collect()).collect()))
    })
}

/// Low-rank matrices: a product of thin factors, so kernels are nontrivial.
fn low_rank_strategy() -> impl Strategy<Value = ExactMatrix> {
    (1usize..6, 1usize..3, 2usize..7).prop_flat_map(|(r, k, c)| {
        (proptest::collection::vec(-4i64..=4, r * k), proptest::collection::vec(-4i64..=4, k * c)).prop_map(move |(a, b)| {
            let a = ExactMatrix::from_rows(a.chunks(k).map(|row| row.iter().map(|&v| int(v)).collect()).collect());
            let b = ExactMatrix::from_rows(b.chunks(c).map(|row| row.iter().map(|&v| ratio(v, 3)).collect()).collect());
            a.mul(&b)
        })
    })
}

fn poly_strategy(nvars: usize, degree: u32) -> impl Strategy<Value = MultiPoly> {
    let monos = monomials_up_to(nvars, degree);
    proptest::collection::vec(-5i64..=5, monos.len()).prop_map(move |cs| {
        let mut p = MultiPoly::zero(nvars);
        for (m, c) in monos.iter().zip(cs) {
            p.add_term(m.clone(), ratio(c, 2));
        }
        p
    })
}

fn matrix_field_strategy() -> impl Strategy<Value = PolyTensor> {
    proptest::collection::vec(poly_strategy(2, 3), 4).prop_map(|e| PolyTensor::from_entries(Shape::matrix(2), e))
}

#[test]
fn rank_examples() {
    assert_eq!(ExactMatrix::identity(3).rank(), 3);
    assert_eq!(ExactMatrix::from_i64(&[&[1, 2], &[2, 4]]).rank(), 1);
    assert_eq!(ExactMatrix::zeros(2, 3).rank(), 0);
}

#[test]
fn nullspace_examples() {
    assert!(ExactMatrix::identity(2).nullspace().is_empty());
    let ns = ExactMatrix::from_i64(&[&[1, 1]]).nullspace();
    assert_eq!(ns.len(), 1);
    assert_eq!(&ns[0][0] + &ns[0][1], ExactScalar::zero());
    assert!(!ns[0][0].is_zero());
}

#[test]
fn rationals_are_normalized() {
    let q = parse_rational("6/-4").unwrap();
    assert_eq!(q, ratio(-3, 2));
    assert_eq!(*q.denom(), 2.into());
    assert_eq!(ratio(1, 3) + ratio(1, 6), ratio(1, 2));
    assert_eq!(parse_rational("0.125").unwrap(), ratio(1, 8));
    assert!(parse_rational("1/0").is_err());
}

#[test]
fn mskw_of_one_is_the_rotation_generator() {
    let m = apply(&PolyTensor::scalar(MultiPoly::one(2)), DiffOp::Mskw);
    assert_eq!(m.eval(&[int(0), int(0)]), vec![int(0), int(1), int(-1), int(0)]);
}

#[test]
fn rot_rot_of_diagonal_quadratic() {
    let g = PolyTensor::matrix(vec![vec![p2("y^2"), p2("0")], vec![p2("0"), p2("x^2")]]);
    let rr = apply(&apply(&g, DiffOp::Rot), DiffOp::Rot);
    assert_eq!(rr, PolyTensor::scalar(MultiPoly::constant(2, int(4))));
}

#[test]
fn inc_of_constant_symmetric_vanishes() {
    let c = PolyTensor::constant(Shape::matrix(3), 3, &[2, -1, 3, -1, 5, 4, 3, 4, 7].map(int));
    assert!(apply(&c, DiffOp::Inc3d).is_zero());
}

#[test]
fn jet_examples() {
    let x3 = PolyTensor::scalar(parse_poly("x^3", 1).unwrap());
    let j = poly_jet(&x3, &[int(2)], 2);
    assert_eq!(j[0], vec![vec![int(8)], vec![int(12)], vec![int(12)]]);
    let c = PolyTensor::scalar(MultiPoly::constant(2, ratio(7, 3)));
    assert_eq!(poly_jet(&c, &[int(5), int(-1)], 1)[0], vec![vec![ratio(7, 3)], vec![int(0), int(0)]]);
    let x2y = PolyTensor::scalar(p2("x^2*y"));
    assert_eq!(poly_jet(&x2y, &[int(1), int(1)], 1)[0], vec![vec![int(1)], vec![int(2), int(1)]]);
}

#[test]
fn shape_mismatch_names_operator_and_shape() {
    let v = PolyTensor::vector(vec![p2("x"), p2("y")]);
    let err = v.apply(DiffOp::Hess).unwrap_err();
    assert!(err.to_string().contains("hess"), "{err}");
    assert!(err.to_string().contains("2x1"), "{err}");
}

#[test]
fn trace_reversal_examples() {
    let id = PolyTensor::identity(3, 3);
    assert_eq!(trace_reverse(&id), id.scale(&int(-2)));
    assert_eq!(trace_reverse_inverse(&id), id.scale(&ratio(-1, 2)));
}

/// Every matrix-valued monomial field of degree at most 3.
fn matrix_monomials() -> Vec<PolyTensor> {
    let mut out = Vec::new();
    for m in monomials_up_to(2, 3) {
        for slot in 0..4 {
            let mut e = vec![MultiPoly::zero(2); 4];
            e[slot] = MultiPoly::monomial(m.clone(), int(1));
            out.push(PolyTensor::from_entries(Shape::matrix(2), e));
        }
    }
    out
}

fn vector_monomials() -> Vec<PolyTensor> {
    let mut out = Vec::new();
    for m in monomials_up_to(2, 3) {
        for slot in 0..2 {
            let mut e = vec![MultiPoly::zero(2); 2];
            e[slot] = MultiPoly::monomial(m.clone(), int(1));
            out.push(PolyTensor::vector(e));
        }
    }
    out
}

#[test]
fn rot_skw_equals_minus_grad_sskw_on_monomials() {
    for u in matrix_monomials() {
        let lhs = apply(&apply(&u, DiffOp::Skw), DiffOp::Rot);
        let rhs = -&apply(&apply(&u, DiffOp::Sskw), DiffOp::Grad);
        assert_eq!(lhs, rhs, "u = {u:?}");
    }
}

#[test]
fn minus_two_sskw_curl_equals_div_on_monomials() {
    for u in vector_monomials() {
        let lhs = apply(&apply(&u, DiffOp::Curl), DiffOp::Sskw).scale(&int(-2));
        assert_eq!(lhs, apply(&u, DiffOp::Div), "u = {u:?}");
    }
}

#[test]
fn rot_mskw_equals_minus_grad_on_monomials() {
    for m in monomials_up_to(2, 3) {
        let v = PolyTensor::scalar(MultiPoly::monomial(m, int(1)));
        assert_eq!(apply(&apply(&v, DiffOp::Mskw), DiffOp::Rot), -&apply(&v, DiffOp::Grad));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_agrees_with_oracles(m in matrix_strategy()) {
        let r = m.rank();
        prop_assert_eq!(r, oracle_rank(&m));
        prop_assert_eq!(r, m.rank_fraction_free());
        prop_assert_eq!(r, m.transpose().rank());
    }

    #[test]
    fn rank_plus_nullity_is_cols(m in low_rank_strategy()) {
        let ns = m.nullspace();
        prop_assert_eq!(m.rank() + ns.len(), m.cols());
        for v in &ns {
            prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        prop_assert_eq!(oracle_rank(&m.nullspace_matrix()), ns.len());
    }

    #[test]
    fn square_inverse_matches_determinant(m in (1usize..5).prop_flat_map(|n| proptest::collection::vec(-4i64..=4, n * n).prop_map(move |v| (n, v)))) {
        let (n, v) = m;
        let a = ExactMatrix::from_rows(v.chunks(n).map(|r| r.iter().map(|&x| int(x)).collect()).collect());
        match a.inverse() {
            Some(inv) => {
                prop_assert!(!a.determinant().is_zero());
                prop_assert_eq!(a.mul(&inv), ExactMatrix::identity(n));
            }
            None => prop_assert!(a.determinant().is_zero()),
        }
    }

    #[test]
    fn sym_plus_skw_is_identity(u in matrix_field_strategy()) {
        prop_assert_eq!(&apply(&u, DiffOp::Sym) + &apply(&u, DiffOp::Skw), u.clone());
        prop_assert_eq!(apply(&apply(&u, DiffOp::Sym), DiffOp::Transpose), apply(&u, DiffOp::Sym));
    }

    #[test]
    fn sskw_left_inverts_mskw(s in poly_strategy(2, 3)) {
        let f = PolyTensor::scalar(s);
        prop_assert_eq!(apply(&apply(&f, DiffOp::Mskw), DiffOp::Sskw), f);
    }

    #[test]
    fn two_dimensional_complexes(phi in poly_strategy(2, 4), u in proptest::collection::vec(poly_strategy(2, 3), 2)) {
        let f = PolyTensor::scalar(phi);
        prop_assert!(apply(&apply(&f, DiffOp::Grad), DiffOp::Rot).is_zero());
        prop_assert!(apply(&apply(&f, DiffOp::Curl), DiffOp::Div).is_zero());
        let u = PolyTensor::vector(u);
        prop_assert!(apply(&apply(&u, DiffOp::Grad), DiffOp::Rot).is_zero());
        prop_assert!(apply(&apply(&u, DiffOp::Curl), DiffOp::Div).is_zero());
    }

    #[test]
    fn curl_grad_vanishes_in_3d(phi in poly_strategy(3, 3)) {
        let f = PolyTensor::scalar(phi);
        prop_assert!(apply(&apply(&f, DiffOp::Grad), DiffOp::Curl).is_zero());
    }

    #[test]
    fn inc_of_def_vanishes(u in proptest::collection::vec(poly_strategy(3, 2), 3)) {
        // inc def u = 0: the strain of a displacement is compatible.
        let d = apply(&PolyTensor::vector(u), DiffOp::Def);
        prop_assert!(apply(&d, DiffOp::Inc3d).is_zero());
    }

    #[test]
    fn trace_reversal_round_trip(e in proptest::collection::vec(poly_strategy(3, 2), 9)) {
        let g = PolyTensor::from_entries(Shape::matrix(3), e);
        prop_assert_eq!(trace_reverse_inverse(&trace_reverse(&g)), g.clone());
        prop_assert_eq!(trace_reverse(&trace_reverse_inverse(&g)), g);
    }

    #[test]
    fn polynomial_arithmetic_evaluates_pointwise(a in poly_strategy(2, 3), b in poly_strategy(2, 3), x in -4i64..=4, y in 1i64..=4) {
        let pt = [ratio(x, y), ratio(y, 3)];
        prop_assert_eq!((&a * &b).eval(&pt), a.eval(&pt) * b.eval(&pt));
        prop_assert_eq!((&a + &b).eval(&pt), a.eval(&pt) + b.eval(&pt));
        prop_assert!(a.terms().all(|(_, c)| !c.is_zero()));
    }
}
