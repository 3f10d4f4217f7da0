//! Linear functionals on piecewise fields: point values, edge moments and
//! interior moments, each optionally applied after a differential operator.

use std::collections::HashMap;

use num_traits::Zero;

use super::field::{Layout, PiecewiseField};
use crate::exactmath::poly::{Monomial, MultiPoly};
use crate::exactmath::scalar::{int, ExactScalar};
use crate::exactmath::tensor::{DiffOp, PolyTensor};
use crate::mesh::Point;

/// The local entity a functional is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DofEntity {
    /// Corner of the macro (a parent vertex).
    Vertex(usize),
    /// Parent edge of the macro.
    Edge(usize),
    Interior,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Measure {
    /// Value at a point, read from one sub-triangle.
    Point { tri: usize, at: Point },
    /// `∫_0^1 f(from + t (to - from)) q(t) dt`, read from one sub-triangle.
    Edge { tri: usize, from: Point, to: Point, weight: MultiPoly },
    /// `Σ_T ∫_T f : w_T` over all sub-triangles, with sub-triangle vertices.
    Interior { triangles: Vec<[Point; 3]>, weights: Vec<PolyTensor> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofFunctional {
    pub entity: DofEntity,
    pub op: Option<DiffOp>,
    /// Weights over the entries of the (operated) field; unused by interior moments.
    pub contraction: Vec<ExactScalar>,
    pub measure: Measure,
    pub label: String,
}

/// Edge weight `1` (degree 0) or `2t - 1` (degree 1).
pub fn edge_weight(degree: u32) -> MultiPoly {
    match degree {
        0 => MultiPoly::one(1),
        1 => MultiPoly::affine(int(-1), &[int(2)]),
        _ => panic!("edge weights are defined up to degree 1"),
    }
}

pub fn unit_vector(len: usize, i: usize) -> Vec<ExactScalar> {
    let mut v = vec![ExactScalar::zero(); len];
    v[i] = int(1);
    v
}

impl DofFunctional {
    pub fn point(entity: DofEntity, tri: usize, at: Point, op: Option<DiffOp>, contraction: Vec<ExactScalar>) -> Self {
        DofFunctional { entity, op, contraction, measure: Measure::Point { tri, at }, label: String::new() }
    }

    pub fn edge(
        entity: DofEntity,
        tri: usize,
        (from, to): (Point, Point),
        op: Option<DiffOp>,
        contraction: Vec<ExactScalar>,
        weight: MultiPoly,
    ) -> Self {
        DofFunctional { entity, op, contraction, measure: Measure::Edge { tri, from, to, weight }, label: String::new() }
    }

    pub fn interior(triangles: Vec<[Point; 3]>, weights: Vec<PolyTensor>) -> Self {
        DofFunctional {
            entity: DofEntity::Interior,
            op: None,
            contraction: Vec::new(),
            measure: Measure::Interior { triangles, weights },
            label: String::new(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    fn touches(&self, tri: usize) -> bool {
        match &self.measure {
            Measure::Point { tri: t, .. } | Measure::Edge { tri: t, .. } => *t == tri,
            Measure::Interior { .. } => true,
        }
    }

    fn contracted(&self, piece: &PolyTensor) -> MultiPoly {
        assert_eq!(self.contraction.len(), piece.shape().len(), "contraction length does not match field shape");
        let mut acc = MultiPoly::zero(2);
        for (c, e) in self.contraction.iter().zip(piece.entries()) {
            if !c.is_zero() && !e.is_zero() {
                acc += &e.scale(c);
            }
        }
        acc
    }

    fn operated(&self, piece: &PolyTensor) -> PolyTensor {
        match self.op {
            Some(op) => piece.apply(op).unwrap_or_else(|e| panic!("functional `{}`: {e}", self.label)),
            None => piece.clone(),
        }
    }

    fn eval_piece(&self, tri: usize, piece: &PolyTensor, moments: &mut MomentCache) -> ExactScalar {
        if !self.touches(tri) {
            return ExactScalar::zero();
        }
        let f = self.operated(piece);
        match &self.measure {
            Measure::Point { at, .. } => self.contracted(&f).eval(at),
            Measure::Edge { from, to, weight, .. } => {
                (&self.contracted(&f).restrict_to_segment(from, to) * weight).integrate_unit_interval()
            }
            Measure::Interior { triangles, weights } => {
                let mut acc = ExactScalar::zero();
                for (a, w) in f.entries().iter().zip(weights[tri].entries()) {
                    if a.is_zero() || w.is_zero() {
                        continue;
                    }
                    for (ma, ca) in a.terms() {
                        for (mw, cw) in w.terms() {
                            let exp: Monomial = ma.iter().zip(mw).map(|(x, y)| x + y).collect();
                            acc += ca * cw * moments.get(tri, &triangles[tri], exp);
                        }
                    }
                }
                acc
            }
        }
    }

    pub fn eval(&self, f: &PiecewiseField) -> ExactScalar {
        let mut cache = MomentCache::default();
        f.pieces.iter().enumerate().fold(ExactScalar::zero(), |acc, (t, p)| acc + self.eval_piece(t, p, &mut cache))
    }

    /// The functional as a row over the layout's coefficients.
    pub fn row(&self, layout: &Layout) -> Vec<ExactScalar> {
        let mut cache = MomentCache::default();
        let mut row = vec![ExactScalar::zero(); layout.len()];
        if self.op.is_none() {
            self.direct_row(layout, &mut row, &mut cache);
            return row;
        }
        for t in 0..layout.ntri {
            if !self.touches(t) {
                continue;
            }
            for e in 0..layout.entries() {
                for m in 0..layout.monomials.len() {
                    let piece = layout.unit_piece(e, m);
                    row[layout.index(t, e, m)] = self.eval_piece(t, &piece, &mut cache);
                }
            }
        }
        row
    }
}

impl DofFunctional {
    /// Row of an operator-free functional, computed monomial by monomial.
    fn direct_row(&self, layout: &Layout, row: &mut [ExactScalar], cache: &mut MomentCache) {
        match &self.measure {
            Measure::Point { tri, at } => {
                for (m, mon) in layout.monomials.iter().enumerate() {
                    let v = MultiPoly::monomial(mon.clone(), int(1)).eval(at);
                    for (e, c) in self.contraction.iter().enumerate() {
                        if !c.is_zero() {
                            row[layout.index(*tri, e, m)] = c * &v;
                        }
                    }
                }
            }
            Measure::Edge { tri, from, to, weight } => {
                for (m, mon) in layout.monomials.iter().enumerate() {
                    let trace = MultiPoly::monomial(mon.clone(), int(1)).restrict_to_segment(from, to);
                    let v = (&trace * weight).integrate_unit_interval();
                    for (e, c) in self.contraction.iter().enumerate() {
                        if !c.is_zero() {
                            row[layout.index(*tri, e, m)] = c * &v;
                        }
                    }
                }
            }
            Measure::Interior { triangles, weights } => {
                for (t, w) in weights.iter().enumerate() {
                    for (e, we) in w.entries().iter().enumerate() {
                        for (m, mon) in layout.monomials.iter().enumerate() {
                            let mut acc = ExactScalar::zero();
                            for (mw, cw) in we.terms() {
                                let exp: Monomial = mon.iter().zip(mw).map(|(x, y)| x + y).collect();
                                acc += cw * cache.get(t, &triangles[t], exp);
                            }
                            row[layout.index(t, e, m)] = acc;
                        }
                    }
                }
            }
        }
    }
}

/// Cached monomial integrals over sub-triangles.
#[derive(Default)]
struct MomentCache {
    values: HashMap<(usize, Monomial), ExactScalar>,
}

impl MomentCache {
    fn get(&mut self, tri: usize, vertices: &[Point; 3], exp: Monomial) -> ExactScalar {
        self.values
            .entry((tri, exp.clone()))
            .or_insert_with(|| MultiPoly::monomial(exp, int(1)).integrate_triangle([&vertices[0], &vertices[1], &vertices[2]]))
            .clone()
    }
}

/// Rows of a list of functionals, stacked.
pub fn functional_rows(dofs: &[DofFunctional], layout: &Layout) -> Vec<Vec<ExactScalar>> {
    dofs.iter().map(|d| d.row(layout)).collect()
}
