//! Piecewise polynomial fields on a macro and their coefficient coordinates.

use std::collections::HashMap;

use num_traits::Zero;

use crate::exactmath::poly::{monomials_up_to, Monomial, MultiPoly};
use crate::exactmath::scalar::ExactScalar;
use crate::exactmath::tensor::{DiffOp, PolyTensor, Shape, ShapeError};

/// One polynomial tensor per sub-triangle, in global coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseField {
    pub pieces: Vec<PolyTensor>,
}

impl PiecewiseField {
    pub fn zeros(ntri: usize, shape: Shape) -> Self {
        PiecewiseField { pieces: vec![PolyTensor::zeros(shape, 2); ntri] }
    }

    /// The same polynomial tensor on every sub-triangle.
    pub fn uniform(ntri: usize, p: PolyTensor) -> Self {
        PiecewiseField { pieces: vec![p; ntri] }
    }

    pub fn shape(&self) -> Shape {
        self.pieces[0].shape()
    }

    pub fn apply(&self, op: DiffOp) -> Result<PiecewiseField, ShapeError> {
        Ok(PiecewiseField { pieces: self.pieces.iter().map(|p| p.apply(op)).collect::<Result<_, _>>()? })
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|p| p.is_zero())
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        PiecewiseField { pieces: self.pieces.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn add(&self, other: &PiecewiseField) -> Self {
        PiecewiseField { pieces: self.pieces.iter().zip(&other.pieces).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &PiecewiseField) -> Self {
        PiecewiseField { pieces: self.pieces.iter().zip(&other.pieces).map(|(a, b)| a - b).collect() }
    }
}

/// A field does not fit a layout: it has a monomial beyond the layout degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leak {
    pub tri: usize,
    pub entry: usize,
    pub monomial: Monomial,
}

/// Coordinates `(sub-triangle, entry, monomial)` for piecewise polynomials of
/// bounded total degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub ntri: usize,
    pub shape: Shape,
    pub degree: u32,
    pub monomials: Vec<Monomial>,
    lookup: HashMap<Monomial, usize>,
}

impl Layout {
    pub fn new(ntri: usize, shape: Shape, degree: u32) -> Self {
        let monomials = monomials_up_to(2, degree);
        let lookup = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Layout { ntri, shape, degree, monomials, lookup }
    }

    pub fn len(&self) -> usize {
        self.ntri * self.entries() * self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn entries(&self) -> usize {
        self.shape.len()
    }

    pub fn index(&self, tri: usize, entry: usize, mon: usize) -> usize {
        (tri * self.entries() + entry) * self.monomials.len() + mon
    }

    /// The tensor with a single monomial in one entry.
    pub fn unit_piece(&self, entry: usize, mon: usize) -> PolyTensor {
        let mut t = PolyTensor::zeros(self.shape, 2);
        t.entries_mut()[entry] = MultiPoly::monomial(self.monomials[mon].clone(), ExactScalar::from_integer(1.into()));
        t
    }

    pub fn field(&self, coeffs: &[ExactScalar]) -> PiecewiseField {
        assert_eq!(coeffs.len(), self.len());
        let pieces = (0..self.ntri)
            .map(|t| {
                let mut p = PolyTensor::zeros(self.shape, 2);
                for e in 0..self.entries() {
                    let mut poly = MultiPoly::zero(2);
                    for (m, mon) in self.monomials.iter().enumerate() {
                        let c = &coeffs[self.index(t, e, m)];
                        if !c.is_zero() {
                            poly.add_term(mon.clone(), c.clone());
                        }
                    }
                    p.entries_mut()[e] = poly;
                }
                p
            })
            .collect();
        PiecewiseField { pieces }
    }

    pub fn coefficients(&self, f: &PiecewiseField) -> Result<Vec<ExactScalar>, Leak> {
        assert_eq!(f.pieces.len(), self.ntri);
        assert_eq!(f.shape(), self.shape, "field shape does not match layout");
        let mut out = vec![ExactScalar::zero(); self.len()];
        for (t, piece) in f.pieces.iter().enumerate() {
            for (e, poly) in piece.entries().iter().enumerate() {
                for (mon, c) in poly.terms() {
                    let Some(&m) = self.lookup.get(mon) else {
                        return Err(Leak { tri: t, entry: e, monomial: mon.clone() });
                    };
                    out[self.index(t, e, m)] = c.clone();
                }
            }
        }
        Ok(out)
    }
}
