//! Exact rational arithmetic: scalars, multivariate polynomials, polynomial
//! tensor fields and dense matrices.

pub mod matrix;
pub mod parse;
pub mod poly;
pub mod scalar;
pub mod tensor;

pub use matrix::{ExactMatrix, Kernel};
pub use parse::{parse_poly, ParsePolyError};
pub use poly::{monomials_up_to, Monomial, MultiPoly};
pub use scalar::{format_rational, int, parse_rational, ratio, ExactScalar, ParseRationalError};
pub use tensor::{poly_diff, DiffOp, PolyTensor, Shape, ShapeError};
