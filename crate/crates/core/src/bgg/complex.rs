//! Cohomology of short cochain complexes `0 → X0 → X1 → … → 0` by rank-nullity.

use serde::Serialize;

use crate::exactmath::ExactMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexReport {
    pub name: String,
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    /// Every consecutive composition vanishes.
    pub is_complex: bool,
    pub cohomology: Vec<usize>,
}

impl ComplexReport {
    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
    }

    pub fn is_exact_after(&self, k: usize) -> bool {
        self.cohomology[k + 1..].iter().all(|&h| h == 0)
    }
}

/// `ops[k]` maps `X_k` to `X_{k+1}`, as a `dims[k+1] × dims[k]` matrix.
pub fn cohomology(name: &str, dims: &[usize], ops: &[&ExactMatrix]) -> ComplexReport {
    assert_eq!(ops.len() + 1, dims.len(), "one operator between consecutive spaces");
    for (k, op) in ops.iter().enumerate() {
        assert_eq!((op.rows(), op.cols()), (dims[k + 1], dims[k]), "operator {k} has the wrong size");
    }
    let ranks: Vec<usize> = ops.iter().map(|op| op.rank()).collect();
    let is_complex = ops.windows(2).all(|w| w[1].mul(w[0]).is_zero());
    let cohomology = (0..dims.len())
        .map(|k| {
            let kernel = dims[k] - ranks.get(k).copied().unwrap_or(0);
            let image = if k == 0 { 0 } else { ranks[k - 1] };
            kernel - image
        })
        .collect();
    ComplexReport { name: name.to_string(), dims: dims.to_vec(), ranks, is_complex, cohomology }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplicial_interval() {
        // Two vertices, one edge: d0 = [-1 1].
        let d0 = ExactMatrix::from_i64(&[&[-1, 1]]);
        let r = cohomology("interval", &[2, 1], &[&d0]);
        assert_eq!(r.cohomology, vec![1, 0]);
        assert_eq!(r.euler_characteristic(), 1);
        assert!(r.is_complex);
    }

    #[test]
    fn broken_complex_detected() {
        let a = ExactMatrix::from_i64(&[&[1], &[0]]);
        let b = ExactMatrix::from_i64(&[&[1, 0]]);
        assert!(!cohomology("bad", &[1, 2, 1], &[&a, &b]).is_complex);
    }
}
