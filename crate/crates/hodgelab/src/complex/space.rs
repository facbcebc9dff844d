use nalgebra::DMatrix;

use super::{ComplexError, Result};

/// A finite-dimensional real inner product space: `R^dim` with a symmetric
/// positive definite Gram matrix.
///
/// When a space is instantiated from an overlap-weighted cover, the Gram
/// already carries the weight `ε^{-p}`; `weight_exponent` records that `p`
/// for bookkeeping only and never enters any computation.
#[derive(Debug, Clone)]
pub struct InnerProductSpace {
    dim: usize,
    gram: DMatrix<f64>,
    weight_exponent: i32,
}

impl InnerProductSpace {
    /// Build a space, symmetrizing the Gram bitwise and checking positive
    /// definiteness (smallest eigenvalue > 1e-12 times the largest).
    pub fn new(gram: DMatrix<f64>, weight_exponent: i32) -> Result<Self> {
        Self::with_context(gram, weight_exponent, "inner product space")
    }

    pub(crate) fn with_context(
        gram: DMatrix<f64>,
        weight_exponent: i32,
        context: &str,
    ) -> Result<Self> {
        assert_eq!(gram.nrows(), gram.ncols(), "gram must be square");
        let dim = gram.nrows();
        let gram = (&gram + gram.transpose()) * 0.5;
        if dim > 0 {
            let eig = gram.clone().symmetric_eigenvalues();
            let max = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
            if !(min > 1e-12 * max.max(0.0)) {
                return Err(ComplexError::GramNotPositiveDefinite { context: context.to_string() });
            }
        }
        Ok(Self { dim, gram, weight_exponent })
    }

    /// Dimension-zero space (absent bigrades, ends of complexes).
    pub fn trivial() -> Self {
        Self { dim: 0, gram: DMatrix::zeros(0, 0), weight_exponent: 0 }
    }

    /// Euclidean space of the given dimension (identity Gram).
    pub fn euclidean(dim: usize) -> Self {
        Self { dim, gram: DMatrix::identity(dim, dim), weight_exponent: 0 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn weight_exponent(&self) -> i32 {
        self.weight_exponent
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrizes_on_construction() {
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 0.1, 0.3, 2.0]);
        let s = InnerProductSpace::new(g, 0).unwrap();
        assert_eq!(s.gram()[(0, 1)], s.gram()[(1, 0)]);
        assert_eq!(s.gram()[(0, 1)], 0.2);
    }

    #[test]
    fn rejects_indefinite() {
        let g = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(InnerProductSpace::new(g, 0).is_err());
    }

    #[test]
    fn trivial_space_is_fine() {
        let s = InnerProductSpace::trivial();
        assert_eq!(s.dim(), 0);
    }
}
