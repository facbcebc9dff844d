//! Weighted double complexes, total complexes, and the Hodge machinery.
//!
//! A [`DoubleComplex`] is a first-quadrant lattice of finite-dimensional inner
//! product spaces with anticommuting horizontal and vertical differentials.
//! [`assemble_total`] flattens it into a [`TotalComplex`], the single-graded
//! complex on which everything else operates: Gram adjoints, Hodge
//! decomposition, harmonic bases, Poincaré constants, mixed Hodge-Laplace
//! solvers, and bounded cochain projections onto subcomplexes.

mod double;
mod hodge;
mod poincare;
mod solve;
mod space;
mod subcomplex;
mod total;

pub use double::{Bigrade, DoubleComplex, DoubleComplexBuilder};
pub use hodge::{harmonic_basis, hodge_decompose, HodgeSplit};
pub use poincare::poincare_constant;
pub use solve::{solve_hodge_laplace_mixed, solve_subcomplex_mixed, MixedSolution};
pub use space::InnerProductSpace;
pub use subcomplex::{
    best_approximation_error, cochain_projection, harmonic_gap, CochainProjection,
    SubcomplexEmbedding,
};
pub use total::{assemble_total, ChainVector, TotalComplex};

use thiserror::Error;

/// Errors raised while constructing or operating on complexes.
#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("gram matrix at {context} is not positive definite")]
    GramNotPositiveDefinite { context: String },
    #[error("dimension mismatch for {which} at bigrade ({p},{q}): expected {expected_rows}x{expected_cols}, got {got_rows}x{got_cols}")]
    DifferentialShape {
        which: &'static str,
        p: usize,
        q: usize,
        expected_rows: usize,
        expected_cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("complex property violated: {what} (defect {defect:.3e} exceeds {tol:.3e})")]
    NotAComplex { what: String, defect: f64, tol: f64 },
    #[error("degree {degree} out of range (max {max})")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("chain vector length {got} does not match degree {degree} dimension {expected}")]
    ChainLength { degree: usize, expected: usize, got: usize },
    #[error("no Poincaré constant (zero differential)")]
    ZeroDifferential,
    #[error("embedding at degree {degree} is not a cochain map (defect {defect:.3e})")]
    NotACochainMap { degree: usize, defect: f64 },
    #[error("embedding at degree {degree} does not have full column rank")]
    RankDeficientEmbedding { degree: usize },
    #[error("assumption (2.9b) violated: harmonic dimensions differ at degree {degree} (ambient {ambient}, subcomplex {subcomplex})")]
    HarmonicDimensionMismatch { degree: usize, ambient: usize, subcomplex: usize },
    #[error("saddle system singular at degree {degree}")]
    SingularSaddle { degree: usize },
}

pub type Result<T> = std::result::Result<T, ComplexError>;
