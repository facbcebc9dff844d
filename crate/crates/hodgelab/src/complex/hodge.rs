use nalgebra::DMatrix;

use super::{ChainVector, Result, TotalComplex};
use crate::linalg;

/// Orthogonal decomposition of a chain vector into exact, harmonic, and
/// coexact parts: `v = b + h + bstar` with `b ∈ range D_{k-1}`,
/// `h ∈ ker D_k ∩ ker D*_k`, `bstar ∈ range D*_{k+1}`, pairwise
/// Gram-orthogonal.
#[derive(Debug, Clone)]
pub struct HodgeSplit {
    pub b: ChainVector,
    pub h: ChainVector,
    pub bstar: ChainVector,
}

/// Euclidean-coordinate harmonic basis: kernel of `[D̃_k; D̃_{k-1}ᵀ]`.
fn harmonic_basis_euclid(total: &TotalComplex, k: usize) -> DMatrix<f64> {
    let n = total.dim(k);
    let d_up = total.d_euclid(k);
    let d_down_t = if k == 0 {
        DMatrix::zeros(0, n)
    } else {
        total.d_euclid(k - 1).transpose()
    };
    let mut stacked = DMatrix::zeros(d_up.nrows() + d_down_t.nrows(), n);
    stacked.view_mut((0, 0), (d_up.nrows(), n)).copy_from(&d_up);
    stacked.view_mut((d_up.nrows(), 0), (d_down_t.nrows(), n)).copy_from(&d_down_t);
    linalg::kernel_basis(&stacked)
}

/// Gram-orthonormal basis of the space of harmonic chains
/// `ker D_k ∩ ker D*_k` at degree `k`.
///
/// Its dimension equals `dim ker D_k − rank D_{k-1}` (the cohomology
/// dimension), which the Hodge decomposition guarantees.
pub fn harmonic_basis(total: &TotalComplex, k: usize) -> Vec<ChainVector> {
    let he = harmonic_basis_euclid(total, k);
    let chol = total.chol(k);
    (0..he.ncols())
        .map(|j| ChainVector {
            degree: k,
            coeffs: chol.from_euclid(&he.column(j).into_owned()),
        })
        .collect()
}

/// Gram-orthonormal harmonic basis packed as matrix columns (possibly empty).
pub(crate) fn harmonic_matrix(total: &TotalComplex, k: usize) -> DMatrix<f64> {
    let cols = harmonic_basis(total, k);
    let mut m = DMatrix::zeros(total.dim(k), cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, &c.coeffs);
    }
    m
}

/// Hodge-decompose `v` at degree `k`.
pub fn hodge_decompose(total: &TotalComplex, k: usize, v: &ChainVector) -> Result<HodgeSplit> {
    if v.coeffs.len() != total.dim(k) {
        return Err(super::ComplexError::ChainLength {
            degree: k,
            expected: total.dim(k),
            got: v.coeffs.len(),
        });
    }
    let chol = total.chol(k);
    let ve = chol.to_euclid(&v.coeffs);

    // exact part: project onto range(D̃_{k-1})
    let be = if k == 0 {
        nalgebra::DVector::zeros(ve.len())
    } else {
        let r = linalg::range_basis(&total.d_euclid(k - 1));
        &r * (r.transpose() * &ve)
    };
    // harmonic part
    let hbasis = harmonic_basis_euclid(total, k);
    let he = &hbasis * (hbasis.transpose() * &ve);
    let bstar_e = &ve - &be - &he;

    Ok(HodgeSplit {
        b: ChainVector { degree: k, coeffs: chol.from_euclid(&be) },
        h: ChainVector { degree: k, coeffs: chol.from_euclid(&he) },
        bstar: ChainVector { degree: k, coeffs: chol.from_euclid(&bstar_e) },
    })
}
