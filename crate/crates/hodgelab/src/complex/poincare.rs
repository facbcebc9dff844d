use super::{ComplexError, Result, SubcomplexEmbedding, TotalComplex};
use crate::linalg;

/// Poincaré constant of `D_k`: the reciprocal of the smallest value of
/// `‖D u‖ / ‖u‖` over `u` Gram-orthogonal to the kernel of `D_k`, optionally
/// with `u` restricted to an embedded subcomplex.
///
/// The orthogonality constraint always refers to the ambient kernel, so the
/// restricted infimum runs over a subset of the unrestricted one and the
/// constant can only shrink under restriction. A differential that vanishes
/// identically on the constraint set has no Poincaré constant and yields
/// [`ComplexError::ZeroDifferential`].
pub fn poincare_constant(
    total: &TotalComplex,
    k: usize,
    restriction: Option<&SubcomplexEmbedding>,
) -> Result<f64> {
    let d = total.d_euclid(k);
    let sigma = match restriction {
        None => linalg::min_nonzero_singular_value(&d),
        Some(emb) => {
            // orthonormal basis of the embedded subcomplex in Euclidean coords
            let chol = total.chol(k);
            let q = linalg::range_basis(&chol.to_euclid_cols(emb.map(k)));
            // intersect with the orthogonal complement of ker D̃_k
            let z = linalg::kernel_basis(&d);
            let c = linalg::kernel_basis(&(z.transpose() * &q));
            let w = &q * &c;
            if w.ncols() == 0 {
                return Err(ComplexError::ZeroDifferential);
            }
            linalg::min_nonzero_singular_value(&(&d * &w))
        }
    };
    match sigma {
        Some(s) if s > 0.0 => Ok(1.0 / s),
        _ => Err(ComplexError::ZeroDifferential),
    }
}
