use nalgebra::{DMatrix, DVector};

use super::hodge::harmonic_matrix;
use super::{ChainVector, ComplexError, Result, SubcomplexEmbedding, TotalComplex};

/// Solution triple of the mixed Hodge-Laplace formulation at degree `k`:
/// `u` at degree `k-1`, the primal `v` and the harmonic multiplier `q` at
/// degree `k`.
#[derive(Debug, Clone)]
pub struct MixedSolution {
    pub u: ChainVector,
    pub v: ChainVector,
    pub q: ChainVector,
}

/// Solve the mixed weak formulation of the degree-`k` Hodge-Laplace problem:
///
/// ```text
/// ⟨u, u'⟩ − ⟨v, D u'⟩            = 0        ∀ u'
/// ⟨D u, v'⟩ + ⟨D v, D v'⟩ + ⟨q, v'⟩ = ⟨f, v'⟩  ∀ v'
/// ⟨v, q'⟩                         = 0        ∀ q' harmonic
/// ```
///
/// The harmonic constraint is imposed with explicit Lagrange multipliers
/// against the computed harmonic basis, which keeps the system square.
pub fn solve_hodge_laplace_mixed(
    total: &TotalComplex,
    k: usize,
    f: &ChainVector,
) -> Result<MixedSolution> {
    if f.coeffs.len() != total.dim(k) {
        return Err(ComplexError::ChainLength {
            degree: k,
            expected: total.dim(k),
            got: f.coeffs.len(),
        });
    }
    let n_u = if k == 0 { 0 } else { total.dim(k - 1) };
    let n_v = total.dim(k);
    let h = harmonic_matrix(total, k);
    let n_q = h.ncols();
    let g_v = total.gram(k);
    let d_prev = if k == 0 { DMatrix::zeros(n_v, 0) } else { total.d(k - 1).clone() };
    let g_u = if k == 0 { DMatrix::zeros(0, 0) } else { total.gram(k - 1) };
    let d_k = total.d(k);
    let g_next = total.gram(k + 1);

    let n = n_u + n_v + n_q;
    let mut a = DMatrix::zeros(n, n);
    let mut rhs = DVector::zeros(n);

    // first equation block
    if n_u > 0 {
        a.view_mut((0, 0), (n_u, n_u)).copy_from(&g_u);
        let coupling = d_prev.transpose() * &g_v;
        a.view_mut((0, n_u), (n_u, n_v)).copy_from(&(-&coupling));
    }
    // second equation block
    if n_u > 0 {
        let gd = &g_v * &d_prev;
        a.view_mut((n_u, 0), (n_v, n_u)).copy_from(&gd);
    }
    let stiff = if d_k.nrows() > 0 {
        d_k.transpose() * &g_next * d_k
    } else {
        DMatrix::zeros(n_v, n_v)
    };
    a.view_mut((n_u, n_u), (n_v, n_v)).copy_from(&stiff);
    if n_q > 0 {
        let gh = &g_v * &h;
        a.view_mut((n_u, n_u + n_v), (n_v, n_q)).copy_from(&gh);
        a.view_mut((n_u + n_v, n_u), (n_q, n_v)).copy_from(&gh.transpose());
    }
    rhs.rows_mut(n_u, n_v).copy_from(&(&g_v * &f.coeffs));

    let lu = a.lu();
    let sol = lu.solve(&rhs).ok_or(ComplexError::SingularSaddle { degree: k })?;

    let u = ChainVector {
        degree: k.saturating_sub(1),
        coeffs: sol.rows(0, n_u).into_owned(),
    };
    let v = ChainVector { degree: k, coeffs: sol.rows(n_u, n_v).into_owned() };
    let q_coef = sol.rows(n_u + n_v, n_q).into_owned();
    let q = ChainVector { degree: k, coeffs: &h * q_coef };
    Ok(MixedSolution { u, v, q })
}

/// Solve the same mixed system with every trial/test space replaced by the
/// embedded subcomplex. The returned triple is expressed in subcomplex
/// coordinates; use [`SubcomplexEmbedding::push`] to map it into the ambient
/// complex.
pub fn solve_subcomplex_mixed(
    total: &TotalComplex,
    k: usize,
    f: &ChainVector,
    emb: &SubcomplexEmbedding,
) -> Result<MixedSolution> {
    let sub = emb.induced_total(total)?;
    // restrict the load: the subcomplex problem tests ⟨f, v'⟩ for v' = E w,
    // i.e. the load in subcomplex coordinates solves G_B f_B = Eᵀ G f.
    let e = emb.map(k);
    let rhs = e.transpose() * total.gram(k) * &f.coeffs;
    let g_b = sub.gram(k);
    let f_b = if g_b.nrows() > 0 {
        nalgebra::Cholesky::new(g_b)
            .ok_or(ComplexError::GramNotPositiveDefinite { context: format!("subcomplex degree {k}") })?
            .solve(&rhs)
    } else {
        DVector::zeros(0)
    };
    solve_hodge_laplace_mixed(&sub, k, &ChainVector { degree: k, coeffs: f_b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{assemble_total, DoubleComplex, InnerProductSpace};
    use approx::assert_relative_eq;

    fn small_complex() -> TotalComplex {
        // path graph on 3 vertices: gradient-type D_0
        let dc = DoubleComplex::builder()
            .space((0, 0), InnerProductSpace::euclidean(3))
            .space((0, 1), InnerProductSpace::euclidean(2))
            .d_v(
                (0, 0),
                DMatrix::from_row_slice(2, 3, &[-1.0, 1.0, 0.0, 0.0, -1.0, 1.0]),
            )
            .build()
            .unwrap();
        assemble_total(&dc).unwrap()
    }

    #[test]
    fn zero_load_gives_zero_solution() {
        let t = small_complex();
        let f = ChainVector::zero(&t, 0);
        let s = solve_hodge_laplace_mixed(&t, 0, &f).unwrap();
        assert_relative_eq!(s.v.coeffs.norm(), 0.0, epsilon = 1e-12);
        assert_relative_eq!(s.q.coeffs.norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn harmonic_load_returns_itself_as_q() {
        let t = small_complex();
        // harmonics at degree 0 are the constants
        let f = ChainVector::from_coeffs(&t, 0, DVector::from_element(3, 2.0)).unwrap();
        let s = solve_hodge_laplace_mixed(&t, 0, &f).unwrap();
        assert_relative_eq!(s.v.coeffs.norm(), 0.0, epsilon = 1e-10);
        assert_relative_eq!((&s.q.coeffs - &f.coeffs).norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn identity_embedding_matches_ambient_solve() {
        let t = small_complex();
        let emb = SubcomplexEmbedding::identity(&t);
        let mut fv = DVector::zeros(3);
        fv[0] = 1.0;
        fv[2] = -1.0;
        let f = ChainVector::from_coeffs(&t, 0, fv).unwrap();
        let amb = solve_hodge_laplace_mixed(&t, 0, &f).unwrap();
        let sub = solve_subcomplex_mixed(&t, 0, &f, &emb).unwrap();
        assert_relative_eq!((&amb.v.coeffs - &sub.v.coeffs).norm(), 0.0, epsilon = 1e-10);
    }
}
