use nalgebra::DMatrix;

use super::hodge::harmonic_matrix;
use super::{ChainVector, ComplexError, InnerProductSpace, Result, TotalComplex};
use crate::linalg::{self, GramFactor};

/// Degree-wise embedding of a subcomplex into an ambient total complex:
/// full-column-rank matrices `E_k : dim(B^k) → dim(A^k)` that form a cochain
/// map, `D_k E_k = E_{k+1} D^B_k` for the induced differential `D^B`.
#[derive(Debug, Clone)]
pub struct SubcomplexEmbedding {
    maps: Vec<DMatrix<f64>>,
    induced_d: Vec<DMatrix<f64>>,
}

impl SubcomplexEmbedding {
    /// Validate the per-degree maps against an ambient complex and compute
    /// the induced subcomplex differentials.
    pub fn new(total: &TotalComplex, maps: Vec<DMatrix<f64>>) -> Result<Self> {
        let k_max = total.k_max();
        let mut maps = maps;
        maps.resize_with(k_max + 1, || DMatrix::zeros(0, 0));
        for (k, e) in maps.iter().enumerate() {
            if e.nrows() != total.dim(k) {
                return Err(ComplexError::ChainLength {
                    degree: k,
                    expected: total.dim(k),
                    got: e.nrows(),
                });
            }
            if linalg::rank(e) < e.ncols() {
                return Err(ComplexError::RankDeficientEmbedding { degree: k });
            }
        }
        let mut induced_d = Vec::with_capacity(k_max + 1);
        for k in 0..=k_max {
            let de = total.d(k) * &maps[k];
            let e_next = if k + 1 <= k_max {
                maps[k + 1].clone()
            } else {
                DMatrix::zeros(0, 0)
            };
            // least-squares solve E_{k+1} D_B = D E, then verify the residual
            let ambient_scale = linalg::spectral_norm(total.d(k)).max(1.0);
            let mut d_b = linalg::lstsq_cols(&e_next, &de);
            if linalg::spectral_norm(&de) <= 1e-12 * ambient_scale {
                // the composite is numerically zero; keep the induced
                // differential exactly zero so that downstream rank decisions
                // do not mistake roundoff for structure
                d_b.fill(0.0);
            }
            let resid = &de - &e_next * &d_b;
            let defect = linalg::fro(&resid);
            if defect > 1e-10 * ambient_scale {
                return Err(ComplexError::NotACochainMap { degree: k, defect });
            }
            induced_d.push(d_b);
        }
        Ok(Self { maps, induced_d })
    }

    /// The identity subcomplex (the whole complex).
    pub fn identity(total: &TotalComplex) -> Self {
        let maps = (0..=total.k_max()).map(|k| DMatrix::identity(total.dim(k), total.dim(k)));
        Self::new(total, maps.collect()).expect("identity is a cochain map")
    }

    pub fn map(&self, k: usize) -> &DMatrix<f64> {
        &self.maps[k]
    }

    pub fn sub_dim(&self, k: usize) -> usize {
        self.maps.get(k).map_or(0, |m| m.ncols())
    }

    /// Induced subcomplex differential `D^B_k`.
    pub fn induced_d(&self, k: usize) -> &DMatrix<f64> {
        &self.induced_d[k]
    }

    /// Map a subcomplex-coordinate chain into the ambient complex.
    pub fn push(&self, v: &ChainVector) -> ChainVector {
        ChainVector { degree: v.degree, coeffs: &self.maps[v.degree] * &v.coeffs }
    }

    /// The subcomplex as a total complex of its own: Grams `E_kᵀ G_k E_k`,
    /// differentials `D^B_k`. Degrees become single synthetic bigrades.
    pub fn induced_total(&self, total: &TotalComplex) -> Result<TotalComplex> {
        let k_max = total.k_max();
        let mut builder = super::DoubleComplex::builder();
        for k in 0..=k_max {
            let e = &self.maps[k];
            let g = e.transpose() * total.gram(k) * e;
            if g.nrows() > 0 {
                builder = builder.space(
                    (0, k),
                    InnerProductSpace::with_context(g, 0, &format!("subcomplex degree {k}"))?,
                );
            }
            if k < k_max && self.induced_d[k].nrows() > 0 && self.induced_d[k].ncols() > 0 {
                builder = builder.d_v((0, k), self.induced_d[k].clone());
            }
        }
        super::assemble_total(&builder.build()?)
    }
}

/// Bounded cochain projection `π_k : A^k → B^k` (subcomplex output
/// coordinates) together with its measured graph-norm operator bounds and
/// the measured assumption constants.
#[derive(Debug, Clone)]
pub struct CochainProjection {
    pub pi: Vec<DMatrix<f64>>,
    /// Measured graph-norm operator norm of `E π` per degree.
    pub kappa: Vec<f64>,
    /// Measured subcomplex Poincaré-type constant per degree
    /// (`‖v‖_graph ≤ κ₁ ‖Dv‖_graph` on the orthogonal complement of the
    /// subcomplex kernel).
    pub kappa1: Vec<f64>,
    /// Measured harmonic-overlap constant per degree
    /// (`‖q‖ ≤ κ₂ ‖P_H q‖` on subcomplex harmonics).
    pub kappa2: Vec<f64>,
}

/// Construct the bounded cochain projection
/// `π = P_B(B) + R_B P_H (I − Q_B) + Q_B` onto an embedded subcomplex.
///
/// `Q_B` solves `d Q_B v = P_{B(B)} d v` with values in the orthogonal
/// complement of the subcomplex kernel (which pins it uniquely, the
/// minimum-Gram-norm choice). `R_B` inverts the restriction of the ambient
/// harmonic projection to the subcomplex harmonics; when the harmonic
/// dimensions disagree the construction fails.
pub fn cochain_projection(
    total: &TotalComplex,
    emb: &SubcomplexEmbedding,
) -> Result<CochainProjection> {
    let k_max = total.k_max();
    let sub = emb.induced_total(total)?;

    // precompute per-degree pieces
    let mut pis = Vec::with_capacity(k_max + 1);
    let mut kappa1 = Vec::with_capacity(k_max + 1);
    let mut kappa2 = Vec::with_capacity(k_max + 1);

    for k in 0..=k_max {
        let n = total.dim(k);
        let nb = emb.sub_dim(k);
        let e = emb.map(k);
        let g = total.gram(k);
        let chol = total.chol(k);

        // harmonic bases
        let h_a = harmonic_matrix(total, k);
        let h_b = harmonic_matrix(&sub, k);
        if h_a.ncols() != h_b.ncols() {
            return Err(ComplexError::HarmonicDimensionMismatch {
                degree: k,
                ambient: h_a.ncols(),
                subcomplex: h_b.ncols(),
            });
        }

        // P_{B(B)}: ambient -> B-coords projection onto range(D^B_{k-1})
        let p_bb: DMatrix<f64> = if k == 0 || emb.sub_dim(k - 1) == 0 {
            DMatrix::zeros(nb, n)
        } else {
            let r_b = linalg::range_basis(&sub.d_euclid(k - 1)); // Euclid coords of sub
            if r_b.ncols() == 0 {
                DMatrix::zeros(nb, n)
            } else {
                // basis of B(B) in subcomplex Gram coordinates
                let r = sub.chol(k).from_euclid_cols(&r_b);
                // ambient Euclidean images of those basis chains
                let m = chol.to_euclid_cols(&(e * &r));
                // coefficients = pinv(M) ṽ; assemble as a matrix acting on
                // ambient Gram coordinates
                let pinv_m = linalg::lstsq_cols(&m, &DMatrix::identity(n, n));
                &r * pinv_m * chol.to_euclid_cols(&DMatrix::identity(n, n))
            }
        };

        // Z^\perp(B) basis in subcomplex coordinates
        let z_perp = {
            let d_b_e = sub.d_euclid(k);
            if d_b_e.nrows() == 0 || d_b_e.ncols() == 0 {
                DMatrix::zeros(nb, 0)
            } else {
                // row space of D̃ = orthogonal complement of its kernel
                let rows = linalg::range_basis(&d_b_e.transpose());
                sub.chol(k).from_euclid_cols(&rows)
            }
        };

        // Q_B: solve  (D E)|_{Z⊥} Y = P^{amb}_{B(B),k+1} D_k
        let q_b: DMatrix<f64> = if z_perp.ncols() == 0 {
            DMatrix::zeros(nb, n)
        } else {
            let d_k = total.d(k);
            // ambient projection onto B(B) at degree k+1, in ambient coords
            let p_bb_next_amb: DMatrix<f64> = {
                let nb1 = emb.sub_dim(k + 1);
                if nb1 == 0 {
                    DMatrix::zeros(total.dim(k + 1), total.dim(k + 1))
                } else {
                    let r_b = linalg::range_basis(&sub.d_euclid(k));
                    if r_b.ncols() == 0 {
                        DMatrix::zeros(total.dim(k + 1), total.dim(k + 1))
                    } else {
                        let r = sub.chol(k + 1).from_euclid_cols(&r_b);
                        let cols = emb.map(k + 1) * &r; // ambient chains spanning B(B)^{k+1}
                        let chol1 = total.chol(k + 1);
                        let m = chol1.to_euclid_cols(&cols);
                        let q = linalg::range_basis(&m);
                        // orthogonal projector in Euclidean coords, pulled back
                        chol1.from_euclid_cols(&(&q * q.transpose()))
                            * chol1.to_euclid_cols(&DMatrix::identity(
                                total.dim(k + 1),
                                total.dim(k + 1),
                            ))
                    }
                }
            };
            let rhs = &p_bb_next_amb * d_k;
            let lhs = total.d(k) * (e * &z_perp);
            let y = linalg::lstsq_cols(&lhs, &rhs);
            &z_perp * y
        };

        // R_B ∘ P_H: via M = H_Aᵀ G E H_B
        let r_ph: DMatrix<f64> = if h_a.ncols() == 0 {
            DMatrix::zeros(nb, n)
        } else {
            let m = h_a.transpose() * &g * e * &h_b;
            let minv = m.clone().lu().try_inverse().ok_or(
                ComplexError::HarmonicDimensionMismatch {
                    degree: k,
                    ambient: h_a.ncols(),
                    subcomplex: h_b.ncols(),
                },
            )?;
            // P_H in ambient harmonic coefficients: H_Aᵀ G (·)
            &h_b * minv * h_a.transpose() * &g
        };

        // π = P_{B(B)} + R_B P_H (I − Q_B) + Q_B, with I − Q_B in ambient coords
        let eq = e * &q_b;
        let i_minus_q = DMatrix::identity(n, n) - &eq;
        let pi = &p_bb + &r_ph * &i_minus_q + &q_b;

        // measured assumption constants
        let k1 = measure_kappa1(&sub, k, &z_perp);
        let k2 = measure_kappa2(&h_a, &h_b, e, &g);
        kappa1.push(k1);
        kappa2.push(k2);
        pis.push(pi);
    }

    // measured graph-norm operator norms of E π
    let mut kappa = Vec::with_capacity(k_max + 1);
    for (k, pi) in pis.iter().enumerate() {
        kappa.push(graph_operator_norm(total, k, &(emb.map(k) * pi)));
    }

    Ok(CochainProjection { pi: pis, kappa, kappa1, kappa2 })
}

/// Graph-norm operator norm of a degree-`k` endomorphism of the ambient
/// complex.
pub(crate) fn graph_operator_norm(total: &TotalComplex, k: usize, m: &DMatrix<f64>) -> f64 {
    let gg = total.graph_gram(k);
    if gg.nrows() == 0 {
        return 0.0;
    }
    let f = GramFactor::new(&gg).expect("graph gram positive definite");
    linalg::spectral_norm(&GramFactor::conjugate(m, &f, &f))
}

fn measure_kappa1(sub: &TotalComplex, k: usize, z_perp: &DMatrix<f64>) -> f64 {
    if z_perp.ncols() == 0 {
        return 0.0;
    }
    // sup over y of ‖Wy‖_graph / ‖D_B W y‖_graph, W = z_perp
    let gg = sub.graph_gram(k);
    let num = z_perp.transpose() * gg * z_perp;
    let d = sub.d(k);
    let dz = d * z_perp;
    let den = dz.transpose() * sub.graph_gram(k + 1) * &dz;
    let (vals, _) = linalg::sym_generalized_eigen(&num, &den);
    vals.last().copied().map(f64::sqrt).unwrap_or(0.0)
}

fn measure_kappa2(
    h_a: &DMatrix<f64>,
    h_b: &DMatrix<f64>,
    e: &DMatrix<f64>,
    g: &DMatrix<f64>,
) -> f64 {
    if h_a.ncols() == 0 {
        return 0.0;
    }
    let m = h_a.transpose() * g * (e * h_b);
    match linalg::min_nonzero_singular_value(&m) {
        Some(s) => 1.0 / s,
        None => f64::INFINITY,
    }
}

/// Worst-case distance from Gram-unit ambient harmonic chains to their
/// projections: the largest singular value of `(id − E π)` restricted to the
/// harmonic space. Zero when the cohomology at `k` is trivial.
pub fn harmonic_gap(
    total: &TotalComplex,
    emb: &SubcomplexEmbedding,
    proj: &CochainProjection,
    k: usize,
) -> f64 {
    let h_a = harmonic_matrix(total, k);
    if h_a.ncols() == 0 {
        return 0.0;
    }
    let n = total.dim(k);
    let residual = (DMatrix::identity(n, n) - emb.map(k) * &proj.pi[k]) * &h_a;
    // columns are images of a Gram-orthonormal basis; measure in the Gram norm
    linalg::spectral_norm(&total.chol(k).to_euclid_cols(&residual))
}

/// Best-approximation error of `v` from the embedded subcomplex in the
/// weighted graph norm, via Gram least squares.
pub fn best_approximation_error(
    total: &TotalComplex,
    k: usize,
    v: &ChainVector,
    emb: &SubcomplexEmbedding,
) -> f64 {
    let e = emb.map(k);
    let gg = total.graph_gram(k);
    if e.ncols() == 0 {
        return (v.coeffs.transpose() * &gg * &v.coeffs)[(0, 0)].max(0.0).sqrt();
    }
    let f = GramFactor::new(&gg).expect("graph gram positive definite");
    let et = f.to_euclid_cols(e);
    let vt = f.to_euclid(&v.coeffs);
    let w = linalg::lstsq(&et, &vt);
    (vt - et * w).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{assemble_total, DoubleComplex};
    use nalgebra::DVector;
    use approx::assert_relative_eq;

    fn path_complex() -> TotalComplex {
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
    fn identity_projection_is_identity_with_unit_norm() {
        let t = path_complex();
        let emb = SubcomplexEmbedding::identity(&t);
        let proj = cochain_projection(&t, &emb).unwrap();
        for k in 0..=t.k_max() {
            let n = t.dim(k);
            let defect = linalg::fro(&(&proj.pi[k] - DMatrix::identity(n, n)));
            assert!(defect < 1e-10, "degree {k}: defect {defect}");
            if n > 0 {
                assert_relative_eq!(proj.kappa[k], 1.0, epsilon = 1e-10);
            }
        }
        assert!(harmonic_gap(&t, &emb, &proj, 0) < 1e-12);
    }

    #[test]
    fn best_approximation_of_member_is_zero() {
        let t = path_complex();
        let emb = SubcomplexEmbedding::identity(&t);
        let v = ChainVector::from_coeffs(&t, 0, DVector::from_row_slice(&[1.0, 3.0, -2.0]))
            .unwrap();
        assert!(best_approximation_error(&t, 0, &v, &emb) < 1e-12);
    }
}
