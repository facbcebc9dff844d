use nalgebra::{DMatrix, DVector};

use super::{Bigrade, ComplexError, DoubleComplex, Result};
use crate::linalg::{self, GramFactor};

/// Element of a total-complex degree: a coefficient vector partitioned by
/// bigrade blocks.
#[derive(Debug, Clone)]
pub struct ChainVector {
    pub degree: usize,
    pub coeffs: DVector<f64>,
}

impl ChainVector {
    pub fn zero(total: &TotalComplex, degree: usize) -> Self {
        Self { degree, coeffs: DVector::zeros(total.dim(degree)) }
    }

    pub fn from_coeffs(total: &TotalComplex, degree: usize, coeffs: DVector<f64>) -> Result<Self> {
        if coeffs.len() != total.dim(degree) {
            return Err(ComplexError::ChainLength {
                degree,
                expected: total.dim(degree),
                got: coeffs.len(),
            });
        }
        Ok(Self { degree, coeffs })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct ChainSpace {
    /// Bigrades of this degree with their offsets and sizes, in (p,q) order.
    pub blocks: Vec<(Bigrade, usize, usize)>,
    pub gram: DMatrix<f64>,
    pub chol: GramFactor,
    /// Total differential into the next degree.
    pub d: DMatrix<f64>,
}

/// Single-graded assembly of a [`DoubleComplex`]: degree `k` collects the
/// bigrades with `p + q = k`, the Gram is the direct sum of the block Grams,
/// and `D_k = d_h + d_v` assembled block-wise.
#[derive(Debug, Clone)]
pub struct TotalComplex {
    degrees: Vec<ChainSpace>,
}

/// Flatten a double complex into its total complex.
///
/// For each source block `(p,q)` of degree `k`, the `(p+1,q)` output block
/// receives `d_h` and the `(p,q+1)` block receives `d_v`. `D_{k+1} D_k = 0`
/// is re-verified on the assembled matrices.
pub fn assemble_total(dc: &DoubleComplex) -> Result<TotalComplex> {
    let k_max = dc.p_max() + dc.q_max();
    let mut degrees = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut blocks = Vec::new();
        let mut offset = 0usize;
        for p in 0..=k.min(dc.p_max()) {
            let q = k - p;
            if q > dc.q_max() {
                continue;
            }
            let d = dc.dim((p, q));
            if d > 0 {
                blocks.push(((p, q), offset, d));
                offset += d;
            }
        }
        let dim = offset;
        let mut gram = DMatrix::zeros(dim, dim);
        for &(bg, off, sz) in &blocks {
            let s = dc.space(bg).expect("nonzero block has a space");
            gram.view_mut((off, off), (sz, sz)).copy_from(s.gram());
        }
        let chol = GramFactor::new(&gram).ok_or(ComplexError::GramNotPositiveDefinite {
            context: format!("total degree {k}"),
        })?;
        degrees.push(ChainSpace { blocks, gram, chol, d: DMatrix::zeros(0, 0) });
    }

    // assemble D_k block-wise
    for k in 0..=k_max {
        let next_dim = if k + 1 <= k_max { degrees[k + 1].gram.nrows() } else { 0 };
        let mut d = DMatrix::zeros(next_dim, degrees[k].gram.nrows());
        if k + 1 <= k_max {
            let (src_blocks, dst_blocks) =
                (degrees[k].blocks.clone(), degrees[k + 1].blocks.clone());
            for &(bg, soff, ssz) in &src_blocks {
                let (p, q) = bg;
                for (mat, dst) in [(dc.dh(bg), (p + 1, q)), (dc.dv(bg), (p, q + 1))] {
                    if let Some(&(_, doff, dsz)) =
                        dst_blocks.iter().find(|&&(dbg, _, _)| dbg == dst)
                    {
                        d.view_mut((doff, soff), (dsz, ssz)).copy_from(&mat);
                    }
                }
            }
        }
        degrees[k].d = d;
    }

    let total = TotalComplex { degrees };
    // D_{k+1} D_k = 0
    for k in 0..k_max {
        let prod = total.d(k + 1) * total.d(k);
        let scale =
            linalg::spectral_norm(total.d(k + 1)) * linalg::spectral_norm(total.d(k));
        let defect = linalg::fro(&prod);
        let tol = 1e-12 * scale.max(1.0);
        if defect > tol {
            return Err(ComplexError::NotAComplex {
                what: format!("D_{} D_{}", k + 1, k),
                defect,
                tol,
            });
        }
    }
    Ok(total)
}

impl TotalComplex {
    /// Highest degree with a space (possibly of dimension zero).
    pub fn k_max(&self) -> usize {
        self.degrees.len().saturating_sub(1)
    }

    pub fn dim(&self, k: usize) -> usize {
        self.degrees.get(k).map_or(0, |c| c.gram.nrows())
    }

    pub fn gram(&self, k: usize) -> DMatrix<f64> {
        self.degrees
            .get(k)
            .map(|c| c.gram.clone())
            .unwrap_or_else(|| DMatrix::zeros(0, 0))
    }

    pub(crate) fn chol(&self, k: usize) -> GramFactor {
        self.degrees
            .get(k)
            .map(|c| c.chol.clone())
            .unwrap_or_else(|| GramFactor::new(&DMatrix::zeros(0, 0)).unwrap())
    }

    /// Total differential `D_k` (a `dim(k+1) × dim(k)` matrix; empty at the top).
    pub fn d(&self, k: usize) -> &DMatrix<f64> {
        static EMPTY: std::sync::OnceLock<DMatrix<f64>> = std::sync::OnceLock::new();
        self.degrees
            .get(k)
            .map(|c| &c.d)
            .unwrap_or_else(|| EMPTY.get_or_init(|| DMatrix::zeros(0, 0)))
    }

    /// `D_k` in Euclidean coordinates on both sides.
    pub(crate) fn d_euclid(&self, k: usize) -> DMatrix<f64> {
        let out = self.chol(k + 1);
        let inp = self.chol(k);
        if self.dim(k) == 0 {
            return DMatrix::zeros(self.dim(k + 1), 0);
        }
        GramFactor::conjugate(self.d(k), &inp, &out)
    }

    /// Bigrade block layout of degree `k`: `(bigrade, offset, size)` triples.
    pub fn blocks(&self, k: usize) -> &[(Bigrade, usize, usize)] {
        self.degrees.get(k).map(|c| c.blocks.as_slice()).unwrap_or(&[])
    }

    /// View of the block of `v` at the given bigrade.
    pub fn block<'a>(&self, v: &'a ChainVector, bg: Bigrade) -> Option<&'a [f64]> {
        self.blocks(v.degree)
            .iter()
            .find(|&&(b, _, _)| b == bg)
            .map(|&(_, off, sz)| &v.coeffs.as_slice()[off..off + sz])
    }

    /// Gram inner product at degree `k`.
    pub fn inner(&self, k: usize, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        (u.transpose() * self.gram(k) * v)[(0, 0)]
    }

    pub fn norm(&self, k: usize, v: &DVector<f64>) -> f64 {
        self.inner(k, v, v).max(0.0).sqrt()
    }

    /// Graph ("domain complex") Gram at degree `k`: `G_k + D_kᵀ G_{k+1} D_k`.
    pub fn graph_gram(&self, k: usize) -> DMatrix<f64> {
        let g = self.gram(k);
        if self.dim(k + 1) == 0 {
            return g;
        }
        let d = self.d(k);
        g + d.transpose() * self.gram(k + 1) * d
    }

    pub fn graph_norm(&self, k: usize, v: &DVector<f64>) -> f64 {
        let g = self.graph_gram(k);
        (v.transpose() * g * v)[(0, 0)].max(0.0).sqrt()
    }

    /// Gram adjoint `D*_k = G_{k-1}^{-1} D_{k-1}ᵀ G_k` of the differential
    /// into degree `k`, satisfying `⟨D u, v⟩_k = ⟨u, D* v⟩_{k-1}`.
    pub fn adjoint(&self, k: usize) -> Result<DMatrix<f64>> {
        if k == 0 || k > self.k_max() {
            return Err(ComplexError::DegreeOutOfRange { degree: k, max: self.k_max() });
        }
        let dprev = self.d(k - 1);
        let mut x = dprev.transpose() * self.gram(k);
        // G_{k-1} X = D_{k-1}ᵀ G_k
        if x.nrows() > 0 {
            let l = nalgebra::Cholesky::new(self.gram(k - 1)).ok_or(
                ComplexError::GramNotPositiveDefinite { context: format!("degree {}", k - 1) },
            )?;
            for j in 0..x.ncols() {
                let col = x.column(j).into_owned();
                x.set_column(j, &l.solve(&col));
            }
        }
        Ok(x)
    }
}
