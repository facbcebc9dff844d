//! Dense linear-algebra helpers shared by the complex machinery.
//!
//! Every rank, kernel, range, and pseudo-inverse decision routes through
//! symmetric eigendecompositions of `AᵀA` / `AAᵀ` rather than an iterative
//! SVD; the tridiagonal symmetric solver is accurate on the rank-deficient
//! matrices that arise here, where bidiagonal SVD iterations were observed to
//! return non-converged factors silently.
//!
//! Rank policy: a singular value counts as zero below [`RANK_RTOL`] times the
//! largest one. Squaring pushes that to the `λ`-threshold
//! `RANK_RTOL² λ_max`, which sits below the eigenvalue noise floor of f64;
//! the effective cutoff is therefore [`EIG_FLOOR`]`·λ_max` (singular values
//! below ~1e-6 of the largest). All spectra in this crate keep their nonzero
//! singular values at least four orders of magnitude above that line.

use nalgebra::{DMatrix, DVector};

/// Relative singular-value threshold for rank decisions.
pub const RANK_RTOL: f64 = 1e-10;

/// Relative eigenvalue floor for the squared operators.
const EIG_FLOOR: f64 = 1e-12;

/// Symmetric eigendecomposition with eigenvalues sorted ascending.
pub fn sym_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let sym = (m + m.transpose()) * 0.5;
    let se = nalgebra::SymmetricEigen::new(sym);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = idx.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vecs = DMatrix::zeros(n, n);
    for (j, &i) in idx.iter().enumerate() {
        vecs.set_column(j, &se.eigenvectors.column(i));
    }
    (vals, vecs)
}

fn gram_small_side(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.nrows() <= m.ncols() {
        m * m.transpose()
    } else {
        m.transpose() * m
    }
}

/// Numerical rank.
pub fn rank(m: &DMatrix<f64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let (vals, _) = sym_eigen(&gram_small_side(m));
    let lmax = vals.last().copied().unwrap_or(0.0).max(0.0);
    if lmax == 0.0 {
        return 0;
    }
    vals.iter().filter(|&&l| l > eig_threshold(lmax)).count()
}

fn eig_threshold(lmax: f64) -> f64 {
    lmax * (RANK_RTOL * RANK_RTOL).max(EIG_FLOOR)
}

/// Orthonormal basis of the kernel of `m` (columns).
pub fn kernel_basis(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let (vals, vecs) = sym_eigen(&(m.transpose() * m));
    let lmax = vals.last().copied().unwrap_or(0.0).max(0.0);
    let cols: Vec<usize> = (0..n)
        .filter(|&j| lmax == 0.0 || vals[j] <= eig_threshold(lmax))
        .collect();
    let mut out = DMatrix::zeros(n, cols.len());
    for (jj, &j) in cols.iter().enumerate() {
        out.set_column(jj, &vecs.column(j));
    }
    out
}

/// Orthonormal basis of the range (column space) of `m`.
pub fn range_basis(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let nr = m.nrows();
    let (vals, vecs) = sym_eigen(&(m * m.transpose()));
    let lmax = vals.last().copied().unwrap_or(0.0).max(0.0);
    let cols: Vec<usize> =
        (0..nr).filter(|&j| lmax > 0.0 && vals[j] > eig_threshold(lmax)).collect();
    let mut out = DMatrix::zeros(nr, cols.len());
    for (jj, &j) in cols.iter().enumerate() {
        out.set_column(jj, &vecs.column(j));
    }
    out
}

/// Apply the pseudo-inverse: the minimum-norm least-squares solution of
/// `m x = b`, computed as `V_r Λ_r⁻¹ V_rᵀ (mᵀ b)` from the eigenpairs of
/// `mᵀ m`.
pub fn lstsq(m: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    lstsq_cols(m, &DMatrix::from_column_slice(b.len(), 1, b.as_slice()))
        .column(0)
        .into_owned()
}

/// Matrix right-hand-side version of [`lstsq`].
pub fn lstsq_cols(m: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    if m.ncols() == 0 {
        return DMatrix::zeros(0, b.ncols());
    }
    if m.nrows() == 0 {
        return DMatrix::zeros(m.ncols(), b.ncols());
    }
    let (vals, vecs) = sym_eigen(&(m.transpose() * m));
    let lmax = vals.last().copied().unwrap_or(0.0).max(0.0);
    let rhs = m.transpose() * b;
    let mut out = DMatrix::zeros(m.ncols(), b.ncols());
    if lmax == 0.0 {
        return out;
    }
    let thresh = eig_threshold(lmax);
    for j in 0..vals.len() {
        if vals[j] > thresh {
            let v = vecs.column(j);
            let coef = (v.transpose() * &rhs) / vals[j];
            for c in 0..b.ncols() {
                for i in 0..m.ncols() {
                    out[(i, c)] += v[i] * coef[(0, c)];
                }
            }
        }
    }
    out
}

/// Largest singular value (0 for empty matrices).
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let (vals, _) = sym_eigen(&gram_small_side(m));
    vals.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Smallest singular value strictly above the rank threshold, if any.
pub fn min_nonzero_singular_value(m: &DMatrix<f64>) -> Option<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return None;
    }
    let (vals, _) = sym_eigen(&gram_small_side(m));
    let lmax = vals.last().copied().unwrap_or(0.0).max(0.0);
    if lmax == 0.0 {
        return None;
    }
    vals.iter()
        .copied()
        .filter(|&l| l > eig_threshold(lmax))
        .fold(None, |acc: Option<f64>, l| Some(acc.map_or(l, |a| a.min(l))))
        .map(f64::sqrt)
}

/// Frobenius norm.
pub fn fro(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Assemble a matrix from column vectors.
pub fn from_columns(nrows: usize, cols: &[DVector<f64>]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(nrows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    m
}

/// Lower-triangular Cholesky factor of a symmetric positive definite Gram
/// matrix, used to move between Gram coordinates and Euclidean ones.
///
/// For `G = L Lᵀ`, the map `x ↦ Lᵀ x` is an isometry from the `G`-inner
/// product to the Euclidean one, which lets every kernel/range/least-squares
/// question be answered in Euclidean terms.
#[derive(Debug, Clone)]
pub struct GramFactor {
    l: DMatrix<f64>,
}

impl GramFactor {
    /// Factor a symmetric positive definite matrix. Returns `None` if the
    /// Cholesky factorization fails.
    pub fn new(gram: &DMatrix<f64>) -> Option<Self> {
        if gram.nrows() == 0 {
            return Some(Self { l: DMatrix::zeros(0, 0) });
        }
        nalgebra::Cholesky::new(gram.clone()).map(|c| Self { l: c.l() })
    }

    pub fn dim(&self) -> usize {
        self.l.nrows()
    }

    /// `x ↦ Lᵀ x` (Gram coordinates → Euclidean coordinates).
    pub fn to_euclid(&self, x: &DVector<f64>) -> DVector<f64> {
        self.l.transpose() * x
    }

    /// `x̃ ↦ L⁻ᵀ x̃` (Euclidean coordinates → Gram coordinates).
    pub fn from_euclid(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut y = x.clone();
        self.l.transpose().solve_upper_triangular_mut(&mut y);
        y
    }

    pub fn from_euclid_cols(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        let mut y = m.clone();
        self.l.transpose().solve_upper_triangular_mut(&mut y);
        y
    }

    pub fn to_euclid_cols(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        self.l.transpose() * m
    }

    /// Conjugate an operator `M : (V, G_in) → (W, G_out)` into Euclidean
    /// coordinates on both sides: `M̃ = L_outᵀ M L_in⁻ᵀ`.
    pub fn conjugate(m: &DMatrix<f64>, input: &GramFactor, output: &GramFactor) -> DMatrix<f64> {
        let rhs = output.l.transpose() * m;
        // right-multiply by L_in⁻ᵀ: X L_inᵀ = rhs  ⇔  L_in Xᵀ = rhsᵀ
        let mut xt = rhs.transpose();
        input.l.solve_lower_triangular_mut(&mut xt);
        xt.transpose()
    }
}

/// Eigenpairs of the symmetric pencil `A x = λ B x` with `B` positive
/// definite, via the Cholesky reduction. Eigenvalues ascend; eigenvectors are
/// `B`-orthonormal.
pub fn sym_generalized_eigen(a: &DMatrix<f64>, b: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let chol = nalgebra::Cholesky::new(b.clone()).expect("pencil matrix not positive definite");
    let l = chol.l();
    // C = L⁻¹ A L⁻ᵀ
    let mut c = a.clone();
    l.solve_lower_triangular_mut(&mut c);
    let mut ct = c.transpose();
    l.solve_lower_triangular_mut(&mut ct);
    let (vals, vecs_e) = sym_eigen(&ct.transpose());
    let mut vecs = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut v = vecs_e.column(j).into_owned();
        l.transpose().solve_upper_triangular_mut(&mut v);
        vecs.set_column(j, &v);
    }
    (vals, vecs)
}
