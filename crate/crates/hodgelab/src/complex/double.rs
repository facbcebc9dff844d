use std::collections::BTreeMap;

use nalgebra::DMatrix;

use super::{ComplexError, InnerProductSpace, Result};
use crate::linalg;

/// Position in the bigraded lattice: `p` is the horizontal (cover/codimension)
/// index, `q` the vertical (form-degree) index.
pub type Bigrade = (usize, usize);

/// First-quadrant bounded double complex of inner product spaces with
/// anticommuting differentials `d_h : (p,q) → (p+1,q)` and
/// `d_v : (p,q) → (p,q+1)`.
///
/// Bigrades not present in the map are dimension zero; differentials not
/// present are zero maps. Constructed through [`DoubleComplexBuilder`], which
/// validates shapes, `d_h² = 0`, `d_v² = 0`, and `d_h d_v + d_v d_h = 0`.
#[derive(Debug, Clone)]
pub struct DoubleComplex {
    p_max: usize,
    q_max: usize,
    spaces: BTreeMap<Bigrade, InnerProductSpace>,
    d_h: BTreeMap<Bigrade, DMatrix<f64>>,
    d_v: BTreeMap<Bigrade, DMatrix<f64>>,
}

/// Tolerance factor for the `d² = 0` and anticommutation checks.
const COMPLEX_TOL: f64 = 1e-12;

#[derive(Debug, Default)]
pub struct DoubleComplexBuilder {
    spaces: BTreeMap<Bigrade, InnerProductSpace>,
    d_h: BTreeMap<Bigrade, DMatrix<f64>>,
    d_v: BTreeMap<Bigrade, DMatrix<f64>>,
}

impl DoubleComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn space(mut self, bg: Bigrade, s: InnerProductSpace) -> Self {
        if s.dim() > 0 {
            self.spaces.insert(bg, s);
        }
        self
    }

    /// Horizontal differential out of `bg`, shape `dim(p+1,q) × dim(p,q)`.
    pub fn d_h(mut self, bg: Bigrade, m: DMatrix<f64>) -> Self {
        self.d_h.insert(bg, m);
        self
    }

    /// Vertical differential out of `bg`, shape `dim(p,q+1) × dim(p,q)`.
    pub fn d_v(mut self, bg: Bigrade, m: DMatrix<f64>) -> Self {
        self.d_v.insert(bg, m);
        self
    }

    pub fn build(self) -> Result<DoubleComplex> {
        let p_max = self.spaces.keys().map(|&(p, _)| p).max().unwrap_or(0);
        let q_max = self.spaces.keys().map(|&(_, q)| q).max().unwrap_or(0);
        let dc = DoubleComplex { p_max, q_max, spaces: self.spaces, d_h: self.d_h, d_v: self.d_v };

        // shape checks, naming the offending bigrade
        for (&(p, q), m) in &dc.d_h {
            let (er, ec) = (dc.dim((p + 1, q)), dc.dim((p, q)));
            if m.nrows() != er || m.ncols() != ec {
                return Err(ComplexError::DifferentialShape {
                    which: "d_h",
                    p,
                    q,
                    expected_rows: er,
                    expected_cols: ec,
                    got_rows: m.nrows(),
                    got_cols: m.ncols(),
                });
            }
        }
        for (&(p, q), m) in &dc.d_v {
            let (er, ec) = (dc.dim((p, q + 1)), dc.dim((p, q)));
            if m.nrows() != er || m.ncols() != ec {
                return Err(ComplexError::DifferentialShape {
                    which: "d_v",
                    p,
                    q,
                    expected_rows: er,
                    expected_cols: ec,
                    got_rows: m.nrows(),
                    got_cols: m.ncols(),
                });
            }
        }

        // d_h d_h = 0, d_v d_v = 0, anticommutation, per bigrade
        for p in 0..=p_max {
            for q in 0..=q_max {
                let hh = dc.dh((p + 1, q)) * dc.dh((p, q));
                dc.check_zero(hh, "d_h∘d_h", (p, q), &[dc.dh((p + 1, q)), dc.dh((p, q))])?;
                let vv = dc.dv((p, q + 1)) * dc.dv((p, q));
                dc.check_zero(vv, "d_v∘d_v", (p, q), &[dc.dv((p, q + 1)), dc.dv((p, q))])?;
                let anti = dc.dv((p + 1, q)) * dc.dh((p, q)) + dc.dh((p, q + 1)) * dc.dv((p, q));
                dc.check_zero(
                    anti,
                    "d_v d_h + d_h d_v",
                    (p, q),
                    &[dc.dv((p + 1, q)), dc.dh((p, q))],
                )?;
            }
        }
        Ok(dc)
    }
}

impl DoubleComplex {
    pub fn builder() -> DoubleComplexBuilder {
        DoubleComplexBuilder::new()
    }

    pub fn p_max(&self) -> usize {
        self.p_max
    }

    pub fn q_max(&self) -> usize {
        self.q_max
    }

    pub fn dim(&self, bg: Bigrade) -> usize {
        self.spaces.get(&bg).map_or(0, |s| s.dim())
    }

    pub fn space(&self, bg: Bigrade) -> Option<&InnerProductSpace> {
        self.spaces.get(&bg)
    }

    /// Bigrades with nonzero dimension, in lexicographic order.
    pub fn bigrades(&self) -> impl Iterator<Item = Bigrade> + '_ {
        self.spaces.keys().copied()
    }

    /// Horizontal differential out of `bg` (zero matrix when absent).
    pub fn dh(&self, bg: Bigrade) -> DMatrix<f64> {
        let (p, q) = bg;
        self.d_h
            .get(&bg)
            .cloned()
            .unwrap_or_else(|| DMatrix::zeros(self.dim((p + 1, q)), self.dim(bg)))
    }

    /// Vertical differential out of `bg` (zero matrix when absent).
    pub fn dv(&self, bg: Bigrade) -> DMatrix<f64> {
        let (p, q) = bg;
        self.d_v
            .get(&bg)
            .cloned()
            .unwrap_or_else(|| DMatrix::zeros(self.dim((p, q + 1)), self.dim(bg)))
    }

    fn check_zero(
        &self,
        m: DMatrix<f64>,
        what: &str,
        bg: Bigrade,
        factors: &[DMatrix<f64>],
    ) -> Result<()> {
        let scale: f64 = factors.iter().map(linalg::spectral_norm).product();
        let defect = linalg::fro(&m);
        let tol = COMPLEX_TOL * scale.max(1.0);
        if defect > tol {
            return Err(ComplexError::NotAComplex {
                what: format!("{what} at bigrade ({},{})", bg.0, bg.1),
                defect,
                tol,
            });
        }
        Ok(())
    }
}
