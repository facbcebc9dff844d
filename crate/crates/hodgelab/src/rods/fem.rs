//! Lowest-order finite elements for the two-rod system.
//!
//! Serves two purposes: an independent numerical oracle for the closed-form
//! solutions (piecewise-linear displacements, piecewise-constant stresses,
//! direct banded factorization), and a factory of concrete
//! [`DoubleComplex`](crate::complex::DoubleComplex) instances on which the
//! whole complex machinery can be exercised.
//!
//! The mixed-dimensional meshes are uniform on each rod; the overlapping
//! meshes are their images under the inverse affine maps plus a uniform grid
//! on the overlap with nodes forced at `-ε`, `0`, `ε`. This makes the discrete
//! embedding an exact cochain map.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use super::RodParams;
use crate::complex::{
    assemble_total, ChainVector, DoubleComplex, InnerProductSpace, SubcomplexEmbedding,
    TotalComplex,
};

#[derive(Debug, Error)]
pub enum FemError {
    #[error("overlap unresolved: mesh size {h} exceeds the overlap half-width {eps}")]
    OverlapUnresolved { h: f64, eps: f64 },
    #[error(transparent)]
    Complex(#[from] crate::complex::ComplexError),
}

/// Sorted node coordinates of a 1D mesh.
#[derive(Debug, Clone)]
pub struct Mesh1D {
    points: Vec<f64>,
}

impl Mesh1D {
    fn new(points: Vec<f64>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[1] > w[0]), "nodes must be strictly increasing");
        Self { points }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn n_nodes(&self) -> usize {
        self.points.len()
    }

    pub fn n_elements(&self) -> usize {
        self.points.len() - 1
    }

    pub fn element_len(&self, e: usize) -> f64 {
        self.points[e + 1] - self.points[e]
    }

    /// Consistent P1 mass matrix.
    fn mass(&self) -> DMatrix<f64> {
        let n = self.n_nodes();
        let mut m = DMatrix::zeros(n, n);
        for e in 0..self.n_elements() {
            let h = self.element_len(e);
            m[(e, e)] += h / 3.0;
            m[(e + 1, e + 1)] += h / 3.0;
            m[(e, e + 1)] += h / 6.0;
            m[(e + 1, e)] += h / 6.0;
        }
        m
    }

    /// Exact P1 derivative onto element constants.
    fn derivative(&self) -> DMatrix<f64> {
        let ne = self.n_elements();
        let mut d = DMatrix::zeros(ne, self.n_nodes());
        for e in 0..ne {
            let h = self.element_len(e);
            d[(e, e)] = -1.0 / h;
            d[(e, e + 1)] = 1.0 / h;
        }
        d
    }
}

/// The three meshes of the overlapping discretization, constructed so that
/// the outer parts are affine images of uniform mixed-dimensional rod meshes
/// and the overlap carries a shared uniform grid with nodes at `-ε`, `0`, `ε`.
#[derive(Debug, Clone)]
pub struct RodMeshes {
    pub mesh0: Mesh1D,
    pub mesh1: Mesh1D,
    pub mesh_ov: Mesh1D,
    /// Number of mixed-dimensional elements per rod (the uniform rod mesh).
    pub n_md: usize,
    /// Number of overlap elements (even, so that 0 is a node).
    pub n_ov: usize,
}

impl RodMeshes {
    /// Overlap-node indices into the rod-0 nodal block.
    pub fn ov_nodes0(&self) -> std::ops::Range<usize> {
        ov_start0(self.n_md)..ov_start0(self.n_md) + self.mesh_ov.n_nodes()
    }
}

/// Build the meshes at target size `h` (requires `h ≤ ε`).
pub fn build_rod_meshes(p: &RodParams, h: f64) -> Result<RodMeshes, FemError> {
    let eps = p.epsilon;
    if h > eps {
        return Err(FemError::OverlapUnresolved { h, eps });
    }
    let n_md = (1.0 / h).ceil() as usize;
    let mut n_ov = ((2.0 * eps) / h).ceil() as usize;
    if n_ov % 2 == 1 {
        n_ov += 1;
    }
    n_ov = n_ov.max(2);

    // rod 0: affine images of the uniform mesh on (-1, 0), then the overlap grid
    let mut pts0 = Vec::with_capacity(n_md + n_ov + 1);
    for j in 0..=n_md {
        let y = -1.0 + j as f64 / n_md as f64;
        pts0.push((1.0 - eps) * y - eps);
    }
    for i in 1..=n_ov {
        pts0.push(-eps + 2.0 * eps * i as f64 / n_ov as f64);
    }
    // rod 1: overlap grid, then affine images of the uniform mesh on (0, 1)
    let mut pts1 = Vec::with_capacity(n_md + n_ov + 1);
    for i in 0..=n_ov {
        pts1.push(-eps + 2.0 * eps * i as f64 / n_ov as f64);
    }
    for j in 1..=n_md {
        let y = j as f64 / n_md as f64;
        pts1.push((1.0 - eps) * y + eps);
    }
    let pts_ov: Vec<f64> =
        (0..=n_ov).map(|i| -eps + 2.0 * eps * i as f64 / n_ov as f64).collect();

    Ok(RodMeshes {
        mesh0: Mesh1D::new(pts0),
        mesh1: Mesh1D::new(pts1),
        mesh_ov: Mesh1D::new(pts_ov),
        n_md,
        n_ov,
    })
}

/// Discrete two-rod double complex.
///
/// Bigrades: `(0,0)` nodal displacement pairs, `(0,1)` element stresses,
/// `(1,0)` overlap nodal coupling stress (Gram scaled by `w01/ε`), `(1,1)`
/// overlap element fields closing the square.
#[derive(Debug, Clone)]
pub struct DiscreteRods {
    pub params: RodParams,
    pub h: f64,
    pub mesh0: Mesh1D,
    pub mesh1: Mesh1D,
    pub mesh_ov: Mesh1D,
    /// Number of mixed-dimensional elements per rod (the uniform rod mesh).
    pub n_md: usize,
    /// Number of overlap elements (even, so that 0 is a node).
    pub n_ov: usize,
    pub complex: DoubleComplex,
    pub total: TotalComplex,
}

/// Node index of `-ε` in `mesh0` (overlap nodes follow it).
fn ov_start0(n_md: usize) -> usize {
    n_md
}

/// Build the discrete complex at mesh size `h` (requires `h ≤ ε`).
pub fn build_discrete_rods(p: &RodParams, h: f64) -> Result<DiscreteRods, FemError> {
    build_discrete_rods_with(p, h, false)
}

/// Test hook: `corrupt` flips one sign in the horizontal differential, which
/// must make the complex checks fail.
pub fn build_discrete_rods_with(
    p: &RodParams,
    h: f64,
    corrupt: bool,
) -> Result<DiscreteRods, FemError> {
    let eps = p.epsilon;
    let RodMeshes { mesh0, mesh1, mesh_ov, n_md, n_ov } = build_rod_meshes(p, h)?;

    let (n0, n1, nov) = (mesh0.n_nodes(), mesh1.n_nodes(), mesh_ov.n_nodes());
    let (e0, e1, eov) = (mesh0.n_elements(), mesh1.n_elements(), mesh_ov.n_elements());

    // (0,0): unit-weight nodal mass
    let mut g00 = DMatrix::zeros(n0 + n1, n0 + n1);
    g00.view_mut((0, 0), (n0, n0)).copy_from(&mesh0.mass());
    g00.view_mut((n0, n0), (n1, n1)).copy_from(&mesh1.mass());

    // (0,1): element stresses with rod weight
    let mut g01 = DMatrix::zeros(e0 + e1, e0 + e1);
    for e in 0..e0 {
        g01[(e, e)] = p.w * mesh0.element_len(e);
    }
    for e in 0..e1 {
        g01[(e0 + e, e0 + e)] = p.w * mesh1.element_len(e);
    }

    // (1,0): overlap nodal mass with the ε-weight
    let g10 = mesh_ov.mass() * (p.w01 / eps);
    // (1,1): overlap element fields with the same weight
    let mut g11 = DMatrix::zeros(eov, eov);
    for e in 0..eov {
        g11[(e, e)] = (p.w01 / eps) * mesh_ov.element_len(e);
    }

    // d_v(0,0): per-rod derivative
    let mut dv00 = DMatrix::zeros(e0 + e1, n0 + n1);
    dv00.view_mut((0, 0), (e0, n0)).copy_from(&mesh0.derivative());
    dv00.view_mut((e0, n0), (e1, n1)).copy_from(&mesh1.derivative());

    // d_h(0,0): (δu) = u1|ov − u0|ov on the overlap nodes
    let mut dh00 = DMatrix::zeros(nov, n0 + n1);
    for i in 0..nov {
        dh00[(i, ov_start0(n_md) + i)] = -1.0;
        dh00[(i, n0 + i)] = 1.0;
    }
    if corrupt {
        dh00[(0, n0)] = -dh00[(0, n0)];
    }

    // d_v(1,0): derivative on the overlap grid
    let dv10 = mesh_ov.derivative();

    // d_h(0,1): (δσ) = σ0|ov − σ1|ov on the overlap elements (degree-1 sign)
    let mut dh01 = DMatrix::zeros(eov, e0 + e1);
    for i in 0..eov {
        dh01[(i, n_md + i)] = 1.0;
        dh01[(i, e0 + i)] = -1.0;
    }

    let complex = DoubleComplex::builder()
        .space((0, 0), InnerProductSpace::with_context(g00, 0, "nodal pairs")?)
        .space((0, 1), InnerProductSpace::with_context(g01, 0, "element stresses")?)
        .space((1, 0), InnerProductSpace::with_context(g10, 1, "overlap coupling")?)
        .space((1, 1), InnerProductSpace::with_context(g11, 1, "overlap closure")?)
        .d_v((0, 0), dv00)
        .d_h((0, 0), dh00)
        .d_v((1, 0), dv10)
        .d_h((0, 1), dh01)
        .build()?;
    let total = assemble_total(&complex)?;

    Ok(DiscreteRods { params: *p, h, mesh0, mesh1, mesh_ov, n_md, n_ov, complex, total })
}

impl DiscreteRods {
    /// Exact load functional of `f = (r·1_(-1,-ε), -r·1_(ε,1))` on the nodal
    /// space, and the chain vector `f_c = G₀⁻¹ F` representing it.
    pub fn load(&self) -> (DVector<f64>, ChainVector) {
        let p = &self.params;
        let (n0, n1) = (self.mesh0.n_nodes(), self.mesh1.n_nodes());
        let mut f = DVector::zeros(n0 + n1);
        for e in 0..self.n_md {
            let h = self.mesh0.element_len(e);
            f[e] += p.r * h / 2.0;
            f[e + 1] += p.r * h / 2.0;
        }
        for e in 0..self.n_md {
            let ge = self.n_ov + e;
            let h = self.mesh1.element_len(ge);
            f[n0 + ge] -= p.r * h / 2.0;
            f[n0 + ge + 1] -= p.r * h / 2.0;
        }
        let g0 = self.total.gram(0);
        let chol = nalgebra::Cholesky::new(g0).expect("mass matrix positive definite");
        let coeffs = chol.solve(&f);
        (f, ChainVector { degree: 0, coeffs })
    }

    /// Split a degree-0 chain vector into per-rod nodal vectors.
    pub fn split_nodal(&self, v: &ChainVector) -> (DVector<f64>, DVector<f64>) {
        let n0 = self.mesh0.n_nodes();
        let n1 = self.mesh1.n_nodes();
        (v.coeffs.rows(0, n0).into_owned(), v.coeffs.rows(n0, n1).into_owned())
    }

    /// Overlap-node indices into the rod-0 nodal block.
    pub fn ov_nodes0(&self) -> std::ops::Range<usize> {
        ov_start0(self.n_md)..ov_start0(self.n_md) + self.mesh_ov.n_nodes()
    }

    /// The same rods with the coupling removed: two disconnected components.
    pub fn uncoupled_total(&self) -> Result<TotalComplex, FemError> {
        let g00 = self.complex.space((0, 0)).unwrap().gram().clone();
        let g01 = self.complex.space((0, 1)).unwrap().gram().clone();
        let dv = self.complex.dv((0, 0));
        let dc = DoubleComplex::builder()
            .space((0, 0), InnerProductSpace::with_context(g00, 0, "nodal pairs")?)
            .space((0, 1), InnerProductSpace::with_context(g01, 0, "element stresses")?)
            .d_v((0, 0), dv)
            .build()?;
        Ok(assemble_total(&dc)?)
    }
}

/// Discrete embedding of the mixed-dimensional complex.
///
/// The mixed-dimensional space has uniform nodal meshes per rod (the φ-images
/// of the outer parts), element stresses, and a one-dimensional interface
/// block. Displacements embed as `(1-ε)`-scaled values with constant trace
/// extension over the overlap; stresses embed by value; the interface value
/// embeds as the constant `(1-ε)·j` on the overlap.
pub fn discrete_embedding(
    rods: &DiscreteRods,
) -> Result<SubcomplexEmbedding, FemError> {
    let eps = rods.params.epsilon;
    let scale = 1.0 - eps;
    let n_md = rods.n_md;
    let nov = rods.mesh_ov.n_nodes();
    let (n0, n1) = (rods.mesh0.n_nodes(), rods.mesh1.n_nodes());
    let (e0, e1) = (rods.mesh0.n_elements(), rods.mesh1.n_elements());

    // degree 0: md nodal pairs → čech nodal pairs
    let md_n = n_md + 1;
    let mut e_0 = DMatrix::zeros(n0 + n1, 2 * md_n);
    for j in 0..=n_md {
        // rod 0: node j of the md mesh sits at čech node j
        e_0[(j, j)] = scale;
        // rod 1: node j sits at čech node n_ov + j
        e_0[(n0 + rods.n_ov + j, md_n + j)] = scale;
    }
    // constant trace extension across the overlap nodes; the overlap edges
    // coincide with the φ-images of the interface, so re-assigning them with
    // the same value is harmless
    for i in 0..nov {
        e_0[(ov_start0(n_md) + i, n_md)] = scale; // trace of u_S0 at the interface
        e_0[(n0 + i, md_n)] = scale; // trace of u_S1 at the interface
    }

    // degree 1: md element stresses + interface value
    let md_e = n_md;
    let mut e_1 = DMatrix::zeros(e0 + e1 + nov, 2 * md_e + 1);
    for j in 0..n_md {
        e_1[(j, j)] = 1.0; // rod-0 outer elements
        e_1[(e0 + rods.n_ov + j, md_e + j)] = 1.0; // rod-1 outer elements
    }
    for i in 0..nov {
        e_1[(e0 + e1 + i, 2 * md_e)] = scale; // interface value, constant on the overlap
    }

    // degree 2: the md hierarchy has no content there
    let e_2 = DMatrix::zeros(rods.mesh_ov.n_elements(), 0);

    Ok(SubcomplexEmbedding::new(&rods.total, vec![e_0, e_1, e_2])?)
}

// ---------------------------------------------------------------------------
// primal banded solve
// ---------------------------------------------------------------------------

/// Symmetric positive definite banded matrix; stores the diagonal and `bw`
/// superdiagonals row-wise.
struct BandedSpd {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandedSpd {
    fn zeros(n: usize, bw: usize) -> Self {
        Self { n, bw, data: vec![0.0; n * (bw + 1)] }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j >= i && j - i <= self.bw);
        i * (self.bw + 1) + (j - i)
    }

    fn add(&mut self, i: usize, j: usize, v: f64) {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        let id = self.idx(a, b);
        self.data[id] += v;
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        if b - a > self.bw {
            return 0.0;
        }
        self.data[self.idx(a, b)]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        let id = self.idx(a, b);
        self.data[id] = v;
    }

    /// In-place banded Cholesky (upper factor stored in the band).
    fn factor(&mut self) -> Result<(), FemError> {
        for i in 0..self.n {
            let mut d = self.get(i, i);
            let lo = i.saturating_sub(self.bw);
            for k in lo..i {
                let r = self.get(k, i);
                d -= r * r;
            }
            if d <= 0.0 {
                return Err(FemError::Complex(
                    crate::complex::ComplexError::GramNotPositiveDefinite {
                        context: "primal stiffness".into(),
                    },
                ));
            }
            let d = d.sqrt();
            self.set(i, i, d);
            let hi = (i + self.bw).min(self.n - 1);
            for j in (i + 1)..=hi {
                let mut v = self.get(i, j);
                let lo2 = j.saturating_sub(self.bw).max(lo);
                for k in lo2..i {
                    v -= self.get(k, i) * self.get(k, j);
                }
                self.set(i, j, v / d);
            }
        }
        Ok(())
    }

    fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let mut x = b.clone();
        // forward: Rᵀ y = b
        for i in 0..self.n {
            let lo = i.saturating_sub(self.bw);
            let mut v = x[i];
            for k in lo..i {
                v -= self.get(k, i) * x[k];
            }
            x[i] = v / self.get(i, i);
        }
        // backward: R x = y
        for i in (0..self.n).rev() {
            let hi = (i + self.bw).min(self.n - 1);
            let mut v = x[i];
            for j in (i + 1)..=hi {
                v -= self.get(i, j) * x[j];
            }
            x[i] = v / self.get(i, i);
        }
        x
    }
}

/// Nodal result of the primal solve with the derived stress fields.
#[derive(Debug, Clone)]
pub struct PrimalSolution {
    pub meshes: RodMeshes,
    pub u0: DVector<f64>,
    pub u1: DVector<f64>,
    /// Elementwise stresses `w`-free (plain derivatives), per rod.
    pub sigma0: DVector<f64>,
    pub sigma1: DVector<f64>,
    /// Coupling stress `u1 − u0` at the overlap nodes.
    pub sigma01: DVector<f64>,
}

/// Solve the coupled primal system by banded Cholesky with the zero-mean
/// condition enforced exactly.
///
/// The kernel of the coupled Neumann operator is the constant pair; the load
/// is compatible (its total integral vanishes), so pinning one value and
/// shifting the result to zero weighted mean yields the same solution as a
/// zero-mean Lagrange multiplier (whose optimal value is 0 here).
pub fn solve_primal(p: &RodParams, h: f64) -> Result<PrimalSolution, FemError> {
    let rods = build_rod_meshes(p, h)?;
    let n0 = rods.mesh0.n_nodes();
    let n1 = rods.mesh1.n_nodes();
    let n = n0 + n1;

    // order unknowns by coordinate (ties: rod 0 first) for a small bandwidth
    let mut order: Vec<(f64, usize)> = Vec::with_capacity(n);
    for (i, &x) in rods.mesh0.points().iter().enumerate() {
        order.push((x, i));
    }
    for (i, &x) in rods.mesh1.points().iter().enumerate() {
        order.push((x, n0 + i));
    }
    order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let mut global = vec![0usize; n];
    for (pos, &(_, old)) in order.iter().enumerate() {
        global[old] = pos;
    }

    // collect element contributions to find the bandwidth
    let mut bw = 1usize;
    let ov0 = rods.ov_nodes0().start;
    for e in 0..rods.mesh0.n_elements() {
        bw = bw.max(global[e].abs_diff(global[e + 1]));
    }
    for e in 0..rods.mesh1.n_elements() {
        bw = bw.max(global[n0 + e].abs_diff(global[n0 + e + 1]));
    }
    for i in 0..rods.mesh_ov.n_elements() {
        let dofs = [ov0 + i, ov0 + i + 1, n0 + i, n0 + i + 1];
        for a in dofs {
            for b in dofs {
                bw = bw.max(global[a].abs_diff(global[b]));
            }
        }
    }

    let mut k = BandedSpd::zeros(n, bw);
    let mut rhs = DVector::zeros(n);

    // rod stiffness; the symmetric band stores each unordered pair once
    let add_stiffness = |mesh: &Mesh1D, off: usize, k: &mut BandedSpd| {
        for e in 0..mesh.n_elements() {
            let he = mesh.element_len(e);
            let (a, b) = (global[off + e], global[off + e + 1]);
            let s = p.w / he;
            k.add(a, a, s);
            k.add(b, b, s);
            k.add(a, b, -s);
        }
    };
    add_stiffness(&rods.mesh0, 0, &mut k);
    add_stiffness(&rods.mesh1, n0, &mut k);

    // distributed coupling over the overlap
    let cw = p.w01 / p.epsilon;
    for i in 0..rods.mesh_ov.n_elements() {
        let he = rods.mesh_ov.element_len(i);
        let m = [[he / 3.0, he / 6.0], [he / 6.0, he / 3.0]];
        // dofs with signs: u0 enters with −1, u1 with +1
        let dofs = [(ov0 + i, -1.0), (ov0 + i + 1, -1.0), (n0 + i, 1.0), (n0 + i + 1, 1.0)];
        for (ai, &(da, sa)) in dofs.iter().enumerate() {
            for (bi, &(db, sb)) in dofs.iter().enumerate().skip(ai) {
                k.add(global[da], global[db], cw * sa * sb * m[ai % 2][bi % 2]);
            }
        }
    }

    // load: f = r on the outer part of rod 0, -r on the outer part of rod 1
    let mut f = DVector::zeros(n);
    for e in 0..rods.n_md {
        let he = rods.mesh0.element_len(e);
        f[e] += p.r * he / 2.0;
        f[e + 1] += p.r * he / 2.0;
        let ge = rods.n_ov + e;
        let he1 = rods.mesh1.element_len(ge);
        f[n0 + ge] -= p.r * he1 / 2.0;
        f[n0 + ge + 1] -= p.r * he1 / 2.0;
    }
    for old in 0..n {
        rhs[global[old]] = f[old];
    }

    // pin the leftmost node (global position 0 after sorting)
    let pinned = 0usize;
    for j in pinned..=(pinned + bw).min(n - 1) {
        if j != pinned {
            k.set(pinned, j, 0.0);
        }
    }
    k.set(pinned, pinned, 1.0);
    rhs[pinned] = 0.0;

    k.factor()?;
    let sol = k.solve(&rhs);

    // un-permute and shift to zero weighted mean
    let mut u = DVector::zeros(n);
    for old in 0..n {
        u[old] = sol[global[old]];
    }
    let mut integral = 0.0;
    let mut measure = 0.0;
    for e in 0..rods.mesh0.n_elements() {
        let he = rods.mesh0.element_len(e);
        integral += he * (u[e] + u[e + 1]) / 2.0;
        measure += he;
    }
    for e in 0..rods.mesh1.n_elements() {
        let he = rods.mesh1.element_len(e);
        integral += he * (u[n0 + e] + u[n0 + e + 1]) / 2.0;
        measure += he;
    }
    let shift = integral / measure;
    for i in 0..n {
        u[i] -= shift;
    }

    let u0 = u.rows(0, n0).into_owned();
    let u1 = u.rows(n0, n1).into_owned();
    let mut sigma0 = DVector::zeros(rods.mesh0.n_elements());
    for e in 0..rods.mesh0.n_elements() {
        sigma0[e] = (u0[e + 1] - u0[e]) / rods.mesh0.element_len(e);
    }
    let mut sigma1 = DVector::zeros(rods.mesh1.n_elements());
    for e in 0..rods.mesh1.n_elements() {
        sigma1[e] = (u1[e + 1] - u1[e]) / rods.mesh1.element_len(e);
    }
    let novn = rods.mesh_ov.n_nodes();
    let mut sigma01 = DVector::zeros(novn);
    for i in 0..novn {
        sigma01[i] = u1[i] - u0[ov0 + i];
    }
    Ok(PrimalSolution { meshes: rods, u0, u1, sigma0, sigma1, sigma01 })
}
