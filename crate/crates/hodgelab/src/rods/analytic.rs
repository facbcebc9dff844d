//! Closed-form solutions of the two-rod problem.
//!
//! The overlapping-domain solution ([`solve_cech_analytic`]) is quadratic on
//! the load-bearing outer pieces and hyperbolic on the overlap, where the two
//! rods exchange stress through the distributed coupling. The
//! mixed-dimensional solution ([`solve_simplicial_analytic`]) is quadratic per
//! rod with the coupling reduced to an algebraic interface condition, and
//! [`embed`] realizes it on the overlapping geometry through scaled affine
//! pullbacks.
//!
//! Both the interface weight `w01` and its overlap-consistent replacement
//! `2 w01` appear: the distributed coupling `w01/ε` integrated across the
//! overlap of length `2ε` carries total strength `2 w01`, so the
//! mixed-dimensional problem whose solutions the overlapping problem actually
//! approaches as `ε → 0` is the one with the doubled interface weight
//! ([`solve_simplicial_matched`]). The plain variant keeps the nominal weight.

use thiserror::Error;

use super::RodParams;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("{field:?} is not defined at x = {x}: domain is [{lo}, {hi}]")]
    OutOfDomain { field: Field, x: f64, lo: f64, hi: f64 },
}

/// Field selector for [`evaluate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    U0,
    U1,
    Sigma0,
    Sigma1,
    Sigma01,
}

impl Field {
    pub const ALL: [Field; 5] = [Field::U0, Field::U1, Field::Sigma0, Field::Sigma1, Field::Sigma01];

    pub fn name(&self) -> &'static str {
        match self {
            Field::U0 => "u0",
            Field::U1 => "u1",
            Field::Sigma0 => "sigma0",
            Field::Sigma1 => "sigma1",
            Field::Sigma01 => "sigma01",
        }
    }
}

/// Pointwise field evaluation with domain checking.
pub trait RodSolution {
    fn params(&self) -> &RodParams;
    fn evaluate(&self, field: Field, x: f64) -> Result<f64, EvalError>;

    /// Domain of a field: `u0`, `sigma0` live on `[-1, ε]`; `u1`, `sigma1`
    /// on `[-ε, 1]`; `sigma01` on `[-ε, ε]`.
    fn domain(&self, field: Field) -> (f64, f64) {
        let eps = self.params().epsilon;
        match field {
            Field::U0 | Field::Sigma0 => (-1.0, eps),
            Field::U1 | Field::Sigma1 => (-eps, 1.0),
            Field::Sigma01 => (-eps, eps),
        }
    }
}

pub(crate) fn check_domain(
    field: Field,
    x: f64,
    lo: f64,
    hi: f64,
) -> Result<(), EvalError> {
    const SLACK: f64 = 1e-12;
    if x < lo - SLACK || x > hi + SLACK {
        Err(EvalError::OutOfDomain { field, x, lo, hi })
    } else {
        Ok(())
    }
}

/// Pointwise value of a field of any rod solution; exact closed-form
/// evaluation, no interpolation.
pub fn evaluate<S: RodSolution>(sol: &S, field: Field, x: f64) -> Result<f64, EvalError> {
    sol.evaluate(field, x)
}

// ---------------------------------------------------------------------------
// overlapping-domain (Čech) solution
// ---------------------------------------------------------------------------

/// Closed-form solution on the overlapping geometry.
///
/// Outside the overlap the displacements are quadratic,
/// `u0 = -r/(2w) x² + A0 x + B0` on `(-1, -ε)` and mirrored for `u1`; on the
/// overlap `u0/u1 = c1 x / 2 ∓ c3 cosh(μx)` with the coupling stress
/// `σ01 = 2 c3 cosh(μx)`. The overlap pieces are kept in `cosh`/`sinh` form
/// to avoid cancellation.
#[derive(Debug, Clone)]
pub struct PiecewiseSolution {
    pub params: RodParams,
    pub mu: f64,
    pub a0: f64,
    pub a1: f64,
    pub b0: f64,
    pub b1: f64,
    pub c1: f64,
    pub c3: f64,
    pub c4: f64,
}

/// Solve the coupled system on the overlapping geometry.
///
/// The coefficients come from the stress-free end conditions
/// `σ0(-1) = σ0(ε) = σ1(-ε) = σ1(1) = 0`, continuity of `u` and `σ` at the
/// overlap edges, and the zero-mean condition (automatic here by the odd
/// symmetry of `u0 + u1`):
///
/// * `μ = sqrt(2 w01 / (w ε))`, `A0 = A1 = -r/w`
/// * `c3 = c4 = r (ε-1) / (2 w μ sinh(με))`
/// * `c1 = r (ε-1) / w` — fixed by `σ0(ε) = 0` together with the `c3` value
/// * `B0 = -B1` from continuity of `u` at `x = ∓ε`
pub fn solve_cech_analytic(p: &RodParams) -> PiecewiseSolution {
    let RodParams { epsilon: eps, r, w, .. } = *p;
    let mu = p.mu();
    let a0 = -r / w;
    let a1 = -r / w;
    let c3 = r * (eps - 1.0) / (2.0 * w * mu * (mu * eps).sinh());
    let c1 = r * (eps - 1.0) / w;
    // continuity of u0 at -ε: outer quadratic meets the overlap formula
    let over_u0 = 0.5 * c1 * (-eps) - c3 * (mu * eps).cosh();
    let outer_u0 = -r / (2.0 * w) * eps * eps + a0 * (-eps);
    let b0 = over_u0 - outer_u0;
    let over_u1 = 0.5 * c1 * eps + c3 * (mu * eps).cosh();
    let outer_u1 = r / (2.0 * w) * eps * eps + a1 * eps;
    let b1 = over_u1 - outer_u1;
    PiecewiseSolution { params: *p, mu, a0, a1, b0, b1, c1, c3, c4: c3 }
}

impl PiecewiseSolution {
    pub fn breakpoints(&self) -> [f64; 2] {
        [-self.params.epsilon, self.params.epsilon]
    }

    pub fn u0(&self, x: f64) -> f64 {
        let p = &self.params;
        if x < -p.epsilon {
            -p.r / (2.0 * p.w) * x * x + self.a0 * x + self.b0
        } else {
            0.5 * self.c1 * x - self.c3 * (self.mu * x).cosh()
        }
    }

    pub fn u1(&self, x: f64) -> f64 {
        let p = &self.params;
        if x > p.epsilon {
            p.r / (2.0 * p.w) * x * x + self.a1 * x + self.b1
        } else {
            0.5 * self.c1 * x + self.c3 * (self.mu * x).cosh()
        }
    }

    pub fn sigma0(&self, x: f64) -> f64 {
        let p = &self.params;
        if x < -p.epsilon {
            -p.r / p.w * x + self.a0
        } else {
            0.5 * self.c1 - self.mu * self.c3 * (self.mu * x).sinh()
        }
    }

    pub fn sigma1(&self, x: f64) -> f64 {
        let p = &self.params;
        if x > p.epsilon {
            p.r / p.w * x + self.a1
        } else {
            0.5 * self.c1 + self.mu * self.c3 * (self.mu * x).sinh()
        }
    }

    pub fn sigma01(&self, x: f64) -> f64 {
        2.0 * self.c3 * (self.mu * x).cosh()
    }

    /// Analytic derivative of `sigma0` (for residual checks).
    #[cfg(test)]
    pub(crate) fn sigma0_prime(&self, x: f64) -> f64 {
        let p = &self.params;
        if x < -p.epsilon {
            -p.r / p.w
        } else {
            -self.mu * self.mu * self.c3 * (self.mu * x).cosh()
        }
    }

    #[cfg(test)]
    pub(crate) fn sigma1_prime(&self, x: f64) -> f64 {
        let p = &self.params;
        if x > p.epsilon {
            p.r / p.w
        } else {
            self.mu * self.mu * self.c3 * (self.mu * x).cosh()
        }
    }
}

impl RodSolution for PiecewiseSolution {
    fn params(&self) -> &RodParams {
        &self.params
    }

    fn evaluate(&self, field: Field, x: f64) -> Result<f64, EvalError> {
        let (lo, hi) = self.domain(field);
        check_domain(field, x, lo, hi)?;
        Ok(match field {
            Field::U0 => self.u0(x),
            Field::U1 => self.u1(x),
            Field::Sigma0 => self.sigma0(x),
            Field::Sigma1 => self.sigma1(x),
            Field::Sigma01 => self.sigma01(x),
        })
    }
}

// ---------------------------------------------------------------------------
// mixed-dimensional solution
// ---------------------------------------------------------------------------

/// Interface-weight convention for the mixed-dimensional solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterfaceWeight {
    /// Interface coupling weight `w01` as given.
    Nominal,
    /// Interface coupling weight `2 w01`, the `ε → 0` limit of the
    /// distributed coupling `w01/ε` over the overlap of length `2ε`.
    /// The embedded solution converges to the overlapping-domain solution
    /// only under this convention.
    OverlapMatched,
}

/// Closed-form mixed-dimensional solution: quadratic displacement and linear
/// stress per rod, interface jump `σ_S01 = B_S1 - B_S0`.
#[derive(Debug, Clone)]
pub struct MdSolution {
    pub params: RodParams,
    pub interface_weight: InterfaceWeight,
    pub a_s0: f64,
    pub a_s1: f64,
    pub b_s0: f64,
    pub b_s1: f64,
}

/// Solve the mixed-dimensional problem with the nominal interface weight:
/// `A_S0 = A_S1 = -r/w`, `B_S0 = r/(2 w01)`, `B_S1 = -B_S0`.
pub fn solve_simplicial_analytic(p: &RodParams) -> MdSolution {
    solve_md(p, InterfaceWeight::Nominal)
}

/// Solve the mixed-dimensional problem with the overlap-matched interface
/// weight `2 w01` (`B_S0 = r/(4 w01)`), the variant the overlapping-domain
/// solution converges to.
pub fn solve_simplicial_matched(p: &RodParams) -> MdSolution {
    solve_md(p, InterfaceWeight::OverlapMatched)
}

fn solve_md(p: &RodParams, iw: InterfaceWeight) -> MdSolution {
    let weight = match iw {
        InterfaceWeight::Nominal => p.w01,
        InterfaceWeight::OverlapMatched => 2.0 * p.w01,
    };
    let a = -p.r / p.w;
    // interface force balance: w σ_S0(0) = weight (B_S1 - B_S0), with
    // σ_S0(0) = A_S0, and zero mean forces B_S0 = -B_S1
    let b_s0 = p.r / (2.0 * weight);
    MdSolution { params: *p, interface_weight: iw, a_s0: a, a_s1: a, b_s0, b_s1: -b_s0 }
}

impl MdSolution {
    pub fn u_s0(&self, y: f64) -> f64 {
        -self.params.r / (2.0 * self.params.w) * y * y + self.a_s0 * y + self.b_s0
    }

    pub fn u_s1(&self, y: f64) -> f64 {
        self.params.r / (2.0 * self.params.w) * y * y + self.a_s1 * y + self.b_s1
    }

    pub fn sigma_s0(&self, y: f64) -> f64 {
        -self.params.r / self.params.w * y + self.a_s0
    }

    pub fn sigma_s1(&self, y: f64) -> f64 {
        self.params.r / self.params.w * y + self.a_s1
    }

    /// Interface jump value `B_S1 - B_S0`.
    pub fn sigma_s01(&self) -> f64 {
        self.b_s1 - self.b_s0
    }
}

// ---------------------------------------------------------------------------
// embedding
// ---------------------------------------------------------------------------

/// A mixed-dimensional solution realized on the overlapping geometry via the
/// scaled affine pullbacks `φ0 = (x+ε)/(1-ε)`, `φ1 = (x-ε)/(1-ε)`.
///
/// Displacements are `(1-ε)`-scaled pullbacks, extended by the constant trace
/// value across the overlap. Stresses pull back with the derivative chain
/// factor (which cancels the scaling), so the pair stays a cochain:
/// `d u_E = σ_E` off the overlap, `σ_E ≡ 0` on it, and the coupling stress is
/// the constant `(1-ε)(B_S1-B_S0)`.
#[derive(Debug, Clone)]
pub struct EmbeddedSolution {
    pub md: MdSolution,
}

/// Embed a mixed-dimensional solution into the overlapping geometry.
pub fn embed(md: &MdSolution, p: &RodParams) -> EmbeddedSolution {
    debug_assert_eq!(md.params, *p, "embedding must reuse the rod parameters");
    EmbeddedSolution { md: md.clone() }
}

impl EmbeddedSolution {
    fn eps(&self) -> f64 {
        self.md.params.epsilon
    }

    pub fn phi0(&self, x: f64) -> f64 {
        (x + self.eps()) / (1.0 - self.eps())
    }

    pub fn phi1(&self, x: f64) -> f64 {
        (x - self.eps()) / (1.0 - self.eps())
    }

    pub fn u0(&self, x: f64) -> f64 {
        let e = self.eps();
        if x < -e {
            (1.0 - e) * self.md.u_s0(self.phi0(x))
        } else {
            (1.0 - e) * self.md.b_s0
        }
    }

    pub fn u1(&self, x: f64) -> f64 {
        let e = self.eps();
        if x > e {
            (1.0 - e) * self.md.u_s1(self.phi1(x))
        } else {
            (1.0 - e) * self.md.b_s1
        }
    }

    pub fn sigma0(&self, x: f64) -> f64 {
        let e = self.eps();
        if x < -e {
            self.md.sigma_s0(self.phi0(x))
        } else {
            0.0
        }
    }

    pub fn sigma1(&self, x: f64) -> f64 {
        let e = self.eps();
        if x > e {
            self.md.sigma_s1(self.phi1(x))
        } else {
            0.0
        }
    }

    pub fn sigma01(&self, _x: f64) -> f64 {
        (1.0 - self.eps()) * self.md.sigma_s01()
    }

    pub fn breakpoints(&self) -> [f64; 2] {
        [-self.eps(), self.eps()]
    }
}

impl RodSolution for EmbeddedSolution {
    fn params(&self) -> &RodParams {
        &self.md.params
    }

    fn evaluate(&self, field: Field, x: f64) -> Result<f64, EvalError> {
        let (lo, hi) = self.domain(field);
        check_domain(field, x, lo, hi)?;
        Ok(match field {
            Field::U0 => self.u0(x),
            Field::U1 => self.u1(x),
            Field::Sigma0 => self.sigma0(x),
            Field::Sigma1 => self.sigma1(x),
            Field::Sigma01 => self.sigma01(x),
        })
    }
}
