//! Finite-dimensional laboratory for Hodge-Laplace problems on double complexes.
//!
//! The crate models one concrete situation: a physical system posed on a pair of
//! overlapping domains (an *equidimensional* description) next to the same system
//! posed on adjacent domains glued along an interface (a *mixed-dimensional*
//! description). Both descriptions carry a cochain complex; the mixed-dimensional
//! one embeds into the equidimensional one as a subcomplex, and the distance
//! between the two Hodge-Laplace solutions can be measured and estimated.
//!
//! Everything here is finite dimensional: spaces are `R^n` with explicit Gram
//! matrices, differentials are matrices, and the analytic machinery (adjoints,
//! Hodge decompositions, Poincaré constants, cochain projections) reduces to
//! dense linear algebra.
//!
//! The crate is organized in three layers:
//!
//! * [`complex`] — weighted double complexes, total complexes, Hodge
//!   decomposition, mixed solvers, and bounded cochain projections onto
//!   subcomplexes. Purely algebraic; knows nothing about rods.
//! * [`rods`] — the concrete two-rod example: closed-form solutions on the
//!   overlapping and on the mixed-dimensional geometry
//!   ([`rods::analytic`]), and an independent finite-element discretization
//!   that doubles as a constructor of discrete complexes ([`rods::fem`]).
//! * [`estimators`] — weighted error norms between the two solutions, smoothed
//!   stress reconstructions, and functional a posteriori error estimators with
//!   efficiency indices.
//!
//! All types are immutable after construction and all operations are pure
//! functions, so values can be shared freely across threads.
//!
//! ```
//! use hodgelab::rods::analytic::solve_cech_analytic;
//! use hodgelab::rods::RodParams;
//!
//! let p = RodParams::new(0.2, 1.0, 1.0, 1.0).unwrap();
//! let sol = solve_cech_analytic(&p);
//! // stress-free ends of the first rod
//! assert!(sol.sigma0(-1.0).abs() < 1e-12);
//! assert!(sol.sigma0(p.epsilon).abs() < 1e-12);
//! ```

pub mod complex;
pub mod estimators;
pub mod linalg;
pub mod quadrature;
pub mod rods;
pub mod triplets;

#[cfg(doctest)]
mod book_doctests;
