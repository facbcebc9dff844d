//! The two-rod example: a pair of elastically joined one-dimensional rods.
//!
//! The equidimensional description lives on overlapping intervals
//! `U0 = (-1, ε)` and `U1 = (-ε, 1)` whose overlap `(-ε, ε)` carries a
//! distributed coupling of strength `w01/ε`; the mixed-dimensional description
//! lives on `(-1, 0)` and `(0, 1)` coupled through the interface point.
//!
//! [`analytic`] holds the closed-form solutions of both descriptions and the
//! affine-pullback embedding between them; [`fem`] holds an independent
//! finite-element discretization used both as a numerical oracle and as a
//! factory of discrete double complexes.

pub mod analytic;
pub mod fem;

mod params;

pub use params::{ParamError, RodParams};
