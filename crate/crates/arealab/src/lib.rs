//! Numerical laboratory for the surface area of nonparametric surfaces
//! z = f(x, y) over closed rectangles.
//!
//! The crate computes the area of a graph surface along several independent
//! routes and cross-validates them:
//!
//! * piecewise-affine interpolants and their elementary (lifted-triangle) area,
//! * edge-integral rectangle sums refined over nested subdivisions,
//! * the classical integral `∬ √(1 + f_x² + f_y²)` where gradients exist,
//! * sectional total variations and their Tonelli combinations.
//!
//! Together these expose the standard pathologies of naive surface area:
//! the inscribed-cylinder polyhedra whose area depends on the refinement
//! path ([`lantern`]), singular fields whose area exceeds the gradient
//! integral by a concentrated mass ([`tonelli`]), and the midpoint
//! inequality for the area functional ([`steiner`]).

pub mod catalog;
pub mod domain;
pub mod field;
pub mod geocze;
pub mod grid;
pub mod lantern;
pub mod mollify;
pub mod quad;
pub mod quasilinear;
pub mod steiner;
pub mod tonelli;
pub mod verify;

mod error;

pub use domain::{Domain, OrientedRect, Subdivision};
pub use error::{Error, Result};
pub use field::{eval_grad, Regularity, ScalarField};
pub use grid::GridField;
