//! Sine-Galerkin spectral solver for the two-dimensional convective
//! Cahn-Hilliard equation
//!
//! ```text
//! u_t + gamma lap^2 u = lap phi(u) + d . grad(u^2),   phi(u) = gamma2 u^3 + gamma1 u^2 - u,
//! ```
//!
//! on a rectangle with `u = lap u = 0` on the boundary, together with the
//! tooling used to check it: exact-quadrature Galerkin oracles, manufactured
//! solutions, stability monitors and convergence-order fits.

pub mod diagnostics;
pub mod error;
pub mod initial;
pub mod io;
pub mod model;
pub mod solver;
pub mod spectral;
pub mod stepper;
pub mod verification;

pub use error::{Error, Result};
pub use model::ModelParams;
pub use spectral::{make_grid, GridSpec, NormSet, PhysField, SpectralField};
