//! Sine-basis representation of the discrete space: grids, coefficient and
//! nodal fields, exact transforms, projection and differential operators.

pub(crate) mod dealias;
pub(crate) mod field;
mod grid;

pub use field::{
    sine_transform_forward, sine_transform_inverse, NormSet, PhysField, SpectralField,
};
pub use grid::{make_grid, GridSpec};
pub(crate) use grid::{Parity, TestFn};
