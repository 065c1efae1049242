//! Initial-condition presets.

use rand::Rng;

use crate::error::Result;
use crate::spectral::{GridSpec, SpectralField};

/// Amplitude of the leading mode in the smooth preset.
pub const SMOOTH_AMPLITUDE: f64 = 0.5;

/// `0.5 sin(x') sin(y') + 1e-3 sin(3x') sin(2y')` with `x' = pi x / L1`;
/// falls back to the leading mode alone below three modes.
pub fn smooth(grid: &GridSpec) -> SpectralField {
    SpectralField::from_fn(grid, |k1, k2| match (k1, k2) {
        (1, 1) => SMOOTH_AMPLITUDE,
        (3, 2) => 1e-3,
        _ => 0.0,
    })
}

/// Coefficients `(k1^2 + k2^2)^(-3/2)`: the Laplacian of this profile is
/// only logarithmically short of square-integrable.
pub fn borderline(grid: &GridSpec) -> SpectralField {
    SpectralField::from_fn(grid, |k1, k2| ((k1 * k1 + k2 * k2) as f64).powf(-1.5))
}

pub fn mode(grid: &GridSpec, k1: usize, k2: usize, amplitude: f64) -> Result<SpectralField> {
    SpectralField::mode(grid, k1, k2, amplitude)
}

/// Random data in the leading `4 x 4` block with `1 / (k1 k2)^2` decay and
/// L2 norm scaled to `l2`.
pub fn random_smooth<R: Rng + ?Sized>(grid: &GridSpec, rng: &mut R, l2: f64) -> SpectralField {
    let u = SpectralField::from_fn(grid, |k1, k2| {
        if k1 <= 4 && k2 <= 4 {
            rng.gen_range(-1.0..1.0) / ((k1 * k2) as f64).powi(2)
        } else {
            0.0
        }
    });
    let n = u.l2_norm();
    if n == 0.0 {
        u
    } else {
        u.scale(l2 / n)
    }
}

/// Uniform random coefficients in `[-1, 1)` on every mode.
pub fn random_dense<R: Rng + ?Sized>(grid: &GridSpec, rng: &mut R) -> SpectralField {
    SpectralField::from_fn(grid, |_, _| rng.gen_range(-1.0..1.0))
}
