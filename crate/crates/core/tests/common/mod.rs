//! Direct-summation helpers shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use cch::spectral::{GridSpec, SpectralField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pi_grid(m: usize) -> GridSpec {
    GridSpec::unit_pi(m).unwrap()
}

pub fn random_field(grid: &GridSpec, rng: &mut ChaCha8Rng) -> SpectralField {
    SpectralField::from_fn(grid, |_, _| rng.gen_range(-1.0..1.0))
}

/// `sum a_k d^dx/dx d^dy/dy [sin(k1 pi x/L1) sin(k2 pi y/L2)]` term by term.
pub fn direct_eval(u: &SpectralField, x: f64, y: f64, dx: bool, dy: bool) -> f64 {
    let (lx, ly) = u.grid().lengths();
    let m = u.grid().modes();
    let mut s = 0.0;
    for k1 in 1..=m {
        let wx = k1 as f64 * PI / lx;
        let fx = if dx {
            wx * (wx * x).cos()
        } else {
            (wx * x).sin()
        };
        for k2 in 1..=m {
            let wy = k2 as f64 * PI / ly;
            let fy = if dy {
                wy * (wy * y).cos()
            } else {
                (wy * y).sin()
            };
            s += u.coeff(k1, k2) * fx * fy;
        }
    }
    s
}

pub fn max_abs_diff<'a>(
    a: impl IntoIterator<Item = &'a f64>,
    b: impl IntoIterator<Item = &'a f64>,
) -> f64 {
    a.into_iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn max_abs<'a>(a: impl IntoIterator<Item = &'a f64>) -> f64 {
    a.into_iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Difference of two fields relative to the size of the second.
pub fn rel_l2(a: &SpectralField, b: &SpectralField) -> f64 {
    let d = a.sub(b).unwrap().l2_norm();
    let s = b.l2_norm();
    if s == 0.0 {
        d
    } else {
        d / s
    }
}
