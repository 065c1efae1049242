//! Brute-force Galerkin assembly by tensor Gauss-Legendre quadrature.
//!
//! Everything here evaluates the sine series by direct summation at each
//! quadrature point and integrates against each basis function in turn.
//! No transforms, padded grids or parity bookkeeping are shared with the
//! production path, so agreement between the two is meaningful.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use ndarray::Array2;

use super::quadrature::GaussLegendre;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::spectral::{GridSpec, SpectralField};

/// Largest mode count the dense oracles accept.
pub const MAX_ORACLE_MODES: usize = 4;

/// Per-axis basis values at one coordinate: `sin(k pi x/L)` and its first
/// and second derivatives for `k = 1..=m`.
struct AxisBasis {
    v: Vec<f64>,
    d: Vec<f64>,
    dd: Vec<f64>,
}

impl AxisBasis {
    fn at(x: f64, m: usize, len: f64) -> Self {
        let mut v = Vec::with_capacity(m);
        let mut d = Vec::with_capacity(m);
        let mut dd = Vec::with_capacity(m);
        for k in 1..=m {
            let w = k as f64 * PI / len;
            v.push((w * x).sin());
            d.push(w * (w * x).cos());
            dd.push(-w * w * (w * x).sin());
        }
        Self { v, d, dd }
    }
}

/// Point values of a series and its derivatives.
#[derive(Default, Clone, Copy)]
struct Jet {
    u: f64,
    ux: f64,
    uy: f64,
    lap: f64,
}

fn jet(c: &Array2<f64>, bx: &AxisBasis, by: &AxisBasis) -> Jet {
    let mut j = Jet::default();
    for ((i, k), &a) in c.indexed_iter() {
        j.u += a * bx.v[i] * by.v[k];
        j.ux += a * bx.d[i] * by.v[k];
        j.uy += a * bx.v[i] * by.d[k];
        j.lap += a * (bx.dd[i] * by.v[k] + bx.v[i] * by.dd[k]);
    }
    j
}

struct Quad2 {
    qx: GaussLegendre,
    qy: GaussLegendre,
    bx: Vec<AxisBasis>,
    by: Vec<AxisBasis>,
}

impl Quad2 {
    fn new(grid: &GridSpec, points: usize) -> Self {
        let (lx, ly) = grid.lengths();
        let m = grid.modes();
        let qx = GaussLegendre::new(points, 0.0, lx);
        let qy = GaussLegendre::new(points, 0.0, ly);
        let bx = qx.nodes.iter().map(|&x| AxisBasis::at(x, m, lx)).collect();
        let by = qy.nodes.iter().map(|&y| AxisBasis::at(y, m, ly)).collect();
        Self { qx, qy, bx, by }
    }

    /// `sum_q w_q F(q, test basis)` accumulated into an `m x m` array, where
    /// `integrand` receives the axis bases and the test indices.
    fn galerkin(
        &self,
        m: usize,
        mut integrand: impl FnMut(&AxisBasis, &AxisBasis, usize, usize) -> f64,
    ) -> Array2<f64> {
        let mut out = Array2::zeros((m, m));
        for (bx, wx) in self.bx.iter().zip(&self.qx.weights) {
            for (by, wy) in self.by.iter().zip(&self.qy.weights) {
                let w = wx * wy;
                for k1 in 0..m {
                    for k2 in 0..m {
                        out[[k1, k2]] += w * integrand(bx, by, k1, k2);
                    }
                }
            }
        }
        out
    }
}

fn guard(grid: &GridSpec, points: usize) -> Result<()> {
    let m = grid.modes();
    if m > MAX_ORACLE_MODES {
        return Err(Error::ResolutionTooLow(format!(
            "dense oracle limited to {MAX_ORACLE_MODES} modes, got {m}"
        )));
    }
    if points < 4 * m {
        return Err(Error::ResolutionTooLow(format!(
            "dense oracle needs at least {} quadrature points, got {points}",
            4 * m
        )));
    }
    Ok(())
}

/// Weak-form implicit-step operator assembled term by term:
///
/// `(w/dt, v) + gamma (lap w, lap v) + (phi'(u_prev) grad w, grad v)
///  - (2/3)(u_prev d.grad w, v) + (2/3)(u_prev w, d.grad v)`
///
/// for every basis function `v`, divided by `(v, v)`.
pub fn dense_galerkin_apply(
    w: &SpectralField,
    u_prev: &SpectralField,
    params: &ModelParams,
    dt: f64,
    points: usize,
) -> Result<SpectralField> {
    let grid = w.grid();
    grid.check_same(u_prev.grid())?;
    guard(grid, points)?;
    let m = grid.modes();
    let q = Quad2::new(grid, points);
    let [dx, dy] = params.drift;
    let mut out = q.galerkin(m, |bx, by, k1, k2| {
        let jw = jet(w.coeffs(), bx, by);
        let ju = jet(u_prev.coeffs(), bx, by);
        let v = bx.v[k1] * by.v[k2];
        let vx = bx.d[k1] * by.v[k2];
        let vy = bx.v[k1] * by.d[k2];
        let lapv = bx.dd[k1] * by.v[k2] + bx.v[k1] * by.dd[k2];
        jw.u / dt * v + params.gamma * jw.lap * lapv + params.dphi(ju.u) * (jw.ux * vx + jw.uy * vy)
            - 2.0 / 3.0 * ju.u * (dx * jw.ux + dy * jw.uy) * v
            + 2.0 / 3.0 * ju.u * jw.u * (dx * vx + dy * vy)
    });
    out /= grid.basis_norm_sq();
    SpectralField::new(grid.clone(), out)
}

/// Strong-form right-hand side `-gamma lap^2 u + phi'(u) lap u + phi''(u)|grad u|^2
/// + 2 u d.grad u`, projected by quadrature. The biharmonic term is
/// integrated by parts once (`(lap^2 u, v) = (lap u, lap v)`).
pub fn dense_galerkin_rhs(
    u: &SpectralField,
    params: &ModelParams,
    points: usize,
) -> Result<SpectralField> {
    let grid = u.grid();
    guard(grid, points)?;
    let m = grid.modes();
    let q = Quad2::new(grid, points);
    let [dx, dy] = params.drift;
    let mut out = q.galerkin(m, |bx, by, k1, k2| {
        let j = jet(u.coeffs(), bx, by);
        let v = bx.v[k1] * by.v[k2];
        let lapv = bx.dd[k1] * by.v[k2] + bx.v[k1] * by.dd[k2];
        let grad2 = j.ux * j.ux + j.uy * j.uy;
        -params.gamma * j.lap * lapv
            + (params.dphi(j.u) * j.lap + params.d2phi(j.u) * grad2) * v
            + 2.0 * j.u * (dx * j.ux + dy * j.uy) * v
    });
    out /= grid.basis_norm_sq();
    SpectralField::new(grid.clone(), out)
}

/// `int u v` by tensor Gauss-Legendre quadrature.
pub fn quadrature_inner_product(
    a: &SpectralField,
    b: &SpectralField,
    points: usize,
) -> Result<f64> {
    a.grid().check_same(b.grid())?;
    let q = Quad2::new(a.grid(), points);
    let mut s = 0.0;
    for (bx, wx) in q.bx.iter().zip(&q.qx.weights) {
        for (by, wy) in q.by.iter().zip(&q.qy.weights) {
            s += wx * wy * jet(a.coeffs(), bx, by).u * jet(b.coeffs(), bx, by).u;
        }
    }
    Ok(s)
}

/// Dense matrix of the implicit-step operator, column `j` = `A(e_j)` with
/// modes ordered row-major in `k1`.
pub fn assemble_dense(
    u_prev: &SpectralField,
    params: &ModelParams,
    dt: f64,
    points: usize,
) -> Result<DMatrix<f64>> {
    let grid = u_prev.grid();
    let m = grid.modes();
    let n = m * m;
    let mut a = DMatrix::zeros(n, n);
    for j in 0..n {
        let e = SpectralField::from_fn(grid, |k1, k2| {
            if (k1 - 1) * m + (k2 - 1) == j {
                1.0
            } else {
                0.0
            }
        });
        let col = dense_galerkin_apply(&e, u_prev, params, dt, points)?;
        for (i, v) in col.coeffs().iter().enumerate() {
            a[(i, j)] = *v;
        }
    }
    Ok(a)
}

/// Direct LU solve of the dense implicit step.
pub fn dense_step(
    u_prev: &SpectralField,
    params: &ModelParams,
    dt: f64,
    points: usize,
    forcing: Option<&SpectralField>,
) -> Result<SpectralField> {
    let grid = u_prev.grid();
    let a = assemble_dense(u_prev, params, dt, points)?;
    let mut rhs: Vec<f64> = u_prev.coeffs().iter().map(|c| c / dt).collect();
    if let Some(f) = forcing {
        rhs.iter_mut()
            .zip(f.coeffs().iter())
            .for_each(|(r, f)| *r += f);
    }
    let x = a
        .lu()
        .solve(&DVector::from_vec(rhs))
        .ok_or_else(|| Error::InvalidParams("dense step matrix is singular".into()))?;
    let m = grid.modes();
    SpectralField::new(
        grid.clone(),
        Array2::from_shape_vec((m, m), x.iter().copied().collect()).expect("shape"),
    )
}

/// Largest relative deviation between the production step operator and
/// [`dense_galerkin_apply`] over `pairs` random `(u_prev, w)` draws.
pub fn max_operator_deviation(
    grid: &GridSpec,
    params: &ModelParams,
    dt: f64,
    pairs: usize,
    points: usize,
    seed: u64,
) -> Result<f64> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..pairs {
        let u_prev = crate::initial::random_dense(grid, &mut rng);
        let w = crate::initial::random_dense(grid, &mut rng);
        let fast = crate::stepper::scheme_operator(&w, &u_prev, params, dt)?;
        let slow = dense_galerkin_apply(&w, &u_prev, params, dt, points)?;
        let scale = slow.l2_norm();
        let diff = fast.sub(&slow)?.l2_norm();
        worst = worst.max(if scale > 0.0 { diff / scale } else { diff });
    }
    Ok(worst)
}
