//! Per-step monitors: norms, the discrete L2 growth bound, and the
//! cancellation of the two convective forms.

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::spectral::dealias;
use crate::spectral::field::dot;
use crate::spectral::{NormSet, Parity, SpectralField, TestFn};
use crate::stepper::StepReport;

/// Relative slack allowed on `||u^k||^2 <= factor^k ||u^0||^2`.
pub const L2_BOUND_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsRecord {
    pub step: usize,
    pub time: f64,
    pub norms: NormSet,
    /// `int_Omega u`; not conserved by the dynamics.
    pub mass: f64,
    /// `factor^k ||u^0||^2`, when the bound applies to the run.
    pub l2_bound_rhs: Option<f64>,
    pub l2_bound_ok: Option<bool>,
    pub skew_residual: f64,
    pub solver_iterations: usize,
}

impl DiagnosticsRecord {
    pub fn new(
        step: usize,
        time: f64,
        u: &SpectralField,
        baseline_l2: f64,
        bound_factor: Option<f64>,
        report: Option<&StepReport>,
    ) -> Self {
        let norms = u.norms();
        let l2_bound_rhs = bound_factor.map(|f| f.powi(step as i32) * baseline_l2 * baseline_l2);
        let l2_bound_ok = l2_bound_rhs.map(|b| norms.l2 * norms.l2 <= b * (1.0 + L2_BOUND_SLACK));
        Self {
            step,
            time,
            norms,
            mass: u.mass(),
            l2_bound_rhs,
            l2_bound_ok,
            skew_residual: report.map_or(0.0, |r| r.skew_residual),
            solver_iterations: report.map_or(0, |r| r.iterations),
        }
    }
}

/// Builds the record for step `k` of an unforced run with step size `dt`.
pub fn record(
    k: usize,
    u: &SpectralField,
    baseline_l2: f64,
    params: &ModelParams,
    dt: f64,
    report: Option<&StepReport>,
) -> Result<DiagnosticsRecord> {
    let factor = l2_bound_factor(params, dt)?;
    Ok(DiagnosticsRecord::new(
        k,
        k as f64 * dt,
        u,
        baseline_l2,
        Some(factor),
        report,
    ))
}

/// Per-step growth factor `4 gamma / (4 gamma - c0^2 dt)` of `||u^k||^2`.
pub fn l2_bound_factor(params: &ModelParams, dt: f64) -> Result<f64> {
    let limit = params.dt_limit()?;
    if !(dt < limit) {
        return Err(Error::StabilityViolation { dt, limit });
    }
    let c0 = params.c0()?;
    let g4 = 4.0 * params.gamma;
    Ok(g4 / (g4 - c0 * c0 * dt))
}

/// `|-(2/3)(u_prev d.grad u, u) + (2/3)(u_prev u, d.grad u)|`, normalized by
/// `||u_prev|| ||u|| ||grad u||`; zero if any factor vanishes.
///
/// The two integrals are assembled through different exact quadrature
/// tables, so agreement checks the convective part of the step operator.
pub fn skew_identity_residual(
    u_prev: &SpectralField,
    u: &SpectralField,
    params: &ModelParams,
) -> Result<f64> {
    use Parity::{Even, Odd};
    use TestFn::{DSin, Sin};
    let grid = u.grid();
    grid.check_same(u_prev.grid())?;
    let norms = u.norms();
    let scale = u_prev.l2_norm() * norms.l2 * norms.h1_semi;
    if scale == 0.0 {
        return Ok(0.0);
    }
    let [dx, dy] = params.drift;
    let c = u.coeffs();
    let up = dealias::eval(grid, u_prev.coeffs(), false, false);
    let ux = dealias::eval(grid, c, true, false);
    let uy = dealias::eval(grid, c, false, true);
    let uv = dealias::eval(grid, c, false, false);

    let mut convect = dealias::project(grid, &(&up * &ux), (Sin, Odd), (Sin, Even)) * dx;
    convect.scaled_add(
        dy,
        &dealias::project(grid, &(&up * &uy), (Sin, Even), (Sin, Odd)),
    );
    let prod = &up * &uv;
    let mut tested = dealias::project(grid, &prod, (DSin, Even), (Sin, Even)) * dx;
    tested.scaled_add(
        dy,
        &dealias::project(grid, &prod, (Sin, Even), (DSin, Even)),
    );

    let w = grid.basis_norm_sq();
    let first = -2.0 / 3.0 * w * dot(&convect, c);
    let second = 2.0 / 3.0 * w * dot(&tested, c);
    Ok((first + second).abs() / scale)
}
