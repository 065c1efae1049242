//! Empirical convergence studies and log-log order fits.

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::solver::SolverConfig;
use crate::spectral::{GridSpec, SpectralField};
use crate::stepper::{run, TimeGrid};

use super::manufactured::ManufacturedSolution;

/// Errors below this are treated as round-off; a study whose errors all sit
/// there has nothing to fit.
pub const NOISE_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Time,
    Space,
}

impl Axis {
    /// Step size `h` used on the fit's abscissa: `dt`, or `1/N` in space.
    pub fn step_size(self, resolution: f64) -> f64 {
        match self {
            Axis::Time => resolution,
            Axis::Space => 1.0 / resolution,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level {
    /// `dt` for time studies, mode count `N` for space studies.
    pub resolution: f64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub axis: Axis,
    pub levels: Vec<Level>,
    /// Least-squares slope of `log(error)` against `log(h)`; `None` when
    /// the data is degenerate (see `note`).
    pub fitted_order: Option<f64>,
    pub note: Option<String>,
}

impl ConvergenceReport {
    fn build(axis: Axis, levels: Vec<Level>) -> Self {
        let h: Vec<f64> = levels
            .iter()
            .map(|l| axis.step_size(l.resolution))
            .collect();
        let e: Vec<f64> = levels.iter().map(|l| l.error).collect();
        let (fitted_order, note) = if e.iter().all(|&x| x < NOISE_FLOOR) {
            (
                None,
                Some("all errors at round-off level; order not meaningful".to_string()),
            )
        } else {
            match estimate_order(&h, &e) {
                Ok(p) => (Some(p), None),
                Err(err) => (None, Some(err.to_string())),
            }
        };
        Self {
            axis,
            levels,
            fitted_order,
            note,
        }
    }

    /// `error[i] / error[i + 1]` for consecutive levels.
    pub fn ratios(&self) -> Vec<f64> {
        self.levels
            .windows(2)
            .map(|w| w[0].error / w[1].error)
            .collect()
    }
}

/// Least-squares slope of `log(errors)` against `log(step_sizes)`.
pub fn estimate_order(step_sizes: &[f64], errors: &[f64]) -> Result<f64> {
    if step_sizes.len() != errors.len() {
        return Err(Error::DegenerateFit(format!(
            "{} step sizes but {} errors",
            step_sizes.len(),
            errors.len()
        )));
    }
    if errors.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 levels, got {}",
            errors.len()
        )));
    }
    if let Some(e) = errors.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        return Err(Error::DegenerateFit(format!("non-positive error {e}")));
    }
    if let Some(h) = step_sizes.iter().find(|h| !(h.is_finite() && **h > 0.0)) {
        return Err(Error::DegenerateFit(format!("non-positive step size {h}")));
    }
    let x: Vec<f64> = step_sizes.iter().map(|h| h.ln()).collect();
    let y: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all step sizes equal".into()));
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    Ok(sxy / sxx)
}

/// Runs the forced scheme against the manufactured solution at each `dt`
/// and fits the temporal order from the L2 error at `t_end`.
pub fn convergence_study_time(
    ms: &ManufacturedSolution,
    params: &ModelParams,
    grid: &GridSpec,
    dts: &[f64],
    t_end: f64,
    cfg: &SolverConfig,
) -> Result<ConvergenceReport> {
    if dts.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "time study needs at least 3 step sizes, got {}",
            dts.len()
        )));
    }
    if dts.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::DegenerateFit(
            "step sizes must be strictly decreasing".into(),
        ));
    }
    // Validate resolution up front rather than at the first step.
    ms.forcing(params, 0.0, grid)?;

    let u0 = ms.exact(0.0, grid)?;
    let exact = ms.exact(t_end, grid)?;
    let forcing = |t: f64| ms.forcing(params, t, grid);
    let mut levels = Vec::with_capacity(dts.len());
    for &dt in dts {
        let time = TimeGrid::from_horizon(dt, t_end)?;
        let tr = run(&u0, params, &time, cfg, &mut (), Some(&forcing))?;
        levels.push(Level {
            resolution: dt,
            error: tr.final_field.sub(&exact)?.l2_norm(),
        });
    }
    Ok(ConvergenceReport::build(Axis::Time, levels))
}

/// Compares runs at each mode count in `ns` with a reference run at `n_ref`
/// (same `dt`), all started from projections of `u0`.
///
/// `u0` must live on a grid with at least `n_ref` modes.
pub fn convergence_study_space(
    u0: &SpectralField,
    params: &ModelParams,
    ns: &[usize],
    n_ref: usize,
    dt: f64,
    t_end: f64,
    cfg: &SolverConfig,
) -> Result<ConvergenceReport> {
    if ns.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "space study needs at least 3 resolutions, got {}",
            ns.len()
        )));
    }
    if ns.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::DegenerateFit(
            "resolutions must be strictly increasing".into(),
        ));
    }
    let n_max = *ns.last().expect("non-empty");
    if n_ref < 2 * n_max {
        return Err(Error::ResolutionTooLow(format!(
            "reference resolution {n_ref} must be at least twice the finest level {n_max}"
        )));
    }
    let ref_grid = u0.grid().with_modes(n_ref)?;
    let time = TimeGrid::from_horizon(dt, t_end)?;

    let reference = run(
        &u0.project_to(&ref_grid)?,
        params,
        &time,
        cfg,
        &mut (),
        None,
    )?
    .final_field;
    let mut levels = Vec::with_capacity(ns.len());
    for &n in ns {
        let grid = u0.grid().with_modes(n)?;
        let sol = run(&u0.project_to(&grid)?, params, &time, cfg, &mut (), None)?.final_field;
        levels.push(Level {
            resolution: n as f64,
            error: reference.sub(&sol.embed_in(&ref_grid)?)?.l2_norm(),
        });
    }
    Ok(ConvergenceReport::build(Axis::Space, levels))
}
