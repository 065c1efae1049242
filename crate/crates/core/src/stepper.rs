//! Time integration.
//!
//! The production scheme is backward Euler with the nonlinear coefficients
//! lagged to the previous step: find `u^k` in the discrete space with
//!
//! ```text
//! (u^k - u^{k-1})/dt + gamma lap^2 u^k - div(phi'(u^{k-1}) grad u^k)
//!     - (2/3) u^{k-1} d.grad u^k - (2/3) d.grad(u^{k-1} u^k) = f^k
//! ```
//!
//! tested against every basis function. The operator is linear in `u^k` and
//! applied matrix-free; [`step_explicit_reference`] integrates the
//! semi-discrete system with classical RK4 for cross-checks.

use ndarray::Array2;

use crate::diagnostics::{self, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::model::{continuous_rhs, ModelParams};
use crate::solver::{gmres, SolverConfig};
use crate::spectral::dealias::{self, parity_of};
use crate::spectral::{GridSpec, Parity, SpectralField, TestFn};

/// `steps` uniform steps of size `dt`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub dt: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(dt: f64, steps: usize) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParams(format!(
                "dt must be positive, got {dt}"
            )));
        }
        Ok(Self { dt, steps })
    }

    /// Step count `round(T / dt)`; rejects horizons that are not a whole
    /// number of steps to 1e-12.
    pub fn from_horizon(dt: f64, t_end: f64) -> Result<Self> {
        let g = Self::new(dt, 0)?;
        if !(t_end.is_finite() && t_end >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "T must be non-negative, got {t_end}"
            )));
        }
        let steps = (t_end / dt).round();
        if (steps * dt - t_end).abs() > 1e-12 * t_end.max(1.0) {
            return Err(Error::InvalidParams(format!(
                "T = {t_end} is not a whole number of steps of dt = {dt}"
            )));
        }
        Ok(Self {
            steps: steps as usize,
            ..g
        })
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn horizon(&self) -> f64 {
        self.time(self.steps)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StepReport {
    pub iterations: usize,
    pub final_residual: f64,
    pub skew_residual: f64,
}

/// The implicit-step operator with `u^{k-1}` frozen; nodal coefficient
/// fields are evaluated once and reused for every application.
pub struct LinearizedOperator {
    grid: GridSpec,
    /// `1/dt + gamma lambda^2`, the stiff diagonal part.
    diag: Array2<f64>,
    /// Inverse of `diag + mean(phi'(u_prev)) lambda`, the diagonal of the
    /// operator once `phi'` is replaced by its domain average.
    inv_precond: Array2<f64>,
    u_prev: Array2<f64>,
    /// `3 gamma2 u^2 - 1` (even) and `2 gamma1 u` (odd) parts of `phi'(u_prev)`.
    q_even: Array2<f64>,
    q_odd: Option<Array2<f64>>,
    drift: [f64; 2],
}

impl LinearizedOperator {
    pub fn new(u_prev: &SpectralField, params: &ModelParams, dt: f64) -> Self {
        let grid = u_prev.grid().clone();
        let lam = grid.eigenvalues();
        let diag = lam.mapv(|l| 1.0 / dt + params.gamma * l * l);
        let (lx, ly) = grid.lengths();
        let mean_dphi = (3.0 * params.gamma2 * u_prev.l2_norm().powi(2)
            + 2.0 * params.gamma1 * u_prev.mass())
            / (lx * ly)
            - 1.0;
        let shifted = &diag + &(&lam * mean_dphi);
        // A large negative mean can push low modes through zero when dt
        // exceeds the stability limit; the plain diagonal is used then.
        let inv_precond = if shifted.iter().all(|&d| d > 0.0) {
            shifted.mapv(|d| 1.0 / d)
        } else {
            diag.mapv(|d| 1.0 / d)
        };
        let up = dealias::eval(&grid, u_prev.coeffs(), false, false);
        let q_even = up.mapv(|v| 3.0 * params.gamma2 * v * v - 1.0);
        let q_odd = (params.gamma1 != 0.0).then(|| up.mapv(|v| 2.0 * params.gamma1 * v));
        Self {
            grid,
            diag,
            inv_precond,
            u_prev: up,
            q_even,
            q_odd,
            drift: params.drift,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn diagonal(&self) -> &Array2<f64> {
        &self.diag
    }

    /// Coefficient-wise preconditioner used by [`step_implicit`].
    pub fn preconditioner(&self) -> &Array2<f64> {
        &self.inv_precond
    }

    pub fn apply(&self, w: &Array2<f64>) -> Array2<f64> {
        use Parity::{Even, Odd};
        use TestFn::{DSin, Sin};
        let g = &self.grid;
        let mut out = &self.diag * w;

        let wx = dealias::eval(g, w, true, false);
        let wy = dealias::eval(g, w, false, true);
        let (px, py) = (parity_of(true), parity_of(false));

        // (phi'(u_prev) grad w, grad v)
        out += &dealias::project(g, &(&self.q_even * &wx), (DSin, px), (Sin, py));
        out += &dealias::project(g, &(&self.q_even * &wy), (Sin, py), (DSin, px));
        if let Some(q) = &self.q_odd {
            out += &dealias::project(g, &(q * &wx), (DSin, Odd), (Sin, Even));
            out += &dealias::project(g, &(q * &wy), (Sin, Even), (DSin, Odd));
        }

        let [dx, dy] = self.drift;
        if dx != 0.0 || dy != 0.0 {
            // -(2/3)(u_prev d.grad w, v)
            if dx != 0.0 {
                let t = dealias::project(g, &(&self.u_prev * &wx), (Sin, Odd), (Sin, Even));
                out.scaled_add(-2.0 / 3.0 * dx, &t);
            }
            if dy != 0.0 {
                let t = dealias::project(g, &(&self.u_prev * &wy), (Sin, Even), (Sin, Odd));
                out.scaled_add(-2.0 / 3.0 * dy, &t);
            }
            // +(2/3)(u_prev w, d.grad v)
            let uw = &self.u_prev * &dealias::eval(g, w, false, false);
            if dx != 0.0 {
                let t = dealias::project(g, &uw, (DSin, Even), (Sin, Even));
                out.scaled_add(2.0 / 3.0 * dx, &t);
            }
            if dy != 0.0 {
                let t = dealias::project(g, &uw, (Sin, Even), (DSin, Even));
                out.scaled_add(2.0 / 3.0 * dy, &t);
            }
        }
        out
    }
}

/// Applies the implicit-step operator `A(w)` for frozen `u_prev`.
pub fn scheme_operator(
    w: &SpectralField,
    u_prev: &SpectralField,
    params: &ModelParams,
    dt: f64,
) -> Result<SpectralField> {
    w.grid().check_same(u_prev.grid())?;
    let op = LinearizedOperator::new(u_prev, params, dt);
    Ok(SpectralField::from_array(w.grid(), op.apply(w.coeffs())))
}

/// Solves `A(u_k) = u_prev / dt + forcing` by preconditioned GMRES.
pub fn step_implicit(
    u_prev: &SpectralField,
    params: &ModelParams,
    dt: f64,
    cfg: &SolverConfig,
    forcing: Option<&SpectralField>,
) -> Result<(SpectralField, StepReport)> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParams(format!(
            "dt must be positive, got {dt}"
        )));
    }
    let grid = u_prev.grid();
    let mut rhs = u_prev.coeffs() / dt;
    if let Some(f) = forcing {
        grid.check_same(f.grid())?;
        rhs += f.coeffs();
    }

    let op = LinearizedOperator::new(u_prev, params, dt);
    let dim = rhs.dim();
    let inv_diag: Vec<f64> = op.preconditioner().iter().copied().collect();
    let b: Vec<f64> = rhs.iter().copied().collect();
    let out = gmres(
        |v, o| {
            let w = Array2::from_shape_vec(dim, v.to_vec()).expect("shape");
            o.iter_mut()
                .zip(op.apply(&w).iter())
                .for_each(|(o, a)| *o = *a);
        },
        |v, o| {
            o.iter_mut()
                .zip(v)
                .zip(&inv_diag)
                .for_each(|((o, v), d)| *o = v * d)
        },
        &b,
        cfg,
    );
    if !out.converged {
        return Err(Error::NonConvergence {
            step: None,
            iterations: out.iterations,
            residual: out.residual,
        });
    }
    let u = SpectralField::from_array(grid, Array2::from_shape_vec(dim, out.x).expect("shape"));
    let skew_residual = diagnostics::skew_identity_residual(u_prev, &u, params)?;
    Ok((
        u,
        StepReport {
            iterations: out.iterations,
            final_residual: out.residual,
            skew_residual,
        },
    ))
}

/// One classical RK4 step of `da/dt = continuous_rhs(a)`.
pub fn step_explicit_reference(
    u: &SpectralField,
    params: &ModelParams,
    dt: f64,
) -> Result<SpectralField> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParams(format!(
            "dt must be positive, got {dt}"
        )));
    }
    let f = |v: &SpectralField| continuous_rhs(v, params);
    let k1 = f(u);
    let k2 = f(&u.add_scaled(0.5 * dt, &k1)?);
    let k3 = f(&u.add_scaled(0.5 * dt, &k2)?);
    let k4 = f(&u.add_scaled(dt, &k3)?);
    let mut c = u.coeffs().clone();
    c.scaled_add(dt / 6.0, k1.coeffs());
    c.scaled_add(dt / 3.0, k2.coeffs());
    c.scaled_add(dt / 3.0, k3.coeffs());
    c.scaled_add(dt / 6.0, k4.coeffs());
    let out = SpectralField::from_array(u.grid(), c);
    if out.is_finite() {
        Ok(out)
    } else {
        Err(Error::Blowup { dt })
    }
}

/// Integrates with RK4 over `steps` steps of `dt`.
pub fn integrate_explicit(
    u0: &SpectralField,
    params: &ModelParams,
    dt: f64,
    steps: usize,
) -> Result<SpectralField> {
    let mut u = u0.clone();
    for _ in 0..steps {
        u = step_explicit_reference(&u, params, dt)?;
    }
    Ok(u)
}

/// Per-step callback; errors abort the run.
pub trait StepObserver {
    fn on_step(&mut self, record: &DiagnosticsRecord, u: &SpectralField) -> Result<()>;
}

impl StepObserver for () {
    fn on_step(&mut self, _: &DiagnosticsRecord, _: &SpectralField) -> Result<()> {
        Ok(())
    }
}

impl<F> StepObserver for F
where
    F: FnMut(&DiagnosticsRecord, &SpectralField) -> Result<()>,
{
    fn on_step(&mut self, record: &DiagnosticsRecord, u: &SpectralField) -> Result<()> {
        self(record, u)
    }
}

/// Source term evaluated at `t_k` and added to the implicit right-hand side.
pub type Forcing<'a> = &'a dyn Fn(f64) -> Result<SpectralField>;

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub final_field: SpectralField,
    /// One record per step, `k = 0..=steps`.
    pub records: Vec<DiagnosticsRecord>,
}

/// Marches `u0` (assumed already projected) through `time.steps` implicit
/// steps, recording diagnostics after each.
///
/// The discrete L2 bound is monitored only for unforced runs whose step is
/// below `4 gamma / c0^2`; it is left unset otherwise.
pub fn run(
    u0: &SpectralField,
    params: &ModelParams,
    time: &TimeGrid,
    cfg: &SolverConfig,
    observer: &mut dyn StepObserver,
    forcing: Option<Forcing<'_>>,
) -> Result<Trajectory> {
    params.validate()?;
    let bound_factor = if forcing.is_none() {
        diagnostics::l2_bound_factor(params, time.dt).ok()
    } else {
        None
    };
    let baseline = u0.l2_norm();

    let mut records = Vec::with_capacity(time.steps + 1);
    let first = DiagnosticsRecord::new(0, 0.0, u0, baseline, bound_factor, None);
    observer.on_step(&first, u0)?;
    records.push(first);

    let mut u = u0.clone();
    for k in 1..=time.steps {
        let t = time.time(k);
        let f = forcing.map(|f| f(t)).transpose()?;
        let (next, report) = match step_implicit(&u, params, time.dt, cfg, f.as_ref()) {
            Ok(r) => r,
            Err(Error::NonConvergence {
                iterations,
                residual,
                ..
            }) => {
                return Err(Error::NonConvergence {
                    step: Some(k),
                    iterations,
                    residual,
                })
            }
            Err(e) => return Err(e),
        };
        let rec = DiagnosticsRecord::new(k, t, &next, baseline, bound_factor, Some(&report));
        observer.on_step(&rec, &next)?;
        records.push(rec);
        u = next;
    }
    Ok(Trajectory {
        final_field: u,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pi_grid(m: usize) -> GridSpec {
        GridSpec::unit_pi(m).unwrap()
    }

    #[test]
    fn operator_is_linear_in_w() {
        let g = pi_grid(4);
        let p = ModelParams::new(1.0, 0.7, 1.3, [1.0, -0.5]).unwrap();
        let up = SpectralField::from_fn(&g, |a, b| 0.3 / (a * b) as f64);
        let zero = scheme_operator(&SpectralField::zeros(&g), &up, &p, 0.01).unwrap();
        assert!(zero.coeffs().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn constant_coefficient_multiplier() {
        let g = pi_grid(4);
        let up = SpectralField::from_fn(&g, |a, b| (a + 2 * b) as f64 * 0.1);
        let w = SpectralField::mode(&g, 1, 1, 1.0).unwrap();
        let a = scheme_operator(&w, &up, &ModelParams::linear(1.0), 0.1).unwrap();
        assert_relative_eq!(a.coeff(1, 1), 12.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_state_stays_zero() {
        let g = pi_grid(4);
        let (u, rep) = step_implicit(
            &SpectralField::zeros(&g),
            &ModelParams::default(),
            0.01,
            &SolverConfig::default(),
            None,
        )
        .unwrap();
        assert!(u.coeffs().iter().all(|&v| v == 0.0));
        assert!(rep.iterations <= 1);
    }

    #[test]
    fn linear_step_is_diagonal_solve() {
        let g = pi_grid(4);
        let u0 = SpectralField::mode(&g, 1, 1, 1.0).unwrap();
        let (u, _) = step_implicit(
            &u0,
            &ModelParams::linear(1.0),
            0.1,
            &SolverConfig::default(),
            None,
        )
        .unwrap();
        assert_relative_eq!(u.coeff(1, 1), 10.0 / 12.0, epsilon = 1e-13);
    }

    #[test]
    fn rk4_linear_polynomial() {
        let g = pi_grid(4);
        let u0 = SpectralField::mode(&g, 1, 1, 1.0).unwrap();
        let u = step_explicit_reference(&u0, &ModelParams::linear(1.0), 1e-3).unwrap();
        let z: f64 = -2e-3;
        let r = 1.0 + z + z * z / 2.0 + z.powi(3) / 6.0 + z.powi(4) / 24.0;
        assert_relative_eq!(u.coeff(1, 1), r, epsilon = 1e-14);
    }

    #[test]
    fn explicit_blowup_is_reported() {
        let g = pi_grid(8);
        let u0 = SpectralField::from_fn(&g, |_, _| 1.0);
        let mut u = u0;
        let mut failed = false;
        for _ in 0..400 {
            match step_explicit_reference(&u, &ModelParams::default(), 0.1) {
                Ok(v) => u = v,
                Err(Error::Blowup { .. }) => {
                    failed = true;
                    break;
                }
                Err(e) => panic!("unexpected {e}"),
            }
        }
        assert!(failed);
    }

    #[test]
    fn time_grid_horizon() {
        let t = TimeGrid::from_horizon(1.0 / 40.0, 0.5).unwrap();
        assert_eq!(t.steps, 20);
        assert!((t.horizon() - 0.5).abs() < 1e-12);
        assert!(TimeGrid::from_horizon(0.3, 1.0).is_err());
        assert!(TimeGrid::new(0.0, 3).is_err());
    }

    #[test]
    fn run_with_no_steps_returns_input() {
        let g = pi_grid(4);
        let u0 = SpectralField::mode(&g, 2, 1, 0.3).unwrap();
        let tr = run(
            &u0,
            &ModelParams::default(),
            &TimeGrid::new(0.01, 0).unwrap(),
            &SolverConfig::default(),
            &mut (),
            None,
        )
        .unwrap();
        assert_eq!(tr.final_field, u0);
        assert_eq!(tr.records.len(), 1);
    }
}
