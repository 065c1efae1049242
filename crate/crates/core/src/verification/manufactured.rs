use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::spectral::dealias;
use crate::spectral::{GridSpec, Parity, SpectralField, TestFn};

/// `u*(x, y, t) = A exp(-mu t) sin(m1 pi x / L1) sin(m2 pi y / L2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ManufacturedSolution {
    pub amplitude: f64,
    pub decay: f64,
    pub mode: (usize, usize),
}

impl Default for ManufacturedSolution {
    fn default() -> Self {
        Self {
            amplitude: 0.5,
            decay: 1.0,
            mode: (1, 1),
        }
    }
}

impl ManufacturedSolution {
    /// The single-mode solution of the linear problem: with `gamma1 = gamma2 = 0`
    /// and no drift, `mu = gamma lambda^2 - lambda` makes the forcing vanish.
    pub fn linear_exact(grid: &GridSpec, gamma: f64, mode: (usize, usize), amplitude: f64) -> Self {
        let lam = grid.eigenvalue(mode.0, mode.1);
        Self {
            amplitude,
            decay: gamma * lam * lam - lam,
            mode,
        }
    }

    pub fn exact(&self, t: f64, grid: &GridSpec) -> Result<SpectralField> {
        SpectralField::mode(
            grid,
            self.mode.0,
            self.mode.1,
            self.amplitude * (-self.decay * t).exp(),
        )
    }

    /// `f = u*_t + gamma lap^2 u* - lap phi(u*) - d.grad(u*^2)`, projected.
    ///
    /// Linear terms are exact in coefficients. The nonlinear terms use the
    /// expanded strong forms `lap phi(u) = phi'(u) lap u + phi''(u) |grad u|^2`
    /// and `d.grad(u^2) = 2 u d.grad u`, evaluated pointwise and projected.
    pub fn forcing(&self, params: &ModelParams, t: f64, grid: &GridSpec) -> Result<SpectralField> {
        let need = 3 * self.mode.0.max(self.mode.1);
        if grid.modes() < need {
            return Err(Error::ResolutionTooLow(format!(
                "manufactured mode {:?} needs at least {need} modes, grid has {}",
                self.mode,
                grid.modes()
            )));
        }
        use Parity::{Even, Odd};
        use TestFn::Sin;
        let u = self.exact(t, grid)?;
        let c = u.coeffs();
        let lap = u.laplacian();
        let v = dealias::eval(grid, c, false, false);
        let vx = dealias::eval(grid, c, true, false);
        let vy = dealias::eval(grid, c, false, true);
        let vl = dealias::eval(grid, lap.coeffs(), false, false);
        let grad2 = &vx * &vx + &vy * &vy;

        let (g1, g2) = (params.gamma1, params.gamma2);
        let odd = ndarray::Zip::from(&v)
            .and(&vl)
            .and(&grad2)
            .map_collect(|&u, &l, &g| (3.0 * g2 * u * u - 1.0) * l + 6.0 * g2 * u * g);
        let mut lap_phi = dealias::project(grid, &odd, (Sin, Odd), (Sin, Odd));
        if g1 != 0.0 {
            let even = (&v * &vl + &grad2) * (2.0 * g1);
            lap_phi += &dealias::project(grid, &even, (Sin, Even), (Sin, Even));
        }

        let [dx, dy] = params.drift;
        let mut convect = dealias::project(grid, &(&v * &vx), (Sin, Odd), (Sin, Even)) * (2.0 * dx);
        convect.scaled_add(
            2.0 * dy,
            &dealias::project(grid, &(&v * &vy), (Sin, Even), (Sin, Odd)),
        );

        let mut f = c * (-self.decay);
        f += &u.biharmonic().into_coeffs().mapv(|a| params.gamma * a);
        f -= &lap_phi;
        f -= &convect;
        SpectralField::new(grid.clone(), f)
    }
}

/// Free-function form of [`ManufacturedSolution::forcing`].
pub fn manufactured_forcing(
    ms: &ManufacturedSolution,
    params: &ModelParams,
    t: f64,
    grid: &GridSpec,
) -> Result<SpectralField> {
    ms.forcing(params, t, grid)
}
