//! Coefficients and nonlinearities of the convective Cahn-Hilliard equation.

use ndarray::{Array2, Zip};

use crate::error::{Error, Result};
use crate::spectral::dealias::{self, parity_of};
use crate::spectral::{Parity, SpectralField, TestFn};

/// `gamma` (interface coefficient), `gamma1`, `gamma2` (free-energy
/// polynomial) and the drift direction `d` of the convective flux
/// `d . grad(u^2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub gamma: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub drift: [f64; 2],
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            gamma1: 0.0,
            gamma2: 1.0,
            drift: [1.0, 1.0],
        }
    }
}

/// Which derivative of `phi` to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiOrder {
    Value,
    First,
    Second,
}

impl TryFrom<u8> for PhiOrder {
    type Error = Error;

    fn try_from(order: u8) -> Result<Self> {
        match order {
            0 => Ok(PhiOrder::Value),
            1 => Ok(PhiOrder::First),
            2 => Ok(PhiOrder::Second),
            _ => Err(Error::InvalidParams(format!(
                "derivative order {order} not in {{0, 1, 2}}"
            ))),
        }
    }
}

impl ModelParams {
    pub fn new(gamma: f64, gamma1: f64, gamma2: f64, drift: [f64; 2]) -> Result<Self> {
        let p = Self {
            gamma,
            gamma1,
            gamma2,
            drift,
        };
        p.validate()?;
        Ok(p)
    }

    /// Constant-coefficient case: `phi(u) = -u`, no convection.
    pub fn linear(gamma: f64) -> Self {
        Self {
            gamma,
            gamma1: 0.0,
            gamma2: 0.0,
            drift: [0.0, 0.0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.gamma,
            self.gamma1,
            self.gamma2,
            self.drift[0],
            self.drift[1],
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        if self.gamma <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if self.gamma2 < 0.0 {
            return Err(Error::InvalidParams(format!(
                "gamma2 must be non-negative, got {}",
                self.gamma2
            )));
        }
        Ok(())
    }

    pub fn phi(&self, v: f64) -> f64 {
        (self.gamma2 * v + self.gamma1) * v * v - v
    }

    pub fn dphi(&self, v: f64) -> f64 {
        (3.0 * self.gamma2 * v + 2.0 * self.gamma1) * v - 1.0
    }

    pub fn d2phi(&self, v: f64) -> f64 {
        6.0 * self.gamma2 * v + 2.0 * self.gamma1
    }

    pub fn phi_order(&self, v: f64, order: PhiOrder) -> f64 {
        match order {
            PhiOrder::Value => self.phi(v),
            PhiOrder::First => self.dphi(v),
            PhiOrder::Second => self.d2phi(v),
        }
    }

    /// Pointwise `phi`, `phi'` or `phi''` of nodal values.
    pub fn nonlinearity_eval(&self, values: &Array2<f64>, order: PhiOrder) -> Array2<f64> {
        values.mapv(|v| self.phi_order(v, order))
    }

    /// `c0 = gamma1^2 / (3 gamma2) + 1`, so that `phi'(v) >= -c0` for all real `v`.
    pub fn c0(&self) -> Result<f64> {
        if self.gamma2 <= 0.0 {
            return Err(Error::InvalidParams(
                "c0 = gamma1^2/(3*gamma2) + 1 needs gamma2 > 0".into(),
            ));
        }
        Ok(self.gamma1 * self.gamma1 / (3.0 * self.gamma2) + 1.0)
    }

    /// Largest step for which the discrete L2 growth factor is finite,
    /// `4 gamma / c0^2`.
    pub fn dt_limit(&self) -> Result<f64> {
        let c0 = self.c0()?;
        Ok(4.0 * self.gamma / (c0 * c0))
    }
}

/// Free function form of [`ModelParams::c0`].
pub fn c0(params: &ModelParams) -> Result<f64> {
    params.c0()
}

/// `P_N[-gamma lap^2 u + lap phi(u) + d . grad(u^2)]`, the right-hand side of
/// the semi-discrete system `da/dt = f(a)`.
///
/// Nonlinear terms are taken in weak form on the padded grid:
/// `(lap phi(u), v) = (phi(u), lap v)` and `(d . grad(u^2), v) = -(u^2, d . grad v)`,
/// both exact for `v` in the discrete space.
pub fn continuous_rhs(u: &SpectralField, params: &ModelParams) -> SpectralField {
    let grid = u.grid();
    let c = u.coeffs();
    let vals = dealias::eval(grid, c, false, false);
    let lam = grid.eigenvalues();

    // phi(u) = (gamma2 u^3 - u) + gamma1 u^2; the two parts have opposite parity.
    let odd = vals.mapv(|v| params.gamma2 * v * v * v);
    let mut phi_proj = dealias::project(
        grid,
        &odd,
        (TestFn::Sin, Parity::Odd),
        (TestFn::Sin, Parity::Odd),
    );
    phi_proj -= c;

    let sq = vals.mapv(|v| v * v);
    if params.gamma1 != 0.0 {
        let even = dealias::project(
            grid,
            &sq,
            (TestFn::Sin, Parity::Even),
            (TestFn::Sin, Parity::Even),
        );
        phi_proj.scaled_add(params.gamma1, &even);
    }

    let mut out = Array2::zeros(c.dim());
    Zip::from(&mut out)
        .and(c)
        .and(&lam)
        .and(&phi_proj)
        .for_each(|o, &a, &l, &p| *o = -params.gamma * l * l * a - l * p);

    let [dx, dy] = params.drift;
    let even = parity_of(true);
    if dx != 0.0 {
        let t = dealias::project(grid, &sq, (TestFn::DSin, even), (TestFn::Sin, even));
        out.scaled_add(-dx, &t);
    }
    if dy != 0.0 {
        let t = dealias::project(grid, &sq, (TestFn::Sin, even), (TestFn::DSin, even));
        out.scaled_add(-dy, &t);
    }
    SpectralField::from_array(grid, out)
}
