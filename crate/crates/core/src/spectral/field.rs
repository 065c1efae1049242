use ndarray::{s, Array2, Zip};

use super::grid::GridSpec;
use crate::error::{Error, Result};

/// Sine coefficients of a function in the discrete space.
///
/// Entry `[k1 - 1, k2 - 1]` multiplies `sin(k1 pi x / L1) sin(k2 pi y / L2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    coeffs: Array2<f64>,
}

/// Values at the interior collocation nodes, `[i - 1, j - 1]` at `(x_i, y_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysField {
    grid: GridSpec,
    values: Array2<f64>,
}

/// `l2 = ||u||`, `h1_semi = ||grad u||`, `h2_semi = ||lap u||`, `sup` is the
/// largest nodal magnitude (a lower bound for the true supremum).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NormSet {
    pub l2: f64,
    pub h1_semi: f64,
    pub h2_semi: f64,
    pub sup: f64,
}

fn check_shape(grid: &GridSpec, a: &Array2<f64>, what: &'static str) -> Result<()> {
    let m = grid.modes();
    if a.dim() != (m, m) {
        return Err(Error::GridMismatch(format!(
            "{what} has shape {:?}, grid needs ({m}, {m})",
            a.dim()
        )));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(what));
    }
    Ok(())
}

impl SpectralField {
    pub fn new(grid: GridSpec, coeffs: Array2<f64>) -> Result<Self> {
        check_shape(&grid, &coeffs, "coefficients")?;
        Ok(Self { grid, coeffs })
    }

    pub(crate) fn from_array(grid: &GridSpec, coeffs: Array2<f64>) -> Self {
        debug_assert_eq!(coeffs.dim(), (grid.modes(), grid.modes()));
        Self {
            grid: grid.clone(),
            coeffs,
        }
    }

    pub fn zeros(grid: &GridSpec) -> Self {
        let m = grid.modes();
        Self::from_array(grid, Array2::zeros((m, m)))
    }

    /// `amplitude * sin(k1 pi x / L1) sin(k2 pi y / L2)`.
    pub fn mode(grid: &GridSpec, k1: usize, k2: usize, amplitude: f64) -> Result<Self> {
        let m = grid.modes();
        if k1 == 0 || k2 == 0 || k1 > m || k2 > m {
            return Err(Error::InvalidGrid(format!(
                "mode ({k1}, {k2}) outside 1..={m}"
            )));
        }
        let mut u = Self::zeros(grid);
        u.coeffs[[k1 - 1, k2 - 1]] = amplitude;
        Ok(u)
    }

    pub fn from_fn(grid: &GridSpec, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let m = grid.modes();
        Self::from_array(
            grid,
            Array2::from_shape_fn((m, m), |(i, j)| f(i + 1, j + 1)),
        )
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coeffs(&self) -> &Array2<f64> {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Array2<f64> {
        self.coeffs
    }

    /// Coefficient of mode `(k1, k2)`, 1-based.
    pub fn coeff(&self, k1: usize, k2: usize) -> f64 {
        self.coeffs[[k1 - 1, k2 - 1]]
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|v| v.is_finite())
    }

    /// Evaluates the truncated series at the collocation nodes.
    pub fn to_nodal(&self) -> PhysField {
        let t = self.grid.tables();
        let values = t.x.colloc_sin.dot(&self.coeffs).dot(&t.y.colloc_sin.t());
        PhysField {
            grid: self.grid.clone(),
            values,
        }
    }

    /// Truncation to the leading `M x M` block of `target`. This is the
    /// L2-orthogonal projection onto the smaller space.
    pub fn project_to(&self, target: &GridSpec) -> Result<Self> {
        if !self.grid.same_domain(target) {
            return Err(Error::GridMismatch(format!(
                "cannot project {:?} onto {target:?}: domain lengths differ",
                self.grid
            )));
        }
        let m = target.modes();
        if m > self.grid.modes() {
            return Err(Error::GridMismatch(format!(
                "projection target has {m} modes, source only {}",
                self.grid.modes()
            )));
        }
        Ok(Self::from_array(
            target,
            self.coeffs.slice(s![..m, ..m]).to_owned(),
        ))
    }

    /// Zero-padded embedding into a finer space on the same domain.
    pub fn embed_in(&self, target: &GridSpec) -> Result<Self> {
        if !self.grid.same_domain(target) {
            return Err(Error::GridMismatch(format!(
                "cannot embed {:?} into {target:?}: domain lengths differ",
                self.grid
            )));
        }
        let m = self.grid.modes();
        if target.modes() < m {
            return Err(Error::GridMismatch(format!(
                "embedding target has {} modes, source {m}",
                target.modes()
            )));
        }
        let mut out = Self::zeros(target);
        out.coeffs.slice_mut(s![..m, ..m]).assign(&self.coeffs);
        Ok(out)
    }

    /// Projects or embeds, whichever the target resolution requires.
    pub fn resample(&self, target: &GridSpec) -> Result<Self> {
        if target.modes() <= self.grid.modes() {
            self.project_to(target)
        } else {
            self.embed_in(target)
        }
    }

    fn scaled_by_eigen(&self, f: impl Fn(f64) -> f64) -> Self {
        let lam = self.grid.eigenvalues();
        let mut c = self.coeffs.clone();
        Zip::from(&mut c).and(&lam).for_each(|a, &l| *a *= f(l));
        Self::from_array(&self.grid, c)
    }

    pub fn laplacian(&self) -> Self {
        self.scaled_by_eigen(|l| -l)
    }

    pub fn biharmonic(&self) -> Self {
        self.scaled_by_eigen(|l| l * l)
    }

    /// Nodal values of `(du/dx, du/dy)` from the differentiated series.
    pub fn gradient_values(&self) -> (PhysField, PhysField) {
        let t = self.grid.tables();
        let dx = t.x.colloc_dsin.dot(&self.coeffs).dot(&t.y.colloc_sin.t());
        let dy = t.x.colloc_sin.dot(&self.coeffs).dot(&t.y.colloc_dsin.t());
        (
            PhysField {
                grid: self.grid.clone(),
                values: dx,
            },
            PhysField {
                grid: self.grid.clone(),
                values: dy,
            },
        )
    }

    /// L2 inner product, `(L1 L2 / 4) sum a_k b_k`.
    pub fn inner_product(&self, other: &Self) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        Ok(self.grid.basis_norm_sq() * dot(&self.coeffs, &other.coeffs))
    }

    fn weighted_norm(&self, power: i32) -> f64 {
        let lam = self.grid.eigenvalues();
        let s: f64 = Zip::from(&self.coeffs)
            .and(&lam)
            .fold(0.0, |acc, &a, &l| acc + l.powi(power) * a * a);
        (self.grid.basis_norm_sq() * s).sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.weighted_norm(0)
    }

    pub fn norms(&self) -> NormSet {
        let sup = self
            .to_nodal()
            .values
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        NormSet {
            l2: self.weighted_norm(0),
            h1_semi: self.weighted_norm(1),
            h2_semi: self.weighted_norm(2),
            sup,
        }
    }

    /// `int_Omega u`, exact in coefficients: only odd-odd modes contribute
    /// `a (2 L1 / (k1 pi)) (2 L2 / (k2 pi))`.
    pub fn mass(&self) -> f64 {
        let (lx, ly) = self.grid.lengths();
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let mut s = 0.0;
        for ((i, j), &a) in self.coeffs.indexed_iter() {
            let (k1, k2) = (i + 1, j + 1);
            if k1 % 2 == 1 && k2 % 2 == 1 {
                s += a / (k1 * k2) as f64;
            }
        }
        4.0 * lx * ly / pi2 * s
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_array(&self.grid, &self.coeffs * factor)
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: f64, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let mut c = self.coeffs.clone();
        c.scaled_add(factor, &other.coeffs);
        Ok(Self::from_array(&self.grid, c))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(-1.0, other)
    }
}

pub(crate) fn dot(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    Zip::from(a).and(b).fold(0.0, |acc, &x, &y| acc + x * y)
}

impl PhysField {
    pub fn new(grid: GridSpec, values: Array2<f64>) -> Result<Self> {
        check_shape(&grid, &values, "nodal values")?;
        Ok(Self { grid, values })
    }

    /// Samples `f(x, y)` at the collocation nodes.
    pub fn from_fn(grid: &GridSpec, f: impl Fn(f64, f64) -> f64) -> Self {
        let (xs, ys) = (grid.nodes_x(), grid.nodes_y());
        let m = grid.modes();
        Self {
            grid: grid.clone(),
            values: Array2::from_shape_fn((m, m), |(i, j)| f(xs[i], ys[j])),
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// Type-I discrete sine transform: the unique coefficients whose
    /// truncated series interpolates the nodal values.
    pub fn to_spectral(&self) -> Result<SpectralField> {
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("nodal values"));
        }
        let t = self.grid.tables();
        let m = self.grid.modes();
        let norm = 2.0 / (m + 1) as f64;
        let mut coeffs = t.x.colloc_sin.t().dot(&self.values).dot(&t.y.colloc_sin);
        coeffs *= norm * norm;
        Ok(SpectralField::from_array(&self.grid, coeffs))
    }
}

/// Nodal values to sine coefficients.
pub fn sine_transform_forward(f: &PhysField) -> Result<SpectralField> {
    f.to_spectral()
}

/// Sine coefficients to nodal values.
pub fn sine_transform_inverse(u: &SpectralField) -> PhysField {
    u.to_nodal()
}
