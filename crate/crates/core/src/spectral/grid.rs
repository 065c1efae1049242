//! Grid description and the per-axis tables behind every transform.
//!
//! Two node sets are used per axis of length `L` with `M` sine modes:
//!
//! * the collocation set `x_i = i L / (M + 1)`, `i = 1..=M`, on which the
//!   type-I discrete sine transform is an exact bijection with the `M`
//!   coefficients;
//! * a padded quadrature set `x_i = i L / (P + 1)`, `i = 0..=P + 1`, with
//!   `P = 3M + 1`, boundary nodes included. Any product of at most four
//!   factors of degree `M` (cubic nonlinearities tested against a basis
//!   function) is integrated exactly on it, whatever its parity.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use ndarray::Array2;

use crate::error::{Error, Result};

/// Parity of a nodal product along one axis: odd about the walls
/// (sine-type) or even about them (cosine-type).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Parity {
    Odd,
    Even,
}

/// Test function along one axis: `sin(k pi x / L)` or its derivative
/// `(k pi / L) cos(k pi x / L)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum TestFn {
    Sin,
    DSin,
}

pub(crate) struct AxisTables {
    /// `sin(k pi i / (M+1))`, rows = collocation nodes, cols = modes.
    pub colloc_sin: Array2<f64>,
    /// `(k pi / L) cos(k pi i / (M+1))`.
    pub colloc_dsin: Array2<f64>,
    m: usize,
    len: f64,
    /// Built on first use: linear operations never touch the padded grid.
    padded: OnceLock<PaddedTables>,
}

struct PaddedTables {
    /// Padded nodes (boundary included) x modes.
    sin: Array2<f64>,
    dsin: Array2<f64>,
    /// Modes x padded nodes; exact `int_0^L g(x) test_k(x) dx` for nodal `g`
    /// of the given parity. Indexed as `[test][parity]`.
    tests: [[Array2<f64>; 2]; 2],
}

impl PaddedTables {
    fn new(m: usize, len: f64) -> Self {
        let wave = |k: usize| k as f64 * PI / len;
        let p = 3 * m + 1;
        let nodes = p + 2;
        let pad_h = PI / (p + 1) as f64;
        let sin = Array2::from_shape_fn((nodes, m), |(i, k)| ((i * (k + 1)) as f64 * pad_h).sin());
        let dsin = Array2::from_shape_fn((nodes, m), |(i, k)| {
            wave(k + 1) * ((i * (k + 1)) as f64 * pad_h).cos()
        });

        // DST-I analysis onto frequencies 1..=P (boundary values unused).
        let scale = 2.0 / (p + 1) as f64;
        let dst = Array2::from_shape_fn((p, nodes), |(j, i)| {
            if i == 0 || i == p + 1 {
                0.0
            } else {
                scale * ((i * (j + 1)) as f64 * pad_h).sin()
            }
        });
        // DCT-I analysis onto frequencies 0..=P+1.
        let dct = Array2::from_shape_fn((p + 2, nodes), |(j, i)| {
            let wi = if i == 0 || i == p + 1 { 0.5 } else { 1.0 };
            let wj = if j == 0 || j == p + 1 { 0.5 } else { 1.0 };
            scale * wi * wj * ((i * j) as f64 * pad_h).cos()
        });

        // int_0^L sin(a pi x/L) cos(b pi x/L) dx
        let sin_cos = |a: usize, b: usize| -> f64 {
            if (a + b) % 2 == 0 {
                0.0
            } else {
                let (a, b) = (a as f64, b as f64);
                len / PI * 2.0 * a / (a * a - b * b)
            }
        };
        let sin_cos_sin = Array2::from_shape_fn((m, p + 2), |(k, j)| sin_cos(k + 1, j));
        let cos_sin = Array2::from_shape_fn((m, p), |(k, j)| wave(k + 1) * sin_cos(j + 1, k + 1));

        let half = 0.5 * len;
        let sin_odd = Array2::from_shape_fn((m, nodes), |(k, i)| half * dst[[k, i]]);
        let sin_even = sin_cos_sin.dot(&dct);
        let dsin_even =
            Array2::from_shape_fn((m, nodes), |(k, i)| wave(k + 1) * half * dct[[k + 1, i]]);
        let dsin_odd = cos_sin.dot(&dst);

        Self {
            sin,
            dsin,
            tests: [[sin_odd, sin_even], [dsin_odd, dsin_even]],
        }
    }
}

impl AxisTables {
    fn new(m: usize, len: f64) -> Self {
        let colloc_h = PI / (m + 1) as f64;
        let wave = |k: usize| k as f64 * PI / len;
        let colloc_sin = Array2::from_shape_fn((m, m), |(i, k)| {
            (((i + 1) * (k + 1)) as f64 * colloc_h).sin()
        });
        let colloc_dsin = Array2::from_shape_fn((m, m), |(i, k)| {
            wave(k + 1) * (((i + 1) * (k + 1)) as f64 * colloc_h).cos()
        });
        Self {
            colloc_sin,
            colloc_dsin,
            m,
            len,
            padded: OnceLock::new(),
        }
    }

    fn padded(&self) -> &PaddedTables {
        self.padded
            .get_or_init(|| PaddedTables::new(self.m, self.len))
    }

    pub fn test(&self, test: TestFn, parity: Parity) -> &Array2<f64> {
        let t = match test {
            TestFn::Sin => 0,
            TestFn::DSin => 1,
        };
        let p = match parity {
            Parity::Odd => 0,
            Parity::Even => 1,
        };
        &self.padded().tests[t][p]
    }

    pub fn eval(&self, derivative: bool) -> &Array2<f64> {
        let t = self.padded();
        if derivative {
            &t.dsin
        } else {
            &t.sin
        }
    }
}

pub(crate) struct GridTables {
    pub x: AxisTables,
    pub y: AxisTables,
}

/// Discretization descriptor: `M` sine modes per axis on `[0, L1] x [0, L2]`.
///
/// Cloning is cheap; the transform tables are shared.
#[derive(Clone)]
pub struct GridSpec {
    modes: usize,
    lx: f64,
    ly: f64,
    tables: Arc<GridTables>,
}

impl GridSpec {
    pub fn new(modes: usize, lx: f64, ly: f64) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidGrid("mode count must be at least 1".into()));
        }
        if !(lx.is_finite() && lx > 0.0 && ly.is_finite() && ly > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "domain lengths must be positive, got L1 = {lx}, L2 = {ly}"
            )));
        }
        let tables = Arc::new(GridTables {
            x: AxisTables::new(modes, lx),
            y: AxisTables::new(modes, ly),
        });
        Ok(Self {
            modes,
            lx,
            ly,
            tables,
        })
    }

    /// Square `[0, pi]^2` domain, the default used throughout.
    pub fn unit_pi(modes: usize) -> Result<Self> {
        Self::new(modes, PI, PI)
    }

    /// Same domain, different mode count.
    pub fn with_modes(&self, modes: usize) -> Result<Self> {
        Self::new(modes, self.lx, self.ly)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn lengths(&self) -> (f64, f64) {
        (self.lx, self.ly)
    }

    pub fn same_domain(&self, other: &GridSpec) -> bool {
        self.lx == other.lx && self.ly == other.ly
    }

    /// `L1 L2 / 4`, the squared L2 norm of every basis function.
    pub fn basis_norm_sq(&self) -> f64 {
        0.25 * self.lx * self.ly
    }

    pub fn nodes_x(&self) -> Vec<f64> {
        colloc_nodes(self.modes, self.lx)
    }

    pub fn nodes_y(&self) -> Vec<f64> {
        colloc_nodes(self.modes, self.ly)
    }

    /// Laplacian eigenvalue of mode `(k1, k2)` (1-based).
    pub fn eigenvalue(&self, k1: usize, k2: usize) -> f64 {
        let a = k1 as f64 * PI / self.lx;
        let b = k2 as f64 * PI / self.ly;
        a * a + b * b
    }

    /// Eigenvalues laid out like a coefficient array (0-based indices).
    pub fn eigenvalues(&self) -> Array2<f64> {
        Array2::from_shape_fn((self.modes, self.modes), |(i, j)| {
            self.eigenvalue(i + 1, j + 1)
        })
    }

    pub(crate) fn tables(&self) -> &GridTables {
        &self.tables
    }

    pub(crate) fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

fn colloc_nodes(m: usize, len: f64) -> Vec<f64> {
    (1..=m).map(|i| i as f64 * len / (m + 1) as f64).collect()
}

impl PartialEq for GridSpec {
    fn eq(&self, other: &Self) -> bool {
        self.modes == other.modes && self.lx == other.lx && self.ly == other.ly
    }
}

impl fmt::Debug for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridSpec")
            .field("modes", &self.modes)
            .field("lx", &self.lx)
            .field("ly", &self.ly)
            .finish()
    }
}

/// Builds a grid after validating `M >= 1` and positive lengths.
pub fn make_grid(modes: usize, lx: f64, ly: f64) -> Result<GridSpec> {
    GridSpec::new(modes, lx, ly)
}
