//! Pseudo-spectral products on the padded quadrature grid.
//!
//! Values are evaluated from coefficients at the padded nodes, multiplied
//! pointwise, and projected back onto the sine basis by exact integration
//! against (derivatives of) the basis functions. The caller states each
//! product's parity per axis so the matching integration table is used.

use ndarray::Array2;

use super::grid::{GridSpec, Parity, TestFn};

/// Nodal values of `d^a/dx^a d^b/dy^b u` (`a, b` in `{0, 1}`) on the padded grid.
pub(crate) fn eval(grid: &GridSpec, coeffs: &Array2<f64>, dx: bool, dy: bool) -> Array2<f64> {
    let t = grid.tables();
    t.x.eval(dx).dot(coeffs).dot(&t.y.eval(dy).t())
}

/// Galerkin coefficients `(g, test_x(k1) test_y(k2)) / (L1 L2 / 4)`.
pub(crate) fn project(
    grid: &GridSpec,
    g: &Array2<f64>,
    x: (TestFn, Parity),
    y: (TestFn, Parity),
) -> Array2<f64> {
    let t = grid.tables();
    let tx = t.x.test(x.0, x.1);
    let ty = t.y.test(y.0, y.1);
    let mut out = tx.dot(g).dot(&ty.t());
    out /= grid.basis_norm_sq();
    out
}

/// Parity of `d^a u` for a sine series `u`.
pub(crate) fn parity_of(derivative: bool) -> Parity {
    if derivative {
        Parity::Even
    } else {
        Parity::Odd
    }
}
