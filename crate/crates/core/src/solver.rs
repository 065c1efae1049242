//! Restarted GMRES with right preconditioning for matrix-free operators.

/// Stopping criteria for the linear solve at each implicit step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    /// Relative residual `||A x - b|| / ||b||` required for acceptance.
    pub rel_tol: f64,
    /// Total inner iterations across all restart cycles.
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_iter: 500,
        }
    }
}

/// Krylov dimension between restarts.
const RESTART: usize = 60;

#[derive(Clone, Debug)]
pub struct GmresOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// True relative residual of `x`.
    pub residual: f64,
    pub converged: bool,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `A x = b` where `apply(v, out)` computes `out = A v` and
/// `precond(v, out)` applies an approximate inverse of `A`.
///
/// Iterates on `A M^-1 y = b`, `x = M^-1 y`, so the Arnoldi residual is the
/// true residual of `x` up to rounding. Convergence is always confirmed with
/// an explicit residual before returning.
pub fn gmres(
    mut apply: impl FnMut(&[f64], &mut [f64]),
    precond: impl Fn(&[f64], &mut [f64]),
    b: &[f64],
    cfg: &SolverConfig,
) -> GmresOutcome {
    let n = b.len();
    let b_norm = norm(b);
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return GmresOutcome {
            x,
            iterations: 0,
            residual: 0.0,
            converged: true,
        };
    }

    let mut tmp = vec![0.0; n];
    let mut ax = vec![0.0; n];
    let mut iterations = 0;
    let mut residual;

    loop {
        apply(&x, &mut ax);
        let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let r_norm = norm(&r);
        residual = r_norm / b_norm;
        if residual <= cfg.rel_tol {
            return GmresOutcome {
                x,
                iterations,
                residual,
                converged: true,
            };
        }
        if iterations >= cfg.max_iter {
            break;
        }

        let m = RESTART.min(n).min(cfg.max_iter - iterations);
        r.iter_mut().for_each(|v| *v /= r_norm);
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        basis.push(r);
        // Columns of the Hessenberg matrix, already rotated.
        let mut h: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut cs: Vec<f64> = Vec::with_capacity(m);
        let mut sn: Vec<f64> = Vec::with_capacity(m);
        let mut g = vec![0.0; m + 1];
        g[0] = r_norm;

        let mut k = 0;
        while k < m {
            iterations += 1;
            precond(&basis[k], &mut tmp);
            let mut w = vec![0.0; n];
            apply(&tmp, &mut w);

            let mut col = vec![0.0; k + 2];
            for (j, v) in basis.iter().enumerate() {
                let hij = dot(v, &w);
                col[j] = hij;
                w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= hij * vi);
            }
            let w_norm = norm(&w);
            col[k + 1] = w_norm;

            for j in 0..k {
                let t = cs[j] * col[j] + sn[j] * col[j + 1];
                col[j + 1] = -sn[j] * col[j] + cs[j] * col[j + 1];
                col[j] = t;
            }
            let rho = col[k].hypot(col[k + 1]);
            let (c, s) = if rho == 0.0 {
                (1.0, 0.0)
            } else {
                (col[k] / rho, col[k + 1] / rho)
            };
            cs.push(c);
            sn.push(s);
            col[k] = rho;
            col[k + 1] = 0.0;
            g[k + 1] = -s * g[k];
            g[k] *= c;
            h.push(col);
            k += 1;

            if g[k].abs() / b_norm <= 0.5 * cfg.rel_tol || w_norm == 0.0 {
                break;
            }
            w.iter_mut().for_each(|v| *v /= w_norm);
            basis.push(w);
        }

        // Back substitution on the k x k triangle.
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for j in i + 1..k {
                s -= h[j][i] * y[j];
            }
            y[i] = if h[i][i] != 0.0 { s / h[i][i] } else { 0.0 };
        }
        let mut z = vec![0.0; n];
        for (yi, v) in y.iter().zip(&basis) {
            z.iter_mut().zip(v).for_each(|(zi, vi)| *zi += yi * vi);
        }
        precond(&z, &mut tmp);
        x.iter_mut().zip(&tmp).for_each(|(xi, ti)| *xi += ti);
    }

    GmresOutcome {
        x,
        iterations,
        residual,
        converged: false,
    }
}
