use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on `[a, b]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule, exact for polynomials of degree `2n - 1`.
    pub fn new(n: usize, a: f64, b: f64) -> Self {
        assert!(n >= 1, "quadrature needs at least one point");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for i in 0..(n + 1) / 2 {
            // Chebyshev-like initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = mid - half * x;
            nodes[n - 1 - i] = mid + half * x;
            weights[i] = half * w;
            weights[n - 1 - i] = half * w;
        }
        Self { nodes, weights }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integrates_polynomials_exactly() {
        let q = GaussLegendre::new(5, -1.0, 2.0);
        // int_{-1}^{2} x^9 dx = (2^10 - 1) / 10
        assert_relative_eq!(q.integrate(|x| x.powi(9)), 102.3, epsilon = 1e-11);
        assert_relative_eq!(q.weights.iter().sum::<f64>(), 3.0, epsilon = 1e-14);
    }

    #[test]
    fn integrates_trig_to_machine_precision() {
        let q = GaussLegendre::new(32, 0.0, PI);
        assert_relative_eq!(
            q.integrate(|x| (8.0 * x).sin().powi(2)),
            PI / 2.0,
            epsilon = 1e-14
        );
        let q = GaussLegendre::new(1, 0.0, 1.0);
        assert_relative_eq!(q.nodes[0], 0.5, epsilon = 1e-15);
    }
}
