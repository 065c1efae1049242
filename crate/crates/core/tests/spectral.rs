mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use cch::spectral::{
    make_grid, sine_transform_forward, sine_transform_inverse, PhysField, SpectralField,
};
use cch::verification::{quadrature_inner_product, GaussLegendre};
use common::*;
use proptest::prelude::*;

#[test]
fn grid_nodes_and_validation() {
    let g = make_grid(2, PI, PI).unwrap();
    assert_relative_eq!(g.nodes_x()[0], PI / 3.0, epsilon = 1e-15);
    assert_relative_eq!(g.nodes_x()[1], 2.0 * PI / 3.0, epsilon = 1e-15);
    let g = make_grid(1, PI, PI).unwrap();
    assert_relative_eq!(g.nodes_x()[0], PI / 2.0);
    assert_relative_eq!(g.nodes_y()[0], PI / 2.0);
    assert!(make_grid(0, PI, PI).is_err());
    assert!(make_grid(2, -1.0, PI).is_err());
    assert!(make_grid(2, PI, 0.0).is_err());
}

#[test]
fn basis_function_transforms_to_unit_coefficient() {
    let g = make_grid(6, 2.0, 3.0).unwrap();
    let f = PhysField::from_fn(&g, |x, y| (PI * x / 2.0).sin() * (PI * y / 3.0).sin());
    let u = sine_transform_forward(&f).unwrap();
    for ((i, j), &a) in u.coeffs().indexed_iter() {
        let want = if i == 0 && j == 0 { 1.0 } else { 0.0 };
        assert!((a - want).abs() < 1e-12, "({i},{j}) = {a}");
    }
    let z = sine_transform_forward(&PhysField::from_fn(&g, |_, _| 0.0)).unwrap();
    assert!(z.coeffs().iter().all(|&v| v == 0.0));
    assert!(sine_transform_inverse(&SpectralField::zeros(&g))
        .values()
        .iter()
        .all(|&v| v == 0.0));
}

#[test]
fn inverse_transform_matches_direct_summation() {
    let mut r = rng(11);
    let g = make_grid(4, PI, 1.7).unwrap();
    let u = random_field(&g, &mut r);
    let f = sine_transform_inverse(&u);
    let (xs, ys) = (g.nodes_x(), g.nodes_y());
    for i in 0..4 {
        for j in 0..4 {
            let d = direct_eval(&u, xs[i], ys[j], false, false);
            assert!((f.values()[[i, j]] - d).abs() < 1e-12);
        }
    }
    let back = sine_transform_forward(&f).unwrap();
    assert!(max_abs_diff(back.coeffs(), u.coeffs()) < 1e-12);
}

#[test]
fn gradient_values_match_direct_summation() {
    let g = pi_grid(4);
    let mut r = rng(12);
    let u = random_field(&g, &mut r);
    let (gx, gy) = u.gradient_values();
    let (xs, ys) = (g.nodes_x(), g.nodes_y());
    for i in 0..4 {
        for j in 0..4 {
            assert!(
                (gx.values()[[i, j]] - direct_eval(&u, xs[i], ys[j], true, false)).abs() < 1e-12
            );
            assert!(
                (gy.values()[[i, j]] - direct_eval(&u, xs[i], ys[j], false, true)).abs() < 1e-12
            );
        }
    }
}

#[test]
fn gradient_of_leading_mode() {
    let g = pi_grid(1);
    let u = SpectralField::mode(&g, 1, 1, 1.0).unwrap();
    let (gx, gy) = u.gradient_values();
    assert!(gx.values()[[0, 0]].abs() < 1e-15);
    assert!(gy.values()[[0, 0]].abs() < 1e-15);
    // Node (pi/3, pi/2) lies on the M = 2 grid in x and M = 1 grid in y.
    let g2 = make_grid(2, PI, PI).unwrap();
    let u2 = SpectralField::mode(&g2, 1, 1, 1.0).unwrap();
    assert_relative_eq!(
        direct_eval(&u2, PI / 3.0, PI / 2.0, true, false),
        0.5,
        epsilon = 1e-15
    );
    let (gx2, _) = u2.gradient_values();
    assert_relative_eq!(
        gx2.values()[[0, 0]],
        0.5 * (PI / 3.0).sin(),
        epsilon = 1e-14
    );
}

#[test]
fn operator_multipliers() {
    let g = pi_grid(3);
    let m11 = SpectralField::mode(&g, 1, 1, 1.0).unwrap();
    let m12 = SpectralField::mode(&g, 1, 2, 1.0).unwrap();
    let m21 = SpectralField::mode(&g, 2, 1, 1.0).unwrap();
    assert_relative_eq!(m11.laplacian().coeff(1, 1), -2.0, epsilon = 1e-14);
    assert_relative_eq!(m12.laplacian().coeff(1, 2), -5.0, epsilon = 1e-14);
    assert_relative_eq!(m11.biharmonic().coeff(1, 1), 4.0, epsilon = 1e-14);
    assert_relative_eq!(m21.biharmonic().coeff(2, 1), 25.0, epsilon = 1e-13);
    let z = SpectralField::zeros(&g);
    assert_eq!(z.laplacian(), z);
    let u = random_field(&g, &mut rng(3));
    assert!(max_abs_diff(u.laplacian().laplacian().coeffs(), u.biharmonic().coeffs()) < 1e-12);
}

#[test]
fn projection_tail_sum() {
    let fine = pi_grid(32);
    let coarse = pi_grid(4);
    let u = SpectralField::from_fn(&fine, |a, b| if a == b { (a as f64).powi(-3) } else { 0.0 });
    let p = u.project_to(&coarse).unwrap();
    let err = u.sub(&p.embed_in(&fine).unwrap()).unwrap().l2_norm();
    let tail: f64 = (5..=32).map(|k| (k as f64).powi(-6)).sum();
    assert_relative_eq!(err, (PI * PI / 4.0 * tail).sqrt(), max_relative = 1e-12);

    let single = SpectralField::mode(&fine, 1, 1, 0.7).unwrap();
    assert_eq!(single.project_to(&coarse).unwrap().coeff(1, 1), 0.7);
    assert_eq!(u.project_to(&fine).unwrap(), u);
    assert!(u.project_to(&make_grid(4, 1.0, PI).unwrap()).is_err());
}

/// `||u - P_N u||` for `a = (k1^2 + k2^2)^(-(sigma + 1)/2)` decays like `N^-sigma`.
#[test]
fn projection_error_decay_rate() {
    let sigma = 2.0;
    let fine = pi_grid(512);
    let u = SpectralField::from_fn(&fine, |a, b| {
        ((a * a + b * b) as f64).powf(-(sigma + 1.0) / 2.0)
    });
    let ns = [8usize, 16, 32, 64];
    let measured: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let p = u.project_to(&pi_grid(n)).unwrap().embed_in(&fine).unwrap();
            u.sub(&p).unwrap().l2_norm()
        })
        .collect();
    // Tail sums over modes outside the N x N block, summed directly.
    let predicted: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let mut s = 0.0;
            for a in 1..=512usize {
                for b in 1..=512usize {
                    if a > n || b > n {
                        s += ((a * a + b * b) as f64).powf(-(sigma + 1.0));
                    }
                }
            }
            (PI * PI / 4.0 * s).sqrt()
        })
        .collect();
    let slope = |e: &[f64]| {
        let h: Vec<f64> = ns.iter().map(|&n| 1.0 / n as f64).collect();
        cch::verification::estimate_order(&h, e).unwrap()
    };
    let (sm, sp) = (slope(&measured), slope(&predicted));
    assert!((sm - sp).abs() <= 0.3, "measured {sm}, predicted {sp}");
    assert!((sm - sigma).abs() <= 0.3, "measured {sm}, sigma {sigma}");
}

#[test]
fn inner_product_examples() {
    let g = pi_grid(4);
    let a = SpectralField::mode(&g, 1, 1, 1.0).unwrap();
    let b = SpectralField::mode(&g, 2, 1, 1.0).unwrap();
    assert_relative_eq!(a.inner_product(&a).unwrap(), PI * PI / 4.0, epsilon = 1e-15);
    assert_eq!(a.inner_product(&b).unwrap(), 0.0);
    assert!(a.inner_product(&SpectralField::zeros(&pi_grid(3))).is_err());
}

#[test]
fn inner_product_and_l2_match_quadrature() {
    let g = make_grid(4, PI, 2.5).unwrap();
    let mut r = rng(21);
    for _ in 0..5 {
        let a = random_field(&g, &mut r);
        let b = random_field(&g, &mut r);
        let q = quadrature_inner_product(&a, &b, 64).unwrap();
        assert!((a.inner_product(&b).unwrap() - q).abs() < 1e-10);
        let qa = quadrature_inner_product(&a, &a, 64).unwrap();
        assert!((a.l2_norm() - qa.sqrt()).abs() < 1e-10);
    }
}

/// Parseval against an independent tensor Gauss rule on a grid twice as
/// fine as the quadratic integrand needs.
#[test]
fn parseval_against_refined_gauss_grid() {
    let m = 8;
    let g = pi_grid(m);
    let u = random_field(&g, &mut rng(5));
    let q = GaussLegendre::new(4 * m, 0.0, PI);
    let integral = q.integrate(|x| q.integrate(|y| direct_eval(&u, x, y, false, false).powi(2)));
    assert!((u.inner_product(&u).unwrap() - integral).abs() < 1e-10);
}

#[test]
fn norm_examples() {
    let g = pi_grid(4);
    let n = SpectralField::mode(&g, 1, 1, 1.0).unwrap().norms();
    assert_relative_eq!(n.l2, PI / 2.0, epsilon = 1e-15);
    assert_relative_eq!(n.h1_semi, PI / 2.0 * 2f64.sqrt(), epsilon = 1e-15);
    assert_relative_eq!(n.h2_semi, PI, epsilon = 1e-15);
    let z = SpectralField::zeros(&g).norms();
    assert_eq!((z.l2, z.h1_semi, z.h2_semi, z.sup), (0.0, 0.0, 0.0, 0.0));
}

fn modes_strategy() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![1usize, 2, 4, 8, 16, 32])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transform_round_trips(m in modes_strategy(), seed in any::<u64>()) {
        let g = pi_grid(m);
        let u = random_field(&g, &mut rng(seed));
        let back = sine_transform_forward(&sine_transform_inverse(&u)).unwrap();
        let scale = max_abs(u.coeffs()).max(1e-300);
        prop_assert!(max_abs_diff(back.coeffs(), u.coeffs()) <= 1e-12 * scale);

        let f = sine_transform_inverse(&random_field(&g, &mut rng(seed ^ 1)));
        let f = PhysField::new(g.clone(), f.values().mapv(|v| v * 3.0 - 0.5)).unwrap();
        let again = sine_transform_inverse(&sine_transform_forward(&f).unwrap());
        let scale = max_abs(f.values()).max(1e-300);
        prop_assert!(max_abs_diff(again.values(), f.values()) <= 1e-12 * scale);
    }

    #[test]
    fn projection_commutes_with_laplacian(fine in 2usize..24, coarse_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let gf = pi_grid(fine);
        let gc = pi_grid(1 + ((fine - 1) as f64 * coarse_frac) as usize);
        let u = random_field(&gf, &mut rng(seed));
        let a = u.laplacian().project_to(&gc).unwrap();
        let b = u.project_to(&gc).unwrap().laplacian();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn poincare_inequality(m in 1usize..16, seed in any::<u64>(), lx in 0.5f64..4.0, ly in 0.5f64..4.0) {
        let g = make_grid(m, lx, ly).unwrap();
        let n = random_field(&g, &mut rng(seed)).norms();
        let cp = 1.0 / g.eigenvalue(1, 1).sqrt();
        prop_assert!(n.l2 <= cp * n.h1_semi * (1.0 + 1e-12));
    }
}
