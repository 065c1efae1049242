mod common;

use cch::model::ModelParams;
use cch::solver::SolverConfig;
use cch::stepper::{
    integrate_explicit, run, scheme_operator, step_explicit_reference, step_implicit, TimeGrid,
};
use cch::verification::{assemble_dense, dense_galerkin_apply, dense_step};
use cch::{initial, SpectralField};
use common::*;

fn generic() -> ModelParams {
    ModelParams::new(1.0, 0.7, 1.3, [1.0, -0.5]).unwrap()
}

#[test]
fn operator_matches_dense_assembly() {
    let g = pi_grid(2);
    let mut r = rng(30);
    for _ in 0..10 {
        let up = random_field(&g, &mut r);
        let w = random_field(&g, &mut r);
        let fast = scheme_operator(&w, &up, &generic(), 0.01).unwrap();
        let slow = dense_galerkin_apply(&w, &up, &generic(), 0.01, 32).unwrap();
        assert!(rel_l2(&fast, &slow) < 1e-10);
    }
}

#[test]
fn dense_oracle_constant_coefficient_diagonal() {
    let g = pi_grid(3);
    let p = ModelParams::linear(1.0);
    let dt = 0.05;
    let up = random_field(&g, &mut rng(31));
    let a = assemble_dense(&up, &p, dt, 16).unwrap();
    for k1 in 1..=3 {
        for k2 in 1..=3 {
            let lam = g.eigenvalue(k1, k2);
            let i = (k1 - 1) * 3 + (k2 - 1);
            assert!((a[(i, i)] - (1.0 / dt + lam * lam - lam)).abs() < 1e-12 * a[(i, i)]);
            for j in 0..9 {
                if j != i {
                    assert!(a[(i, j)].abs() < 1e-12);
                }
            }
        }
    }
    let zero = dense_galerkin_apply(&SpectralField::zeros(&g), &up, &p, dt, 16).unwrap();
    assert!(zero.coeffs().iter().all(|&v| v == 0.0));
}

#[test]
fn implicit_step_matches_dense_direct_solve() {
    let g = pi_grid(2);
    let mut r = rng(32);
    let cfg = SolverConfig::default();
    for _ in 0..5 {
        let up = random_field(&g, &mut r);
        let f = random_field(&g, &mut r);
        for forcing in [None, Some(&f)] {
            let (u, _) = step_implicit(&up, &generic(), 0.01, &cfg, forcing).unwrap();
            let d = dense_step(&up, &generic(), 0.01, 32, forcing).unwrap();
            assert!(max_abs_diff(u.coeffs(), d.coeffs()) < 1e-8);
        }
    }
}

#[test]
fn linear_step_equals_closed_form() {
    let g = pi_grid(8);
    let p = ModelParams::linear(1.0);
    let dt = 0.1;
    let up = random_field(&g, &mut rng(33));
    let (u, _) = step_implicit(&up, &p, dt, &SolverConfig::default(), None).unwrap();
    let expect = SpectralField::from_fn(&g, |a, b| {
        let lam = g.eigenvalue(a, b);
        up.coeff(a, b) / dt / (1.0 / dt + lam * lam - lam)
    });
    assert!(max_abs_diff(u.coeffs(), expect.coeffs()) <= 1e-13 * max_abs(up.coeffs()));
}

#[test]
fn accepted_steps_meet_the_residual_tolerance() {
    let g = pi_grid(12);
    let cfg = SolverConfig::default();
    let p = generic();
    let dt = 0.005;
    let up = initial::random_smooth(&g, &mut rng(34), 1.5);
    let (u, report) = step_implicit(&up, &p, dt, &cfg, None).unwrap();
    let rhs = up.scale(1.0 / dt);
    let res = scheme_operator(&u, &up, &p, dt)
        .unwrap()
        .sub(&rhs)
        .unwrap()
        .l2_norm()
        / rhs.l2_norm();
    assert!(report.final_residual <= cfg.rel_tol);
    // Recomputed residual agrees with the solver's up to rounding.
    assert!(res <= cfg.rel_tol * 1.01 + 1e-14, "{res}");
}

#[test]
fn non_convergence_reports_step() {
    let g = pi_grid(8);
    let cfg = SolverConfig {
        rel_tol: 1e-14,
        max_iter: 1,
    };
    let u0 = initial::smooth(&g);
    let time = TimeGrid::new(0.01, 3).unwrap();
    match run(&u0, &generic(), &time, &cfg, &mut (), None) {
        Err(cch::Error::NonConvergence { step, .. }) => assert_eq!(step, Some(1)),
        other => panic!("expected non-convergence, got {other:?}"),
    }
}

#[test]
fn zero_initial_data_stays_zero() {
    let g = pi_grid(6);
    let time = TimeGrid::new(0.01, 5).unwrap();
    let tr = run(
        &SpectralField::zeros(&g),
        &generic(),
        &time,
        &SolverConfig::default(),
        &mut (),
        None,
    )
    .unwrap();
    assert!(tr.final_field.coeffs().iter().all(|&v| v == 0.0));
    assert_eq!(tr.records.len(), 6);
    assert!(tr
        .records
        .iter()
        .all(|r| r.norms.l2 == 0.0 && r.l2_bound_ok == Some(true)));
}

#[test]
fn rk4_linear_scalar_multiplier() {
    let g = pi_grid(2);
    let u = SpectralField::mode(&g, 1, 1, 1.0).unwrap();
    let out = step_explicit_reference(&u, &ModelParams::linear(1.0), 1e-3).unwrap();
    let z: f64 = -2e-3;
    let poly = 1.0 + z + z * z / 2.0 + z.powi(3) / 6.0 + z.powi(4) / 24.0;
    assert!((out.coeff(1, 1) - poly).abs() < 1e-15);
    assert!((out.coeff(1, 1) - 0.998002).abs() < 1e-6);
}

/// Local error of one RK4 step shrinks by `2^5` when the step halves.
#[test]
fn rk4_richardson_ratio() {
    let g = pi_grid(4);
    let p = generic();
    let u = initial::random_smooth(&g, &mut rng(35), 1.0);
    let local = |h: f64| {
        let one = step_explicit_reference(&u, &p, h).unwrap();
        let two = integrate_explicit(&u, &p, h / 2.0, 2).unwrap();
        one.sub(&two).unwrap().l2_norm()
    };
    let h = 2e-3;
    let ratio = local(h) / local(h / 2.0);
    assert!((ratio - 32.0).abs() <= 0.2 * 32.0, "ratio {ratio}");
}

#[test]
fn implicit_run_tracks_explicit_reference() {
    let g = pi_grid(8);
    let p = ModelParams::default();
    let u0 = initial::smooth(&g);
    let dt = 2e-3;
    let time = TimeGrid::from_horizon(dt, 0.05).unwrap();
    let tr = run(&u0, &p, &time, &SolverConfig::default(), &mut (), None).unwrap();
    let reference = integrate_explicit(&u0, &p, 5e-5, 1000).unwrap();
    let err = tr.final_field.sub(&reference).unwrap().l2_norm();
    assert!(err < 10.0 * dt, "{err}");
}

/// Norms on the standard smooth problem stay capped and do not keep growing
/// through the last quarter of the run.
#[test]
fn boundedness_monitors() {
    let g = pi_grid(16);
    let u0 = initial::smooth(&g);
    let time = TimeGrid::from_horizon(1e-2, 1.0).unwrap();
    let tr = run(
        &u0,
        &ModelParams::default(),
        &time,
        &SolverConfig::default(),
        &mut (),
        None,
    )
    .unwrap();
    let cap = 10.0;
    for r in &tr.records {
        assert!(r.norms.h1_semi < cap && r.norms.h2_semi < cap && r.norms.sup < cap);
    }
    let tail = &tr.records[3 * tr.records.len() / 4..];
    type Pick = fn(&cch::diagnostics::DiagnosticsRecord) -> f64;
    let picks: [Pick; 3] = [|r| r.norms.h1_semi, |r| r.norms.h2_semi, |r| r.norms.sup];
    for pick in picks {
        let v: Vec<f64> = tail.iter().map(pick).collect();
        assert!(!v.windows(2).all(|w| w[1] > w[0]), "monotone growth");
    }
}
