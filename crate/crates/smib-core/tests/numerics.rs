use smib_core::care::{care_residual, filter_residual, kalman_gain, lqr_gain, solve_care};
use smib_core::eig::{eigenvalues, max_real_part};
use smib_core::mat::{lyapunov_solve, Matrix};
use smib_core::newton::newton_solve;
use smib_core::ode::{integrate, rk4_step};

fn m(rows: &[&[f64]]) -> Matrix {
    Matrix::from_rows(rows)
}

#[test]
fn lu_solve_and_determinant() {
    let a = m(&[&[4.0, 3.0], &[6.0, 3.0]]);
    let b = m(&[&[10.0], &[12.0]]);
    let x = a.solve(&b).unwrap();
    assert!((a.matmul(&x).unwrap().sub(&b).unwrap()).max_abs() < 1e-12);
    assert!((a.determinant().unwrap() - (-6.0)).abs() < 1e-12);
    let inv = a.inverse().unwrap();
    assert!((a.matmul(&inv).unwrap().sub(&Matrix::identity(2)).unwrap()).max_abs() < 1e-12);
}

#[test]
fn lyapunov_reproduces_known_solution() {
    // AᵀX + XA + Q = 0 with A = -I → X = Q/2
    let a = Matrix::scaled_identity(3, -1.0);
    let q = m(&[&[2.0, 1.0, 0.0], &[1.0, 4.0, 0.5], &[0.0, 0.5, 6.0]]);
    let x = lyapunov_solve(&a, &q).unwrap();
    assert!(x.sub(&q.scale(0.5)).unwrap().max_abs() < 1e-12);
}

#[test]
fn eigenvalues_diagonal_and_rotation() {
    let e = eigenvalues(&Matrix::diag(&[3.0, 1.0, 2.0])).unwrap();
    let re: Vec<f64> = e.iter().map(|z| z.re).collect();
    assert!((re[0] - 1.0).abs() < 1e-10 && (re[1] - 2.0).abs() < 1e-10 && (re[2] - 3.0).abs() < 1e-10);
    assert!(e.iter().all(|z| z.im.abs() < 1e-10));

    let e = eigenvalues(&m(&[&[0.0, 1.0], &[-1.0, 0.0]])).unwrap();
    assert!(e[0].re.abs() < 1e-10 && (e[0].im + 1.0).abs() < 1e-10);
    assert!(e[1].re.abs() < 1e-10 && (e[1].im - 1.0).abs() < 1e-10);
}

#[test]
fn eigenvalues_match_transpose() {
    let a = m(&[
        &[-0.5517, 0.0, -0.3062, 0.0, 0.0],
        &[-0.2778, 0.0, -0.3054, 0.2110, 0.0],
        &[0.0, 1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, -2.0, 2.0],
        &[0.0, -0.25, 0.0, 0.0, -5.0],
    ]);
    let e1 = eigenvalues(&a).unwrap();
    let e2 = eigenvalues(&a.transpose()).unwrap();
    for (z1, z2) in e1.iter().zip(e2.iter()) {
        assert!((z1.re - z2.re).abs() < 1e-9 && (z1.im - z2.im).abs() < 1e-9);
    }
}

#[test]
fn care_scalar_and_degenerate() {
    let p = solve_care(&m(&[&[0.0]]), &m(&[&[1.0]]), &m(&[&[1.0]]), &m(&[&[1.0]])).unwrap();
    assert!((p[(0, 0)] - 1.0).abs() < 1e-10);

    let p = solve_care(&m(&[&[-1.0]]), &m(&[&[0.0]]), &m(&[&[0.0]]), &m(&[&[1.0]])).unwrap();
    assert!(p[(0, 0)].abs() < 1e-12);
}

#[test]
fn care_double_integrator_gain() {
    let a = m(&[&[0.0, 1.0], &[0.0, 0.0]]);
    let b = m(&[&[0.0], &[1.0]]);
    let q = Matrix::identity(2);
    let r = Matrix::identity(1);
    let p = solve_care(&a, &b, &q, &r).unwrap();
    assert!(care_residual(&a, &b, &q, &r, &p).unwrap() <= 1e-10);
    let k = lqr_gain(&a, &b, &q, &r).unwrap();
    assert!((k[(0, 0)] - 1.0).abs() < 1e-8);
    assert!((k[(0, 1)] - 3.0_f64.sqrt()).abs() < 1e-8);
    let acl = a.sub(&b.matmul(&k).unwrap()).unwrap();
    assert!(max_real_part(&acl).unwrap() < 0.0);
}

#[test]
fn kalman_dual_of_lqr_on_random_instance() {
    // fixed pseudo-random stabilizable/observable 5-state instance
    let a = m(&[
        &[-1.2, 0.3, 0.0, 0.5, -0.1],
        &[0.2, -0.7, 0.4, 0.0, 0.3],
        &[0.0, 1.0, -0.2, 0.1, 0.0],
        &[0.3, 0.0, -0.5, -1.5, 0.2],
        &[0.1, -0.2, 0.0, 0.4, -0.9],
    ]);
    let c = m(&[&[1.0, 0.0, 0.2, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.1, 0.0]]);
    let v1 = Matrix::identity(5);
    let v2 = m(&[&[1.0, 0.1], &[0.1, 2.0]]);
    let (h, psi) = kalman_gain(&a, &c, &v1, &v2).unwrap();
    assert!(filter_residual(&a, &c, &v1, &v2, &psi).unwrap() <= 1e-8);
    let k_dual = lqr_gain(&a.transpose(), &c.transpose(), &v1, &v2).unwrap();
    assert!(h.sub(&k_dual.transpose()).unwrap().max_abs() < 1e-8);
    let acl = a.sub(&h.matmul(&c).unwrap()).unwrap();
    assert!(max_real_part(&acl).unwrap() < 0.0);
}

#[test]
fn kalman_trivial_zero_noise() {
    let a = m(&[&[-1.0, 0.2], &[0.0, -2.0]]);
    let c = Matrix::identity(2);
    let v1 = Matrix::zeros(2, 2);
    let v2 = Matrix::identity(2);
    let (h, psi) = kalman_gain(&a, &c, &v1, &v2).unwrap();
    assert!(h.max_abs() < 1e-9 && psi.max_abs() < 1e-9);
}

#[test]
fn integrate_constant_and_exponential() {
    let f0 = |_t: f64, x: &[f64]| vec![0.0; x.len()];
    let tr = integrate(&f0, &[2.5], (0.0, 1.0), 0.1, &[]).unwrap();
    assert!(tr.states.iter().all(|s| (s[0] - 2.5).abs() < 1e-15));

    let f = |_t: f64, x: &[f64]| vec![-x[0]];
    let tr = integrate(&f, &[1.0], (0.0, 1.0), 1e-3, &[]).unwrap();
    let end = tr.last_state()[0];
    assert!((end - (-1.0_f64).exp()).abs() < 1e-8);
}

#[test]
fn integrate_aligns_events() {
    let f = |_t: f64, x: &[f64]| vec![-x[0]];
    let tr = integrate(&f, &[1.0], (0.0, 1.0), 0.3, &[0.5]).unwrap();
    assert!(tr.times.iter().any(|&t| (t - 0.5).abs() < 1e-12));
    assert!((tr.times.last().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn rk4_order_ratio() {
    // smooth nonlinear system; halving dt should shrink error ~16x
    let f = |t: f64, x: &[f64]| vec![x[1], -x[0] + 0.1 * (t).sin()];
    let exact = integrate(&f, &[1.0, 0.0], (0.0, 2.0), 1e-5, &[]).unwrap();
    let xe = exact.last_state().to_vec();
    let err = |dt: f64| {
        let tr = integrate(&f, &[1.0, 0.0], (0.0, 2.0), dt, &[]).unwrap();
        let xl = tr.last_state();
        ((xl[0] - xe[0]).powi(2) + (xl[1] - xe[1]).powi(2)).sqrt()
    };
    let ratio = err(0.02) / err(0.01);
    assert!(
        (12.0..=20.0).contains(&ratio),
        "RK4 order ratio {ratio} outside [12, 20]"
    );
}

#[test]
fn newton_linear_and_residual() {
    let f = |x: &[f64]| vec![x[0] - 3.0, x[1] + 2.0];
    let x = newton_solve(&f, &[0.0, 0.0]).unwrap();
    assert!((x[0] - 3.0).abs() < 1e-12 && (x[1] + 2.0).abs() < 1e-12);

    // nonlinear: intersection of circle and line
    let g = |x: &[f64]| vec![x[0] * x[0] + x[1] * x[1] - 2.0, x[0] - x[1]];
    let x = newton_solve(&g, &[1.5, 0.5]).unwrap();
    let r = g(&x);
    assert!(r.iter().all(|v| v.abs() <= 1e-10));
}

#[test]
fn rk4_step_matches_taylor() {
    let f = |_t: f64, x: &[f64]| vec![x[0]];
    let x1 = rk4_step(&f, 0.0, &[1.0], 0.1);
    // one step: local truncation error ~ dt^5/5! ≈ 8.3e-8
    assert!((x1[0] - (0.1_f64).exp()).abs() < 2e-7);
}
