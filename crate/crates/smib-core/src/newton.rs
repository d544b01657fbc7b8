use alloc::vec::Vec;

use crate::mat::Matrix;
use crate::{NumError, Result};

const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 100;
const MAX_HALVINGS: usize = 30;
const FD_STEP: f64 = 1e-7;

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, &x| m.max(x.abs()))
}

/// Damped Newton with finite-difference Jacobian; ‖F(x*)‖∞ ≤ 1e−10 on success.
pub fn newton_solve<F>(f: &F, x0: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    if fx.len() != n {
        return Err(NumError::InvalidInput("newton_solve requires square system"));
    }
    for _ in 0..NEWTON_MAX_ITER {
        let res = inf_norm(&fx);
        if res <= NEWTON_TOL {
            return Ok(x);
        }
        // central finite-difference Jacobian
        let mut jac = Matrix::zeros(n, n);
        for j in 0..n {
            let h = FD_STEP * (1.0 + x[j].abs());
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let fp = f(&xp);
            let fm = f(&xm);
            for i in 0..n {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let rhs = Matrix::col_vec(&fx);
        let step = jac.solve(&rhs)?;
        // damped update: halve until the residual decreases
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..MAX_HALVINGS {
            let xn: Vec<f64> = (0..n).map(|i| x[i] - lambda * step[(i, 0)]).collect();
            let fn_ = f(&xn);
            if inf_norm(&fn_) < res {
                x = xn;
                fx = fn_;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(NumError::NoConvergence { iterations: NEWTON_MAX_ITER, residual: res });
        }
    }
    let res = inf_norm(&fx);
    if res <= 1e-10 {
        Ok(x)
    } else {
        Err(NumError::NoConvergence { iterations: NEWTON_MAX_ITER, residual: res })
    }
}

/// Finite-difference Jacobian of a vector field, for cross-checks.
pub fn fd_jacobian<F>(f: &F, x: &[f64]) -> Matrix
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let n = x.len();
    let f0 = f(x);
    let m = f0.len();
    let mut jac = Matrix::zeros(m, n);
    for j in 0..n {
        let h = FD_STEP * (1.0 + x[j].abs());
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[j] += h;
        xm[j] -= h;
        let fp = f(&xp);
        let fm = f(&xm);
        for i in 0..m {
            jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    jac
}
