use libm::sqrt;

use crate::care::{kalman_gain, lqr_gain};
use crate::cdm::EFD_LIMIT;
use crate::equilibrium::LinearModel;
use crate::mat::Matrix;
use crate::ode::rk4_step;
use crate::{NumError, Result};

/// Principal square root of a symmetric positive-definite 2×2 matrix.
pub fn sqrt_spd2(m: &Matrix) -> Result<Matrix> {
    if m.rows != 2 || m.cols != 2 {
        return Err(NumError::DimensionMismatch { expected: (2, 2), got: (m.rows, m.cols) });
    }
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let tr = m[(0, 0)] + m[(1, 1)];
    if det <= 0.0 || tr <= 0.0 {
        return Err(NumError::InvalidInput("sqrt_spd2 requires positive-definite input"));
    }
    let s = sqrt(det);
    let t = sqrt(tr + 2.0 * s);
    let mut out = m.clone();
    out[(0, 0)] += s;
    out[(1, 1)] += s;
    Ok(out.scale(1.0 / t))
}

/// LTR-parameterized Kalman filter design: V1(q) = V10 + q²·B·V·Bᵀ.
#[derive(Debug, Clone, PartialEq)]
pub struct LtrDesign {
    pub q: f64,
    pub v10: Matrix,
    pub v: Matrix,
    pub v2: Matrix,
    pub h: Matrix,
    pub psi: Matrix,
}

pub fn design_ltr_filter(
    m: &LinearModel,
    q: f64,
    v10: &Matrix,
    v: &Matrix,
    v2: &Matrix,
) -> Result<LtrDesign> {
    if q < 0.0 {
        return Err(NumError::InvalidInput("LTR parameter q must be non-negative"));
    }
    let bv_bt = m.b.matmul(v)?.matmul(&m.b.transpose())?;
    let v1 = v10.add(&bv_bt.scale(q * q))?;
    let (h, psi) = kalman_gain(&m.a, &m.c, &v1, v2)?;
    Ok(LtrDesign { q, v10: v10.clone(), v: v.clone(), v2: v2.clone(), h, psi })
}

/// Ideal (recovery-limit) filter gain H = q·B·V^{1/2}·(V2^{1/2})⁻¹.
pub fn ideal_filter_gain(m: &LinearModel, q: f64, v: &Matrix, v2: &Matrix) -> Result<Matrix> {
    let v_half = sqrt_spd2(v)?;
    let v2_half = sqrt_spd2(v2)?;
    let dir = v2_half.transpose().solve(&v_half.transpose())?.transpose();
    Ok(m.b.matmul(&dir)?.scale(q))
}

/// LQG state-feedback gain K = R⁻¹BᵀP for the linearized CDM.
pub fn design_lqg_gain(m: &LinearModel, q: &Matrix, r: &Matrix) -> Result<Matrix> {
    lqr_gain(&m.a, &m.b, q, r)
}

/// Observer-based LQG/LTR controller operating in deviation coordinates.
#[derive(Debug, Clone)]
pub struct LqgController {
    pub k: Matrix,
    pub h: Matrix,
    pub a: Matrix,
    pub b: Matrix,
    pub c: Matrix,
    pub u0: [f64; 2], // [E_FD0, u_T0]
    pub y0: [f64; 2], // [V_t0, ω0]
    pub xh: [f64; 5],
}

impl LqgController {
    pub fn new(m: &LinearModel, k: Matrix, h: Matrix, u0: [f64; 2], y0: [f64; 2]) -> Self {
        LqgController {
            k,
            h,
            a: m.a.clone(),
            b: m.b.clone(),
            c: m.c.clone(),
            u0,
            y0,
            xh: [0.0; 5],
        }
    }

    /// One controller step: u = u0 − K·x̂ (EFD clamped), then the estimate is
    /// advanced by RK4 over the observer dynamics with the innovation held
    /// over the step.
    pub fn step(&mut self, y: [f64; 2], dt: f64) -> Result<[f64; 2]> {
        let mut u = [0.0; 2];
        for i in 0..2 {
            let mut acc = self.u0[i];
            for j in 0..5 {
                acc -= self.k[(i, j)] * self.xh[j];
            }
            u[i] = acc;
        }
        u[0] = u[0].max(-EFD_LIMIT).min(EFD_LIMIT);
        let du = [u[0] - self.u0[0], u[1] - self.u0[1]];
        let dy = [y[0] - self.y0[0], y[1] - self.y0[1]];
        let f = |_t: f64, xh: &[f64]| {
            let mut dx = alloc::vec![0.0; 5];
            for i in 0..5 {
                let mut acc = 0.0;
                for j in 0..5 {
                    acc += self.a[(i, j)] * xh[j];
                }
                acc += self.b[(i, 0)] * du[0] + self.b[(i, 1)] * du[1];
                // innovation H(dy − C x̂)
                for r in 0..2 {
                    let mut cy = 0.0;
                    for j in 0..5 {
                        cy += self.c[(r, j)] * xh[j];
                    }
                    acc += self.h[(i, r)] * (dy[r] - cy);
                }
                dx[i] = acc;
            }
            dx
        };
        let next = rk4_step(&f, 0.0, &self.xh, dt);
        for (i, v) in next.iter().enumerate() {
            if !v.is_finite() {
                return Err(NumError::NonFinite { t: 0.0 });
            }
            self.xh[i] = *v;
        }
        Ok(u)
    }
}

/// Block closed-loop matrix [[A, −BK], [HC, A−BK−HC]].
pub fn closed_loop_matrix(m: &LinearModel, k: &Matrix, h: &Matrix) -> Result<Matrix> {
    let n = m.a.rows;
    let bk = m.b.matmul(k)?;
    let hc = h.matmul(&m.c)?;
    let lower_right = m.a.sub(&bk)?.sub(&hc)?;
    let mut cl = Matrix::zeros(2 * n, 2 * n);
    cl.set_block(0, 0, &m.a);
    cl.set_block(0, n, &bk.scale(-1.0));
    cl.set_block(n, 0, &hc);
    cl.set_block(n, n, &lower_right);
    Ok(cl)
}

/// Full-state LQR baseline: u = u0 − K·(x − x0), EFD clamped.
pub fn full_state_lqr_control(k: &Matrix, x: &[f64], x0: &[f64; 5], u0: [f64; 2]) -> [f64; 2] {
    let mut u = [0.0; 2];
    for i in 0..2 {
        let mut acc = u0[i];
        for j in 0..5 {
            acc -= k[(i, j)] * (x[j] - x0[j]);
        }
        u[i] = acc;
    }
    u[0] = u[0].max(-EFD_LIMIT).min(EFD_LIMIT);
    u
}
