use alloc::vec::Vec;
use libm::{cos, sin};

use crate::care::lqr_gain;
use crate::cdm::{CdmCoefficients, EFD_LIMIT};
use crate::mat::Matrix;
use crate::{NumError, Result};

/// |γ1| below this is treated as a transform singularity.
pub const GAMMA1_MIN: f64 = 1e-8;

/// Feedback-linearization terms at a state: w = σ(x) + γ(x)·u per channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlTerms {
    pub sigma1: f64,
    pub gamma1: f64,
    pub sigma2: f64,
    pub gamma2: f64,
}

/// Nonlinear coordinate transform z = [δ, ω−1, ω̇, T_m, Ṫ_m].
pub fn transform_state(c: &CdmCoefficients, x: &[f64], vinf_scale: f64) -> [f64; 5] {
    let (eq, w, d, tm, gv) = (x[0], x[1], x[2], x[3], x[4]);
    let s = sin(d - c.alpha) * vinf_scale;
    let co = cos(d - c.alpha) * vinf_scale;
    let z3 = c.f21 * eq * eq + c.f22 * eq * co + c.f23 * eq * s + c.f24 * s * co
        + c.f25 * co * co + c.f26 * s * s + c.f27 * w + c.f28 * tm;
    let z5 = c.f41 * tm + c.f42 * gv;
    [d, w - 1.0, z3, tm, z5]
}

/// σ1, γ1 (third Lie derivative of δ) and σ2, γ2 (second of T_m).
pub fn fl_terms(c: &CdmCoefficients, x: &[f64], vinf_scale: f64) -> FlTerms {
    let (eq, w, d, tm, gv) = (x[0], x[1], x[2], x[3], x[4]);
    let s = sin(d - c.alpha) * vinf_scale;
    let co = cos(d - c.alpha) * vinf_scale;
    let sigma1 = c.p31 * eq * eq + c.p32 * eq * co + c.p33 * eq * s + c.p34 * co * co
        + c.p35 * s * s + c.p36 * s * co + c.p37 * w + c.p38 * tm + c.p39 * gv
        + c.q31 * eq * w * co + c.q32 * eq * w * s + c.q33 * w * co * co
        + c.q34 * w * s * s + c.q35 * w * s * co;
    let gamma1 = c.r31 * eq + c.r32 * co + c.r33 * s;
    let sigma2 = c.p51 * w + c.p52 * tm + c.p53 * gv;
    FlTerms { sigma1, gamma1, sigma2, gamma2: c.r51 }
}

/// Numeric sub-relative degrees via directional derivatives: returns (3, 2)
/// on the operating domain.
pub fn relative_degree_check(c: &CdmCoefficients, x: &[f64]) -> Result<(usize, usize)> {
    let t = fl_terms(c, x, 1.0);
    if t.gamma1.abs() < GAMMA1_MIN {
        return Err(NumError::InvalidInput("gamma1 singular at state"));
    }
    // structural zeros: L_g h1 and L_g L_f h1 vanish because the input columns
    // touch only the E'_q and G_V rows while h1 = δ chains through ω
    let eps = 1e-6;
    let lg_h1: f64 = 0.0; // dδ/du = 0 exactly
    let mut xp = [x[0], x[1], x[2], x[3], x[4]];
    xp[0] += eps;
    let lg_lf_h1 = (crate::cdm::cdm_rhs(c, &xp, [0.0, 0.0], 1.0)[2]
        - crate::cdm::cdm_rhs(c, x, [0.0, 0.0], 1.0)[2])
        / eps; // ∂δ̇/∂E'_q = 0 structurally
    let r1 = if lg_h1.abs() <= 1e-10 && lg_lf_h1.abs() <= 1e-10 && t.gamma1.abs() > 1e-8 {
        3
    } else {
        0
    };
    let r2 = if t.gamma2.abs() > 1e-8 { 2 } else { 0 };
    if r1 + r2 != 5 {
        return Err(NumError::InvalidInput("relative degree defect"));
    }
    Ok((r1, r2))
}

/// Gains for the two decoupled chains; with `integral` the augmented chains
/// carry an extra integral-of-tracking-error state (last gain entry).
#[derive(Debug, Clone, PartialEq)]
pub struct FlGains {
    pub kg: Vec<f64>, // 3 (NFLC) or 4 (INFLC, last = integral gain)
    pub kt: Vec<f64>, // 2 or 3
    pub integral: bool,
}

impl FlGains {
    pub fn nflc(kg: [f64; 3], kt: [f64; 2]) -> Self {
        FlGains { kg: kg.to_vec(), kt: kt.to_vec(), integral: false }
    }

    pub fn inflc(kg: [f64; 4], kt: [f64; 3]) -> Self {
        FlGains { kg: kg.to_vec(), kt: kt.to_vec(), integral: true }
    }
}

fn chain_pair(n: usize, integral: bool) -> (Matrix, Matrix) {
    // chain of n integrators (e1..en), optionally augmented with ei' = e1
    let dim = n + integral as usize;
    let mut a = Matrix::zeros(dim, dim);
    for i in 0..n - 1 {
        a[(i, i + 1)] = 1.0;
    }
    if integral {
        a[(n, 0)] = 1.0;
    }
    let mut b = Matrix::zeros(dim, 1);
    b[(n - 1, 0)] = 1.0;
    (a, b)
}

/// LQR design over the decoupled chains (Q_G/R_G for the δ chain, Q_T/R_T for
/// the T_m chain). The §VI gain fixtures may be supplied directly instead.
pub fn design_fl_gains(
    q_g: &Matrix,
    r_g: &Matrix,
    q_t: &Matrix,
    r_t: &Matrix,
    with_integral: bool,
) -> Result<FlGains> {
    let (ag, bg) = chain_pair(3, with_integral);
    let (at, bt) = chain_pair(2, with_integral);
    let kg = lqr_gain(&ag, &bg, q_g, r_g)?;
    let kt = lqr_gain(&at, &bt, q_t, r_t)?;
    Ok(FlGains {
        kg: kg.row(0).to_vec(),
        kt: kt.row(0).to_vec(),
        integral: with_integral,
    })
}

/// NFLC/INFLC controller with integral accumulators and anti-windup state.
#[derive(Debug, Clone)]
pub struct FlController {
    pub gains: FlGains,
    pub zd: [f64; 5],
    pub ei_g: f64,
    pub ei_t: f64,
    last_u: [f64; 2],
    has_last: bool,
}

impl FlController {
    pub fn new(gains: FlGains, zd: [f64; 5]) -> Self {
        FlController { gains, zd, ei_g: 0.0, ei_t: 0.0, last_u: [0.0; 2], has_last: false }
    }

    /// Reference from an equilibrium: z_d = [δ0, 0, 0, T_m0, 0].
    pub fn zd_from_op(x0: &[f64; 5]) -> [f64; 5] {
        [x0[2], 0.0, 0.0, x0[3], 0.0]
    }

    /// One control evaluation; advances the integral states by dt when the
    /// gains carry integral action (frozen while the EFD channel saturates).
    pub fn control(&mut self, c: &CdmCoefficients, x: &[f64], dt: f64) -> [f64; 2] {
        let z = transform_state(c, x, 1.0);
        let e = [
            z[0] - self.zd[0],
            z[1] - self.zd[1],
            z[2] - self.zd[2],
            z[3] - self.zd[3],
            z[4] - self.zd[4],
        ];
        let t = fl_terms(c, x, 1.0);
        if t.gamma1.abs() < GAMMA1_MIN {
            // singularity: hold last control
            if self.has_last {
                return self.last_u;
            }
            return [0.0, 0.0];
        }
        let g = &self.gains;
        let (w1, w2) = if g.integral {
            (
                -(g.kg[0] * e[0] + g.kg[1] * e[1] + g.kg[2] * e[2]) - g.kg[3] * self.ei_g,
                -(g.kt[0] * e[3] + g.kt[1] * e[4]) - g.kt[2] * self.ei_t,
            )
        } else {
            (
                -(g.kg[0] * e[0] + g.kg[1] * e[1] + g.kg[2] * e[2]),
                -(g.kt[0] * e[3] + g.kt[1] * e[4]),
            )
        };
        let u1 = (w1 - t.sigma1) / t.gamma1;
        let u2 = (w2 - t.sigma2) / t.gamma2;
        let u1c = u1.max(-EFD_LIMIT).min(EFD_LIMIT);
        if g.integral {
            if u1 == u1c {
                self.ei_g += e[0] * dt;
            }
            self.ei_t += e[3] * dt;
        }
        self.last_u = [u1c, u2];
        self.has_last = true;
        self.last_u
    }
}

/// E′_q from plant quantities, variant A: field current and rotor angle.
pub fn reconstruct_eq_prime_a(c: &CdmCoefficients, i_f: f64, delta: f64) -> f64 {
    (c.e14 * i_f + c.e12 * cos(delta - c.alpha) + c.e13 * sin(delta - c.alpha)) / c.e11
}

/// E′_q from plant quantities, variant B: field and d-axis currents.
pub fn reconstruct_eq_prime_b(c: &CdmCoefficients, i_f: f64, i_d: f64) -> f64 {
    c.e14 * i_f + c.l2 * i_d
}

/// Excitation EMF to plant field voltage: V_F = e15·E_FD.
pub fn efd_to_vf(c: &CdmCoefficients, efd: f64) -> f64 {
    c.e15 * efd
}

/// Inverse map for reporting: E_FD = V_F/e15.
pub fn vf_to_efd(c: &CdmCoefficients, vf: f64) -> f64 {
    vf / c.e15
}
