use libm::{cos, hypot, sin, sqrt};

use crate::params::MachineParams;
use crate::{NumError, Result};

/// Plant state layout: [I_d, I_F, I_D, I_q, I_Q, ω, δ, T_m, G_V].
pub const PLANT_DIM: usize = 9;
pub const IX_ID: usize = 0;
pub const IX_IF: usize = 1;
pub const IX_IDAMP_D: usize = 2;
pub const IX_IQ: usize = 3;
pub const IX_IDAMP_Q: usize = 4;
pub const IX_W: usize = 5;
pub const IX_DELTA: usize = 6;
pub const IX_TM: usize = 7;
pub const IX_GV: usize = 8;

/// Closed-form coefficients of the ninth-order model and its output map.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantCoefficients {
    pub f11: f64, pub f12: f64, pub f13: f64, pub f14: f64, pub f15: f64, pub f16: f64,
    pub f21: f64, pub f22: f64, pub f23: f64, pub f24: f64, pub f25: f64, pub f26: f64,
    pub f31: f64, pub f32: f64, pub f33: f64, pub f34: f64, pub f35: f64, pub f36: f64,
    pub f41: f64, pub f42: f64, pub f43: f64, pub f44: f64, pub f45: f64, pub f46: f64,
    pub f51: f64, pub f52: f64, pub f53: f64, pub f54: f64, pub f55: f64, pub f56: f64,
    pub f61: f64, pub f62: f64, pub f63: f64, pub f64_: f64, pub f65: f64, pub f66: f64,
    pub f81: f64, pub f82: f64,
    pub f91: f64, pub f92: f64,
    pub g11: f64, pub g21: f64, pub g31: f64, pub g92: f64,
    // terminal-voltage output map
    pub y11: f64, pub y12: f64, pub y13: f64, pub y14: f64, pub y15: f64, pub y16: f64,
    pub i11: f64,
    pub y21: f64, pub y22: f64, pub y23: f64, pub y24: f64, pub y25: f64, pub y26: f64,
    // intermediates
    pub mu: f64,
    pub nu: f64,
    pub ld1: f64, pub lf1: f64, pub ldd1: f64,
    pub mf1: f64, pub md1: f64, pub mr1: f64,
    pub lq1: f64, pub lqq1: f64, pub mq1: f64,
    pub tau_j: f64,
    pub k: f64,
    pub alpha: f64,
}

pub fn derive_plant_coefficients(p: &MachineParams) -> Result<PlantCoefficients> {
    p.validate()?;
    let k = sqrt(1.5);
    let (ld, lf, ldd, lq, lqq) = (p.l_d, p.l_f, p.l_dd, p.l_q, p.l_qq);
    let (kmf, kmd, mr, kmq) = (p.km_f, p.km_d, p.m_r, p.km_q);
    let (mf, md, mq) = (kmf / k, kmd / k, kmq / k);
    let (r, rf, rd, rq) = (p.r, p.r_f, p.r_dd, p.r_qq);
    let (re, le, vinf) = (p.r_e, p.l_e, p.v_inf);
    let tau_j = 2.0 * p.h * p.omega_r;
    let k2 = k * k;

    let mu = (ld + le) * mr * mr - ldd * lf * (ld + le)
        + k2 * (ldd * mf * mf + lf * md * md - 2.0 * md * mf * mr);
    let nu = -k2 * mq * mq + lqq * (le + lq);
    if mu.abs() < 1e-12 || nu.abs() < 1e-12 {
        return Err(NumError::InvalidInput("degenerate machine: mu or nu vanishes"));
    }

    let ld1 = (mr * mr - ldd * lf) / mu;
    let lf1 = (md * md * k2 - ldd * (ld + le)) / mu;
    let ldd1 = (mf * mf * k2 - lf * (ld + le)) / mu;
    let mf1 = (md * mr - ldd * mf) / mu;
    let md1 = (mf * mr - lf * md) / mu;
    let mr1 = ((ld + le) * mr - md * mf * k2) / mu;
    let lq1 = lqq / nu;
    let lqq1 = (le + lq) / nu;
    let mq1 = mq / nu;

    let f11 = -ld1 * (r + re);
    let f14 = -(lq + le) * ld1;
    let f41 = lq1 * (ld + le);
    let f44 = -lq1 * (r + re);
    let f46 = -vinf * lq1;
    let f16 = vinf * ld1;
    let c = PlantCoefficients {
        f11,
        f12: k * mf1 * rf,
        f13: k * md1 * rd,
        f14,
        f15: -kmq * ld1,
        f16,
        g11: -k * mf1,
        f21: k * mf1 * (r + re),
        f22: -lf1 * rf,
        f23: -mr1 * rd,
        f24: k * mf1 * (lq + le),
        f25: k2 * mf1 * mq,
        f26: -vinf * k * mf1,
        g21: lf1,
        f31: k * md1 * (r + re),
        f32: -mr1 * rf,
        f33: -ldd1 * rd,
        f34: k * md1 * (lq + le),
        f35: k2 * md1 * mq,
        f36: -vinf * k * md1,
        g31: mr1,
        f41,
        f42: k * mf * lq1,
        f43: k * md * lq1,
        f44,
        f45: k * mq1 * rq,
        f46,
        f51: -k * mq1 * (ld + le),
        f52: -k2 * mq1 * mf,
        f53: -k2 * mq1 * md,
        f54: k * mq1 * (r + re),
        f55: -lqq1 * rq,
        f56: vinf * k * mq1,
        f61: -(ld - lq) / tau_j,
        f62: -kmf / tau_j,
        f63: -kmd / tau_j,
        f64_: kmq / tau_j,
        f65: -p.d / tau_j,
        f66: 1.0 / tau_j,
        f81: -1.0 / p.tau_t,
        f82: p.k_t / p.tau_t,
        f91: -p.k_g / (p.tau_g * p.r_t),
        f92: -1.0 / p.tau_g,
        g92: p.k_g / p.tau_g,
        y11: re + le * f11,
        y12: le * (k * mf1 * rf),
        y13: le * (k * md1 * rd),
        y14: le * f14 + le,
        y15: le * (-kmq * ld1),
        y16: le * f16 - vinf,
        i11: le * (-k * mf1),
        y21: le * f41 - le,
        y22: le * (k * mf * lq1),
        y23: le * (k * md * lq1),
        y24: re + le * f44,
        y25: le * (k * mq1 * rq),
        y26: le * f46 + vinf,
        mu,
        nu,
        ld1, lf1, ldd1, mf1, md1, mr1, lq1, lqq1, mq1,
        tau_j,
        k,
        alpha: p.alpha,
    };
    Ok(c)
}

/// Right-hand side of the ninth-order model. `vinf_scale` scales the
/// infinite-bus voltage (0 while a terminal fault is applied).
pub fn plant_rhs(c: &PlantCoefficients, x: &[f64], u: [f64; 2], vinf_scale: f64) -> [f64; 9] {
    let (id, i_f, idd, iq, iqq) = (x[0], x[1], x[2], x[3], x[4]);
    let (w, d, tm, gv) = (x[5], x[6], x[7], x[8]);
    let (vf, ut) = (u[0], u[1]);
    let s = sin(d - c.alpha) * vinf_scale;
    let co = cos(d - c.alpha) * vinf_scale;
    [
        c.f11 * id + c.f12 * i_f + c.f13 * idd + c.f14 * iq * w + c.f15 * iqq * w + c.f16 * s + c.g11 * vf,
        c.f21 * id + c.f22 * i_f + c.f23 * idd + c.f24 * iq * w + c.f25 * iqq * w + c.f26 * s + c.g21 * vf,
        c.f31 * id + c.f32 * i_f + c.f33 * idd + c.f34 * iq * w + c.f35 * iqq * w + c.f36 * s + c.g31 * vf,
        c.f41 * id * w + c.f42 * i_f * w + c.f43 * idd * w + c.f44 * iq + c.f45 * iqq + c.f46 * co,
        c.f51 * id * w + c.f52 * i_f * w + c.f53 * idd * w + c.f54 * iq + c.f55 * iqq + c.f56 * co,
        c.f61 * id * iq + c.f62 * i_f * iq + c.f63 * idd * iq + c.f64_ * id * iqq + c.f65 * w + c.f66 * tm,
        w - 1.0,
        c.f81 * tm + c.f82 * gv,
        c.f91 * w + c.f92 * gv + c.g92 * ut,
    ]
}

/// Terminal-voltage output map: returns (V_t, V_d, V_q).
pub fn plant_outputs(c: &PlantCoefficients, x: &[f64], u: [f64; 2], vinf_scale: f64) -> (f64, f64, f64) {
    let (id, i_f, idd, iq, iqq) = (x[0], x[1], x[2], x[3], x[4]);
    let (w, d) = (x[5], x[6]);
    let vf = u[0];
    let s = sin(d - c.alpha) * vinf_scale;
    let co = cos(d - c.alpha) * vinf_scale;
    let vd = c.y11 * id + c.y12 * i_f + c.y13 * idd + c.y14 * iq * w + c.y15 * iqq * w
        + c.y16 * s + c.i11 * vf;
    let vq = c.y21 * id * w + c.y22 * i_f * w + c.y23 * idd * w + c.y24 * iq + c.y25 * iqq
        + c.y26 * co;
    (hypot(vd, vq), vd, vq)
}
