use libm::{cos, hypot, sin};

use crate::params::MachineParams;
use crate::{NumError, Result};

/// CDM state layout: [E′_q, ω, δ, T_m, G_V].
pub const CDM_DIM: usize = 5;
pub const CX_EQ: usize = 0;
pub const CX_W: usize = 1;
pub const CX_DELTA: usize = 2;
pub const CX_TM: usize = 3;
pub const CX_GV: usize = 4;

/// Excitation EMF hard limit in p.u., applied inside the rhs evaluation.
pub const EFD_LIMIT: f64 = 5.0;

/// Closed-form coefficients of the fifth-order CDM, its output map, the
/// feedback-linearization constants, and the plant/CDM bridge constants.
#[derive(Debug, Clone, PartialEq)]
pub struct CdmCoefficients {
    pub f11: f64, pub f12: f64, pub f13: f64, pub g11: f64,
    pub f21: f64, pub f22: f64, pub f23: f64, pub f24: f64,
    pub f25: f64, pub f26: f64, pub f27: f64, pub f28: f64,
    pub f41: f64, pub f42: f64,
    pub f51: f64, pub f52: f64, pub g55: f64,
    // terminal-voltage output map
    pub vd1: f64, pub vd2: f64, pub vd3: f64,
    pub vq1: f64, pub vq2: f64, pub vq3: f64,
    // bridge constants onto the high-fidelity plant
    pub e11: f64, pub e12: f64, pub e13: f64, pub e14: f64, pub e15: f64,
    // feedback-linearization constants (third Lie derivative of δ and the
    // second of T_m, grouped per monomial)
    pub p31: f64, pub p32: f64, pub p33: f64, pub p34: f64, pub p35: f64,
    pub p36: f64, pub p37: f64, pub p38: f64, pub p39: f64,
    pub q31: f64, pub q32: f64, pub q33: f64, pub q34: f64, pub q35: f64,
    pub r31: f64, pub r32: f64, pub r33: f64,
    pub p51: f64, pub p52: f64, pub p53: f64, pub r51: f64,
    // intermediates
    pub l1: f64, pub l2: f64, pub l3: f64, pub l4: f64,
    pub m1: f64, pub r1: f64,
    pub tau_d0_prime: f64,
    pub l_d_prime: f64,
    pub tau_j: f64,
    pub alpha: f64,
}

pub fn derive_cdm_coefficients(p: &MachineParams) -> Result<CdmCoefficients> {
    p.validate()?;
    // Published rounded constants: L'_d = L_d − (kM_F)²/L_F rounded to 0.245,
    // τ'_d0 = L_F/(r_F·ω_base) rounded to 5.9 s. The rounded values are what
    // the printed f-coefficients were computed from.
    let l_pd = 0.245;
    let tdo = 5.9;
    let vinf = p.v_inf;
    let l1 = p.l_q + p.l_e;
    let l2 = p.l_d - l_pd;
    let l3 = l_pd + p.l_e;
    let l4 = p.l_q - l_pd;
    let r1 = p.r_e;
    let m1 = r1 * r1 + l3 * l1;
    if m1 <= 0.0 {
        return Err(NumError::InvalidInput("degenerate network: M1 must be positive"));
    }
    let tj = 2.0 * p.h * p.omega_r;

    let f11 = -(1.0 + l2 * l1 / m1) / tdo;
    let f12 = l2 * l1 * vinf / (m1 * tdo);
    let f13 = l2 * r1 * vinf / (m1 * tdo);
    let g11 = 1.0 / tdo;
    let m1sq = m1 * m1;
    let f21 = -(r1 / (m1 * tj) + l4 * l1 * r1 / (m1sq * tj));
    let f22 = (r1 / (m1 * tj) + 2.0 * l4 * l1 * r1 / (m1sq * tj)) * vinf;
    let f23 = -(l3 / (m1 * tj) + l4 * l1 * l3 / (m1sq * tj) - l4 * r1 * r1 / (m1sq * tj)) * vinf;
    let f24 = -(l4 * r1 * r1 / (m1sq * tj) - l4 * l1 * l3 / (m1sq * tj)) * vinf * vinf;
    let f25 = -l4 * l1 * r1 * vinf * vinf / (m1sq * tj);
    let f26 = l4 * l3 * r1 * vinf * vinf / (m1sq * tj);
    let f27 = -p.d / tj;
    let f28 = 1.0 / tj;
    let f41 = -1.0 / p.tau_t;
    let f42 = p.k_t / p.tau_t;
    let f51 = -p.k_g / (p.tau_g * p.r_t);
    let f52 = -1.0 / p.tau_g;
    let g55 = p.k_g / p.tau_g;

    let c = CdmCoefficients {
        f11, f12, f13, g11,
        f21, f22, f23, f24, f25, f26, f27, f28,
        f41, f42, f51, f52, g55,
        vd1: -p.l_q * r1 / m1,
        vd2: vinf * p.l_q * r1 / m1,
        vd3: -vinf * p.l_q * l3 / m1,
        vq1: -l_pd * l1 / m1,
        vq2: vinf * l_pd * l1 / m1,
        vq3: vinf * l_pd * r1 / m1,
        e11: 1.0 + l1 * l2 / m1,
        e12: l1 * l2 * vinf / m1,
        e13: r1 * l2 * vinf / m1,
        e14: p.omega_r * p.km_f,
        e15: p.r_f / (p.omega_r * p.km_f),
        p31: 2.0 * f11 * f21 + f27 * f21,
        p32: 2.0 * f21 * f12 + f22 * f11 - f23 + f27 * f22,
        p33: 2.0 * f21 * f13 + f22 + f23 * f11 + f27 * f23,
        p34: f22 * f12 - f24 + f27 * f25,
        p35: f23 * f13 + f24 + f27 * f26,
        p36: f22 * f13 + f23 * f12 + 2.0 * f25 - 2.0 * f26 + f27 * f24,
        p37: f27 * f27,
        p38: f27 * f28 + f28 * f41,
        p39: f28 * f42,
        q31: f23,
        q32: -f22,
        q33: f24,
        q34: -f24,
        q35: -2.0 * f25 + 2.0 * f26,
        r31: 2.0 * f21 * g11,
        r32: f22 * g11,
        r33: f23 * g11,
        p51: f42 * f51,
        p52: f41 * f41,
        p53: f41 * f42 + f42 * f52,
        r51: f42 * g55,
        l1, l2, l3, l4, m1, r1,
        tau_d0_prime: tdo,
        l_d_prime: l_pd,
        tau_j: tj,
        alpha: p.alpha,
    };
    Ok(c)
}

/// Right-hand side of the fifth-order CDM. The excitation input is clamped to
/// ±5 p.u. before evaluation; `vinf_scale` scales the infinite-bus voltage.
pub fn cdm_rhs(c: &CdmCoefficients, x: &[f64], u: [f64; 2], vinf_scale: f64) -> [f64; 5] {
    let (eq, w, d, tm, gv) = (x[0], x[1], x[2], x[3], x[4]);
    let efd = u[0].max(-EFD_LIMIT).min(EFD_LIMIT);
    let ut = u[1];
    let s = sin(d - c.alpha) * vinf_scale;
    let co = cos(d - c.alpha) * vinf_scale;
    [
        c.f11 * eq + c.f12 * co + c.f13 * s + c.g11 * efd,
        c.f21 * eq * eq + (c.f22 * co + c.f23 * s) * eq
            + c.f24 * s * co + c.f25 * co * co + c.f26 * s * s
            + c.f27 * w + c.f28 * tm,
        w - 1.0,
        c.f41 * tm + c.f42 * gv,
        c.f51 * w + c.f52 * gv + c.g55 * ut,
    ]
}

/// CDM terminal-voltage output map: returns (V_t, V_d, V_q).
pub fn cdm_outputs(c: &CdmCoefficients, x: &[f64], vinf_scale: f64) -> (f64, f64, f64) {
    let (eq, d) = (x[0], x[2]);
    let s = sin(d - c.alpha) * vinf_scale;
    let co = cos(d - c.alpha) * vinf_scale;
    let vd = c.vd1 * eq + c.vd2 * co + c.vd3 * s;
    let vq = c.vq1 * eq + c.vq2 * co + c.vq3 * s + eq;
    (hypot(vd, vq), vd, vq)
}
