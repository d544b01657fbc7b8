use alloc::vec;
use alloc::vec::Vec;
use libm::{cos, sin};

use crate::cdm::{cdm_outputs, cdm_rhs, CdmCoefficients};
use crate::mat::Matrix;
use crate::newton::newton_solve;
use crate::plant::{plant_outputs, plant_rhs, PlantCoefficients};
use crate::{NumError, Result};

/// CDM steady state with its steady inputs and terminal-voltage components.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatingPoint {
    pub x0: [f64; 5],
    pub u0: [f64; 2], // [E_FD0, u_T0]
    pub vt0: f64,
    pub vd0: f64,
    pub vq0: f64,
}

/// Plant steady state with its steady inputs [V_F0, u_T0].
#[derive(Debug, Clone, PartialEq)]
pub struct PlantOperatingPoint {
    pub x0: [f64; 9],
    pub u0: [f64; 2],
    pub vt0: f64,
}

/// Linearized deviation model about an operating point (D = 0).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub a: Matrix,
    pub b: Matrix,
    pub c: Matrix,
    pub d: Matrix,
    pub op: OperatingPoint,
}

/// Solve the CDM equilibrium for a loading given by T_m0, pinning the
/// terminal voltage to V_t0. Unknowns are (E′_q, δ); the gate opening follows
/// from the turbine balance and the steady inputs from the remaining rows.
pub fn find_equilibrium(
    c: &CdmCoefficients,
    tm0: f64,
    vt0: f64,
    guess: (f64, f64),
) -> Result<OperatingPoint> {
    let gv = tm0 * (-c.f41 / c.f42);
    let f = |z: &[f64]| -> Vec<f64> {
        let x = [z[0], 1.0, z[1], tm0, gv];
        let dx = cdm_rhs(c, &x, [0.0, 0.0], 1.0);
        let (vt, _, _) = cdm_outputs(c, &x, 1.0);
        vec![dx[1], vt - vt0]
    };
    let z = newton_solve(&f, &[guess.0, guess.1])?;
    let (eq, delta) = (z[0], z[1]);
    if !(delta > 0.0 && delta < core::f64::consts::PI) {
        return Err(NumError::InvalidInput("equilibrium rotor angle outside (0, pi)"));
    }
    let s = sin(delta - c.alpha);
    let co = cos(delta - c.alpha);
    let efd = -(c.f11 * eq + c.f12 * co + c.f13 * s) / c.g11;
    let ut = -(c.f51 + c.f52 * gv) / c.g55;
    let x0 = [eq, 1.0, delta, tm0, gv];
    let (vt, vd, vq) = cdm_outputs(c, &x0, 1.0);
    Ok(OperatingPoint { x0, u0: [efd, ut], vt0: vt, vd0: vd, vq0: vq })
}

/// Analytic Jacobian of the CDM about an operating point, with the
/// terminal-voltage output row (T1, T2) and the ω row.
pub fn linearize_cdm(c: &CdmCoefficients, op: &OperatingPoint) -> Result<LinearModel> {
    let eq = op.x0[0];
    let delta = op.x0[2];
    if op.vt0.abs() < 1e-12 {
        return Err(NumError::InvalidInput("linearize_cdm undefined at V_t = 0"));
    }
    let s = sin(delta - c.alpha);
    let co = cos(delta - c.alpha);
    let mut a = Matrix::zeros(5, 5);
    a[(0, 0)] = c.f11;
    a[(0, 2)] = -c.f12 * s + c.f13 * co;
    a[(1, 0)] = 2.0 * c.f21 * eq + c.f22 * co + c.f23 * s;
    a[(1, 1)] = c.f27;
    a[(1, 2)] = -c.f22 * eq * s + c.f23 * eq * co + c.f24 * (co * co - s * s)
        + (-2.0 * c.f25 + 2.0 * c.f26) * s * co;
    a[(1, 3)] = c.f28;
    a[(2, 1)] = 1.0;
    a[(3, 3)] = c.f41;
    a[(3, 4)] = c.f42;
    a[(4, 1)] = c.f51;
    a[(4, 4)] = c.f52;
    let mut b = Matrix::zeros(5, 2);
    b[(0, 0)] = c.g11;
    b[(4, 1)] = c.g55;
    let (vdn, vqn) = (op.vd0 / op.vt0, op.vq0 / op.vt0);
    let t1 = vdn * c.vd1 + vqn * c.vq1 + vqn;
    let t2 = -vdn * c.vd2 * s + vdn * c.vd3 * co - vqn * c.vq2 * s + vqn * c.vq3 * co;
    let mut cm = Matrix::zeros(2, 5);
    cm[(0, 0)] = t1;
    cm[(0, 2)] = t2;
    cm[(1, 1)] = 1.0;
    Ok(LinearModel { a, b, c: cm, d: Matrix::zeros(2, 2), op: op.clone() })
}

/// Solve the nine-state plant equilibrium for a loading given by T_m0 with
/// the terminal voltage pinned to V_t0. Unknowns: the five currents, δ, V_F.
pub fn plant_equilibrium(
    c: &PlantCoefficients,
    tm0: f64,
    vt0: f64,
    guess: &[f64; 7],
) -> Result<PlantOperatingPoint> {
    let gv = tm0 * (-c.f81 / c.f82);
    let f = |z: &[f64]| -> Vec<f64> {
        let x = [z[0], z[1], z[2], z[3], z[4], 1.0, z[5], tm0, gv];
        let dx = plant_rhs(c, &x, [z[6], 0.0], 1.0);
        let (vt, _, _) = plant_outputs(c, &x, [z[6], 0.0], 1.0);
        vec![dx[0], dx[1], dx[2], dx[3], dx[4], dx[5], vt - vt0]
    };
    let z = newton_solve(&f, guess)?;
    let delta = z[5];
    if !(delta > 0.0 && delta < core::f64::consts::PI) {
        return Err(NumError::InvalidInput("equilibrium rotor angle outside (0, pi)"));
    }
    let x0 = [z[0], z[1], z[2], z[3], z[4], 1.0, delta, tm0, gv];
    let ut = -(c.f91 + c.f92 * gv) / c.g92;
    let u0 = [z[6], ut];
    let (vt, _, _) = plant_outputs(c, &x0, u0, 1.0);
    Ok(PlantOperatingPoint { x0, u0, vt0: vt })
}
