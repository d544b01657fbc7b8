use crate::{NumError, Result};

/// Raw machine, network, and governor parameters in per-unit (angles in rad,
/// time constants in seconds). `omega_r` is the per-unit base speed; the
/// synchronous base in rad/s is kept as metadata only (`omega_base`).
#[derive(Debug, Clone, PartialEq)]
pub struct MachineParams {
    pub l_d: f64,
    pub l_f: f64,
    pub l_dd: f64,
    pub l_q: f64,
    pub l_qq: f64,
    pub km_f: f64,
    pub km_d: f64,
    pub m_r: f64,
    pub km_q: f64,
    pub r: f64,
    pub r_f: f64,
    pub r_dd: f64,
    pub r_qq: f64,
    pub h: f64,
    pub r_e: f64,
    pub l_e: f64,
    pub d: f64,
    pub k_t: f64,
    pub k_g: f64,
    pub tau_t: f64,
    pub tau_g: f64,
    pub r_t: f64,
    pub v_inf: f64,
    pub alpha: f64,
    pub omega_r: f64,
    /// synchronous speed in rad/s; recorded as metadata, never used in the
    /// per-unit dynamics
    pub omega_base: f64,
}

impl Default for MachineParams {
    fn default() -> Self {
        MachineParams {
            l_d: 1.70,
            l_f: 1.65,
            l_dd: 1.605,
            l_q: 1.64,
            l_qq: 1.526,
            km_f: 1.55,
            km_d: 1.55,
            m_r: 1.55,
            km_q: 1.49,
            r: 0.001096,
            r_f: 0.000742,
            r_dd: 0.0131,
            r_qq: 0.0540,
            h: 2.37,
            r_e: 0.02,
            l_e: 0.4,
            d: 0.0,
            k_t: 1.0,
            k_g: 1.0,
            tau_t: 0.5,
            tau_g: 0.2,
            r_t: 20.0,
            v_inf: 1.0,
            alpha: 3.5598 * core::f64::consts::PI / 180.0,
            omega_r: 1.0,
            omega_base: 376.99,
        }
    }
}

impl MachineParams {
    pub fn validate(&self) -> Result<()> {
        let pos = [
            self.l_d, self.l_f, self.l_dd, self.l_q, self.l_qq, self.km_f, self.km_d,
            self.m_r, self.km_q, self.r, self.r_f, self.r_dd, self.r_qq, self.h,
            self.tau_t, self.tau_g, self.r_t, self.v_inf, self.omega_r,
        ];
        if pos.iter().any(|&v| !(v > 0.0)) {
            return Err(NumError::InvalidInput(
                "inductances, resistances, time constants, H, V_inf, omega_R must be positive",
            ));
        }
        if self.d < 0.0 {
            return Err(NumError::InvalidInput("damping D must be non-negative"));
        }
        if !self.alpha.is_finite() || !self.r_e.is_finite() || !self.l_e.is_finite() {
            return Err(NumError::InvalidInput("non-finite parameter"));
        }
        Ok(())
    }
}

/// Actuator limits shared by both models. The excitation EMF is hard-limited
/// to ±5 p.u.; the gate opening is clamped as a state limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits {
    pub efd_max: f64,
    pub gv_min: f64,
    pub gv_max: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { efd_max: 5.0, gv_min: 0.0, gv_max: 1.2 }
    }
}

impl Limits {
    /// Gate limit widened so the increased-loading equilibrium (G_V0 ≈ 1.349)
    /// is feasible; used for the high-fidelity plant runs.
    pub fn plant_default() -> Self {
        Limits { efd_max: 5.0, gv_min: 0.0, gv_max: 1.6 }
    }

    pub fn clamp_efd(&self, efd: f64) -> f64 {
        efd.max(-self.efd_max).min(self.efd_max)
    }

    pub fn clamp_gv(&self, gv: f64) -> f64 {
        gv.max(self.gv_min).min(self.gv_max)
    }
}
