use alloc::vec::Vec;

use crate::{NumError, Result};

/// Fixed-step trajectory record.
#[derive(Debug, Clone)]
pub struct Trace {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> &[f64] {
        self.states.last().expect("empty trace")
    }
}

/// One RK4 step of ẋ = f(t, x).
pub fn rk4_step<F>(f: &F, t: f64, x: &[f64], dt: f64) -> Vec<f64>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    let n = x.len();
    let k1 = f(t, x);
    let mut tmp: Vec<f64> = (0..n).map(|i| x[i] + 0.5 * dt * k1[i]).collect();
    let k2 = f(t + 0.5 * dt, &tmp);
    for i in 0..n {
        tmp[i] = x[i] + 0.5 * dt * k2[i];
    }
    let k3 = f(t + 0.5 * dt, &tmp);
    for i in 0..n {
        tmp[i] = x[i] + dt * k3[i];
    }
    let k4 = f(t + dt, &tmp);
    (0..n)
        .map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Split [t0, t1] at the event times so every event lands exactly on a sample,
/// then integrate each segment with steps of at most `dt`.
pub fn integrate<F>(
    f: &F,
    x0: &[f64],
    t_span: (f64, f64),
    dt: f64,
    events: &[f64],
) -> Result<Trace>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    let (t0, t1) = t_span;
    if !(t1 > t0) || !(dt > 0.0) {
        return Err(NumError::InvalidInput("integrate requires t1 > t0 and dt > 0"));
    }
    let mut cuts: Vec<f64> = events
        .iter()
        .copied()
        .filter(|&e| e > t0 && e < t1)
        .collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.push(t1);

    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut t = t0;
    let mut x = x0.to_vec();
    times.push(t);
    states.push(x.clone());
    for &seg_end in &cuts {
        let span = seg_end - t;
        if span <= 0.0 {
            continue;
        }
        let nsteps = libm::ceil(span / dt - 1e-9) as usize;
        let nsteps = nsteps.max(1);
        let h = span / nsteps as f64;
        for k in 0..nsteps {
            x = rk4_step(f, t, &x, h);
            t = if k + 1 == nsteps { seg_end } else { t + h };
            if x.iter().any(|v| !v.is_finite()) {
                return Err(NumError::NonFinite { t });
            }
            times.push(t);
            states.push(x.clone());
        }
    }
    Ok(Trace { times, states })
}
