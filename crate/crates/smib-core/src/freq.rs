use alloc::vec;
use alloc::vec::Vec;
use libm::{atan2, log10, pow, sqrt};

use crate::eig::Cpx;
use crate::equilibrium::LinearModel;
use crate::mat::Matrix;
use crate::{NumError, Result};

/// Default analysis band and density: 2000 log-spaced points on [1e-3, 1e3]
/// rad/s. Margins reported as ∞ are ∞ relative to this band.
pub const GRID_MIN: f64 = 1e-3;
pub const GRID_MAX: f64 = 1e3;
pub const GRID_POINTS: usize = 2000;

pub fn default_grid() -> Vec<f64> {
    log_grid(GRID_MIN, GRID_MAX, GRID_POINTS)
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (llo, lhi) = (log10(lo), log10(hi));
    (0..n)
        .map(|i| pow(10.0, llo + (lhi - llo) * i as f64 / (n - 1) as f64))
        .collect()
}

/// Dense complex linear solve A·X = B with partial pivoting.
fn csolve(a: &mut [Cpx], n: usize, b: &mut [Cpx], m: usize) -> Result<()> {
    for k in 0..n {
        let mut p = k;
        let mut mx = a[k * n + k].abs();
        for i in k + 1..n {
            if a[i * n + k].abs() > mx {
                mx = a[i * n + k].abs();
                p = i;
            }
        }
        if mx < 1e-300 {
            return Err(NumError::SingularMatrix);
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            for j in 0..m {
                b.swap(k * m + j, p * m + j);
            }
        }
        let piv = a[k * n + k];
        for i in k + 1..n {
            let f = a[i * n + k] / piv;
            if f.abs() == 0.0 {
                continue;
            }
            for j in k..n {
                a[i * n + j] = a[i * n + j] - f * a[k * n + j];
            }
            for j in 0..m {
                b[i * m + j] = b[i * m + j] - f * b[k * m + j];
            }
        }
    }
    for i in (0..n).rev() {
        for j in 0..m {
            let mut s = b[i * m + j];
            for k2 in i + 1..n {
                s = s - a[i * n + k2] * b[k2 * m + j];
            }
            b[i * m + j] = s / a[i * n + i];
        }
    }
    Ok(())
}

/// C(jωI − A)⁻¹B + D as a dense complex matrix (row-major, c.rows × b.cols).
pub fn tf_eval(a: &Matrix, b: &Matrix, c: &Matrix, d: Option<&Matrix>, w: f64) -> Result<Vec<Cpx>> {
    let n = a.rows;
    let m = b.cols;
    let p = c.rows;
    let mut am: Vec<Cpx> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let mut z = Cpx::new(-a[(i, j)], 0.0);
            if i == j {
                z.im += w;
            }
            z
        })
        .collect();
    let mut bm: Vec<Cpx> = (0..n * m)
        .map(|idx| Cpx::real(b[(idx / m, idx % m)]))
        .collect();
    csolve(&mut am, n, &mut bm, m)?;
    let mut out = vec![Cpx::ZERO; p * m];
    for i in 0..p {
        for j in 0..m {
            let mut s = Cpx::ZERO;
            for k in 0..n {
                s = s + Cpx::real(c[(i, k)]) * bm[k * m + j];
            }
            if let Some(dm) = d {
                s = s + Cpx::real(dm[(i, j)]);
            }
            out[i * m + j] = s;
        }
    }
    Ok(out)
}

/// Plant transfer matrix N_R(jω) = C(jωI − A)⁻¹B.
pub fn plant_tf_eval(m: &LinearModel, w: f64) -> Result<[Cpx; 4]> {
    let v = tf_eval(&m.a, &m.b, &m.c, None, w)?;
    Ok([v[0], v[1], v[2], v[3]])
}

/// Controller transfer matrix K_C(jω) = K(jωI − A + BK + HC)⁻¹H.
pub fn controller_tf_eval(m: &LinearModel, k: &Matrix, h: &Matrix, w: f64) -> Result<[Cpx; 4]> {
    let acl = m.a.sub(&m.b.matmul(k)?)?.sub(&h.matmul(&m.c)?)?;
    let v = tf_eval(&acl, h, k, None, w)?;
    Ok([v[0], v[1], v[2], v[3]])
}

/// Loop transfer matrix H_LTF(jω) = K_C(jω)·N_R(jω).
pub fn loop_tf_eval(m: &LinearModel, k: &Matrix, h: &Matrix, w: f64) -> Result<[Cpx; 4]> {
    let nr = plant_tf_eval(m, w)?;
    let kc = controller_tf_eval(m, k, h, w)?;
    Ok([
        kc[0] * nr[0] + kc[1] * nr[2],
        kc[0] * nr[1] + kc[1] * nr[3],
        kc[2] * nr[0] + kc[3] * nr[2],
        kc[2] * nr[1] + kc[3] * nr[3],
    ])
}

/// 10-state realization of the open loop (plant in series with controller):
/// returns (A_L, B_L, C_L) with u → N_R → K_C → y.
pub fn loop_state_space(m: &LinearModel, k: &Matrix, h: &Matrix) -> Result<(Matrix, Matrix, Matrix)> {
    let n = m.a.rows;
    let acl = m.a.sub(&m.b.matmul(k)?)?.sub(&h.matmul(&m.c)?)?;
    let hc = h.matmul(&m.c)?;
    let mut al = Matrix::zeros(2 * n, 2 * n);
    al.set_block(0, 0, &m.a);
    al.set_block(n, 0, &hc);
    al.set_block(n, n, &acl);
    let mut bl = Matrix::zeros(2 * n, m.b.cols);
    bl.set_block(0, 0, &m.b);
    let mut cl = Matrix::zeros(k.rows, 2 * n);
    cl.set_block(0, n, k);
    Ok((al, bl, cl))
}

/// Close a single diagonal channel of the loop realization with unity
/// negative feedback (the other channel left open).
pub fn close_channel(al: &Matrix, bl: &Matrix, cl: &Matrix, ch: usize) -> Result<Matrix> {
    let n = al.rows;
    let mut out = al.clone();
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] -= bl[(i, ch)] * cl[(ch, j)];
        }
    }
    let _ = n;
    Ok(out)
}

/// A gain or phase margin: finite value or unbounded over the search band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MarginValue {
    Finite(f64),
    Unbounded,
}

impl MarginValue {
    pub fn finite(&self) -> Option<f64> {
        match self {
            MarginValue::Finite(v) => Some(*v),
            MarginValue::Unbounded => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margins {
    pub gm_db: MarginValue,
    pub pm_deg: MarginValue,
    pub w_180: Option<f64>,
    pub w_crossover: Option<f64>,
}

fn arg(z: Cpx) -> f64 {
    atan2(z.im, z.re)
}

/// Gain/phase margins of a SISO channel over a log grid: all −180°(+k·360°)
/// phase crossings contribute candidate gain margins (smallest wins); all
/// 0 dB crossings contribute candidate phase margins (smallest |PM| wins).
/// Crossings are refined by log-bisection.
pub fn margins<L>(lfun: &L, grid: &[f64]) -> Result<Margins>
where
    L: Fn(f64) -> Result<Cpx>,
{
    let n = grid.len();
    let mut mag = vec![0.0; n];
    let mut ph = vec![0.0; n];
    let mut prev = 0.0;
    for (i, &w) in grid.iter().enumerate() {
        let z = lfun(w)?;
        mag[i] = z.abs();
        let mut a = arg(z);
        if i > 0 {
            // unwrap
            while a - prev > core::f64::consts::PI {
                a -= 2.0 * core::f64::consts::PI;
            }
            while a - prev < -core::f64::consts::PI {
                a += 2.0 * core::f64::consts::PI;
            }
        }
        ph[i] = a;
        prev = a;
    }
    let mut gm: Option<(f64, f64)> = None; // (gm_db, w)
    let mut pm: Option<(f64, f64)> = None; // (pm_deg, w)
    let pi = core::f64::consts::PI;
    for i in 0..n - 1 {
        let (p1, p2) = (ph[i], ph[i + 1]);
        for kk in -6i32..=6 {
            let tgt = (2 * kk + 1) as f64 * pi;
            if (p1 - tgt) * (p2 - tgt) < 0.0 {
                let (mut lo, mut hi) = (grid[i], grid[i + 1]);
                for _ in 0..80 {
                    let mid = sqrt(lo * hi);
                    let zm = lfun(mid)?;
                    let mut pv = arg(zm);
                    // align to the local branch
                    let center = 0.5 * (p1 + p2);
                    let kshift = libm::round((center - pv) / (2.0 * pi));
                    pv += 2.0 * pi * kshift;
                    if (p1 - tgt) * (pv - tgt) < 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                let w = sqrt(lo * hi);
                let g = -20.0 * log10(lfun(w)?.abs());
                if gm.map_or(true, |(best, _)| g < best) {
                    gm = Some((g, w));
                }
            }
        }
        if (mag[i] - 1.0) * (mag[i + 1] - 1.0) < 0.0 {
            let (mut lo, mut hi) = (grid[i], grid[i + 1]);
            for _ in 0..80 {
                let mid = sqrt(lo * hi);
                if (mag[i] - 1.0) * (lfun(mid)?.abs() - 1.0) < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let wc = sqrt(lo * hi);
            let mut p = 180.0 + arg(lfun(wc)?) * 180.0 / pi;
            while p > 180.0 {
                p -= 360.0;
            }
            while p <= -180.0 {
                p += 360.0;
            }
            if pm.map_or(true, |(best, _)| p.abs() < best.abs()) {
                pm = Some((p, wc));
            }
        }
    }
    Ok(Margins {
        gm_db: gm.map_or(MarginValue::Unbounded, |(g, _)| MarginValue::Finite(g)),
        pm_deg: pm.map_or(MarginValue::Unbounded, |(p, _)| MarginValue::Finite(p)),
        w_180: gm.map(|(_, w)| w),
        w_crossover: pm.map(|(_, w)| w),
    })
}

/// Winding number of the Nyquist locus of a SISO channel around −1+j0
/// (counterclockwise positive), closed over ω ∈ [−Ω, Ω] via conjugate
/// symmetry.
pub fn nyquist_encirclements<L>(lfun: &L, grid: &[f64]) -> Result<i32>
where
    L: Fn(f64) -> Result<Cpx>,
{
    // positive-frequency samples; negative frequencies are conjugates
    let pos: Vec<Cpx> = grid.iter().map(|&w| lfun(w)).collect::<Result<_>>()?;
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    let minus_one = Cpx::new(-1.0, 0.0);
    let acc = |z: Cpx, total: &mut f64, prev: &mut Option<f64>| -> Result<()> {
        let d = z - minus_one;
        if d.abs() < 1e-9 {
            return Err(NumError::InvalidInput("Nyquist locus passes through -1"));
        }
        let a = arg(d);
        if let Some(p) = *prev {
            let mut da = a - p;
            while da > core::f64::consts::PI {
                da -= 2.0 * core::f64::consts::PI;
            }
            while da < -core::f64::consts::PI {
                da += 2.0 * core::f64::consts::PI;
            }
            *total += da;
        }
        *prev = Some(a);
        Ok(())
    };
    // sweep ω: −Ω → 0⁻ → 0⁺ → Ω
    for z in pos.iter().rev() {
        acc(z.conj(), &mut total, &mut prev)?;
    }
    for z in pos.iter() {
        acc(*z, &mut total, &mut prev)?;
    }
    // strictly proper loops vanish at ±Ω, so the closure arc contributes ~0
    let winding = total / (2.0 * core::f64::consts::PI);
    Ok(libm::round(winding) as i32)
}

/// One Bode/Nyquist sample of a 2×2 response for export.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreqSample {
    pub w: f64,
    pub h: [Cpx; 4],
}

pub fn mag_db(z: Cpx) -> f64 {
    20.0 * log10(z.abs().max(1e-300))
}

pub fn phase_deg(z: Cpx) -> f64 {
    arg(z) * 180.0 / core::f64::consts::PI
}

/// Sup-norm distance between two responses over a grid (used for the LTR
/// recovery-monotonicity property).
pub fn sup_distance(a: &[FreqSample], b: &[FreqSample]) -> f64 {
    let mut worst = 0.0;
    for (sa, sb) in a.iter().zip(b.iter()) {
        for i in 0..4 {
            let d = (sa.h[i] - sb.h[i]).abs();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}
