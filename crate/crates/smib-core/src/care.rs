use crate::eig::max_real_part;
use crate::mat::{lyapunov_solve, Matrix};
use crate::{NumError, Result};

const CARE_TOL: f64 = 1e-11;
const CARE_MAX_ITER: usize = 200;

/// Riccati residual AᵀP + PA − PBR⁻¹BᵀP + Q in max-abs norm.
pub fn care_residual(a: &Matrix, b: &Matrix, q: &Matrix, r: &Matrix, p: &Matrix) -> Result<f64> {
    let at_p = a.transpose().matmul(p)?;
    let pa = p.matmul(a)?;
    let rinv_bt = r.solve(&b.transpose())?;
    let pbrb = p.matmul(b)?.matmul(&rinv_bt)?.matmul(p)?;
    Ok(at_p.add(&pa)?.sub(&pbrb)?.add(q)?.max_abs())
}

/// Shift pushing the whole spectrum of A + βI into the open right half-plane.
fn spectral_shift(a: &Matrix) -> Result<f64> {
    let eigs = crate::eig::eigenvalues(a)?;
    let mut m = 0.0_f64;
    for z in &eigs {
        m = m.max(z.re.abs());
    }
    Ok(m + 0.5)
}

/// Bass-style stabilizing initial gain: solve (A + βI)X + X(A + βI)ᵀ = 2BBᵀ
/// with β beyond the spectral abscissa, then K₀ = Bᵀ X⁻¹ renders A − BK₀ Hurwitz.
fn stabilizing_gain(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let n = a.rows;
    let alpha = max_real_part(a)?;
    if alpha < 0.0 {
        // already stable: zero gain works
        return Ok(Matrix::zeros(b.cols, n));
    }
    let beta = spectral_shift(a)?;
    // shifted Lyapunov in the form Aₛᵀ X + X Aₛ + Q = 0 with Aₛ = −(A + βI)ᵀ
    let shifted = a.add(&Matrix::scaled_identity(n, beta))?;
    let a_s = shifted.transpose().scale(-1.0);
    let bbt = b.matmul(&b.transpose())?.scale(2.0);
    let x = lyapunov_solve(&a_s, &bbt)?;
    let k0 = b.transpose().matmul(&x.inverse()?)?;
    let acl = a.sub(&b.matmul(&k0)?)?;
    if max_real_part(&acl)? >= 0.0 {
        return Err(NumError::InvalidInput("stabilizing initialization failed: (A,B) not stabilizable"));
    }
    Ok(k0)
}

/// Kleinman–Newton iteration for AᵀP + PA − PBR⁻¹BᵀP + Q = 0.
pub fn solve_care(a: &Matrix, b: &Matrix, q: &Matrix, r: &Matrix) -> Result<Matrix> {
    if !a.is_square() || a.rows != b.rows || !q.is_square() || q.rows != a.rows
        || !r.is_square() || r.rows != b.cols
    {
        return Err(NumError::DimensionMismatch { expected: (a.rows, a.rows), got: (q.rows, q.cols) });
    }
    let mut k = stabilizing_gain(a, b)?;
    let mut p = Matrix::zeros(a.rows, a.rows);
    let mut last_res = f64::INFINITY;
    for _ in 0..CARE_MAX_ITER {
        // Lyapunov: (A−BK)ᵀ P + P (A−BK) + (Q + KᵀRK) = 0
        let acl = a.sub(&b.matmul(&k)?)?;
        let qk = q.add(&k.transpose().matmul(r)?.matmul(&k)?)?;
        p = lyapunov_solve(&acl, &qk)?;
        k = r.solve(&b.transpose().matmul(&p)?)?;
        let res = care_residual(a, b, q, r, &p)?;
        if res <= CARE_TOL * (1.0 + q.max_abs() + p.max_abs()) {
            return Ok(p);
        }
        if !res.is_finite() {
            return Err(NumError::NoConvergence { iterations: CARE_MAX_ITER, residual: res });
        }
        last_res = res;
    }
    let res = last_res;
    if res <= 1e-8 {
        Ok(p)
    } else {
        Err(NumError::NoConvergence { iterations: CARE_MAX_ITER, residual: res })
    }
}

/// LQR state-feedback gain K = R⁻¹BᵀP.
pub fn lqr_gain(a: &Matrix, b: &Matrix, q: &Matrix, r: &Matrix) -> Result<Matrix> {
    let p = solve_care(a, b, q, r)?;
    r.solve(&b.transpose().matmul(&p)?)
}

/// Filter Riccati residual AΨ + ΨAᵀ − ΨCᵀV2⁻¹CΨ + V1 in max-abs norm.
pub fn filter_residual(a: &Matrix, c: &Matrix, v1: &Matrix, v2: &Matrix, psi: &Matrix) -> Result<f64> {
    let a_psi = a.matmul(psi)?;
    let psi_at = psi.matmul(&a.transpose())?;
    let v2inv_c = v2.solve(c)?;
    let quad = psi.matmul(&c.transpose())?.matmul(&v2inv_c)?.matmul(psi)?;
    Ok(a_psi.add(&psi_at)?.sub(&quad)?.add(v1)?.max_abs())
}

/// Stabilizing output-injection initialization for the filter iteration:
/// solve (A + βI)ᵀY + Y(A + βI) = 2CᵀC, then H₀ = Y⁻¹Cᵀ renders A − H₀C Hurwitz.
fn stabilizing_injection(a: &Matrix, c: &Matrix) -> Result<Matrix> {
    let n = a.rows;
    let alpha = max_real_part(a)?;
    if alpha < 0.0 {
        return Ok(Matrix::zeros(n, c.rows));
    }
    let beta = spectral_shift(a)?;
    let shifted = a.add(&Matrix::scaled_identity(n, beta))?;
    let a_s = shifted.scale(-1.0);
    let ctc = c.transpose().matmul(c)?.scale(2.0);
    let y = lyapunov_solve(&a_s, &ctc)?;
    let h0 = y.solve(&c.transpose())?;
    let acl = a.sub(&h0.matmul(c)?)?;
    if max_real_part(&acl)? >= 0.0 {
        return Err(NumError::InvalidInput("injection initialization failed: (C,A) not detectable"));
    }
    Ok(h0)
}

/// Kleinman–Newton iteration on the filter Riccati equation
/// AΨ + ΨAᵀ − ΨCᵀV2⁻¹CΨ + V1 = 0, returning (H, Ψ) with H = ΨCᵀV2⁻¹.
pub fn kalman_gain(a: &Matrix, c: &Matrix, v1: &Matrix, v2: &Matrix) -> Result<(Matrix, Matrix)> {
    if !a.is_square() || c.cols != a.rows || v1.rows != a.rows || v2.rows != c.rows {
        return Err(NumError::DimensionMismatch { expected: (a.rows, a.rows), got: (v1.rows, v1.cols) });
    }
    let mut h = stabilizing_injection(a, c)?;
    let mut psi = Matrix::zeros(a.rows, a.rows);
    let mut last_res = f64::INFINITY;
    for _ in 0..CARE_MAX_ITER {
        // Lyapunov: (A−HC)Ψ + Ψ(A−HC)ᵀ + (V1 + HV2Hᵀ) = 0
        let acl_t = a.sub(&h.matmul(c)?)?.transpose();
        let vh = v1.add(&h.matmul(v2)?.matmul(&h.transpose())?)?;
        psi = lyapunov_solve(&acl_t, &vh)?;
        // H = ΨCᵀV2⁻¹ via V2ᵀHᵀ = CΨᵀ
        h = v2.transpose().solve(&c.matmul(&psi.transpose())?)?.transpose();
        let res = filter_residual(a, c, v1, v2, &psi)?;
        if res <= CARE_TOL * (1.0 + v1.max_abs() + psi.max_abs()) {
            return Ok((h, psi));
        }
        if !res.is_finite() {
            return Err(NumError::NoConvergence { iterations: CARE_MAX_ITER, residual: res });
        }
        last_res = res;
    }
    if last_res <= 1e-8 {
        Ok((h, psi))
    } else {
        Err(NumError::NoConvergence { iterations: CARE_MAX_ITER, residual: last_res })
    }
}
