use alloc::vec;
use alloc::vec::Vec;

use crate::mat::Matrix;
use crate::{NumError, Result};

/// Minimal complex scalar for the eigenvalue solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cpx {
    pub re: f64,
    pub im: f64,
}

impl Cpx {
    pub const ZERO: Cpx = Cpx { re: 0.0, im: 0.0 };
    pub const ONE: Cpx = Cpx { re: 1.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        Cpx { re, im }
    }

    pub fn real(re: f64) -> Self {
        Cpx { re, im: 0.0 }
    }

    pub fn conj(self) -> Self {
        Cpx { re: self.re, im: -self.im }
    }

    pub fn abs(self) -> f64 {
        libm::hypot(self.re, self.im)
    }

    pub fn abs_sq(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn sqrt(self) -> Self {
        let r = self.abs();
        let re = libm::sqrt(0.5 * (r + self.re));
        let im_mag = libm::sqrt(0.5 * (r - self.re).max(0.0));
        Cpx { re, im: if self.im >= 0.0 { im_mag } else { -im_mag } }
    }

    pub fn scale(self, s: f64) -> Self {
        Cpx { re: self.re * s, im: self.im * s }
    }
}

impl core::ops::Add for Cpx {
    type Output = Cpx;
    fn add(self, o: Cpx) -> Cpx {
        Cpx::new(self.re + o.re, self.im + o.im)
    }
}

impl core::ops::Sub for Cpx {
    type Output = Cpx;
    fn sub(self, o: Cpx) -> Cpx {
        Cpx::new(self.re - o.re, self.im - o.im)
    }
}

impl core::ops::Mul for Cpx {
    type Output = Cpx;
    fn mul(self, o: Cpx) -> Cpx {
        Cpx::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl core::ops::Div for Cpx {
    type Output = Cpx;
    fn div(self, o: Cpx) -> Cpx {
        let d = o.abs_sq();
        Cpx::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
}

impl core::ops::Neg for Cpx {
    type Output = Cpx;
    fn neg(self) -> Cpx {
        Cpx::new(-self.re, -self.im)
    }
}

struct CMat {
    n: usize,
    d: Vec<Cpx>,
}

impl CMat {
    fn at(&self, i: usize, j: usize) -> Cpx {
        self.d[i * self.n + j]
    }
    fn set(&mut self, i: usize, j: usize, v: Cpx) {
        self.d[i * self.n + j] = v;
    }
}

/// Reduce to upper Hessenberg form in place via stabilized elimination.
fn hessenberg(h: &mut CMat) {
    let n = h.n;
    for k in 0..n.saturating_sub(2) {
        // pivot: largest |h[i,k]| for i > k
        let mut p = k + 1;
        let mut max = h.at(k + 1, k).abs();
        for i in k + 2..n {
            if h.at(i, k).abs() > max {
                max = h.at(i, k).abs();
                p = i;
            }
        }
        if max == 0.0 {
            continue;
        }
        if p != k + 1 {
            for j in 0..n {
                let a = h.at(k + 1, j);
                let b = h.at(p, j);
                h.set(k + 1, j, b);
                h.set(p, j, a);
            }
            for i in 0..n {
                let a = h.at(i, k + 1);
                let b = h.at(i, p);
                h.set(i, k + 1, b);
                h.set(i, p, a);
            }
        }
        let piv = h.at(k + 1, k);
        for i in k + 2..n {
            let m = h.at(i, k) / piv;
            if m.abs() == 0.0 {
                continue;
            }
            // row_i -= m * row_{k+1}
            for j in k..n {
                let v = h.at(i, j) - m * h.at(k + 1, j);
                h.set(i, j, v);
            }
            // col_{k+1} += m * col_i  (similarity transform)
            for r in 0..n {
                let v = h.at(r, k + 1) + m * h.at(r, i);
                h.set(r, k + 1, v);
            }
        }
        for i in k + 2..n {
            h.set(i, k, Cpx::ZERO);
        }
    }
}

fn wilkinson_shift(h: &CMat, m: usize) -> Cpx {
    // trailing 2x2 of active block ending at m
    let a = h.at(m - 1, m - 1);
    let b = h.at(m - 1, m);
    let c = h.at(m, m - 1);
    let d = h.at(m, m);
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - det.scale(4.0)).sqrt();
    let l1 = (tr + disc).scale(0.5);
    let l2 = (tr - disc).scale(0.5);
    if (l1 - d).abs() < (l2 - d).abs() {
        l1
    } else {
        l2
    }
}

/// Full spectrum of a square real matrix, sorted by real part then imaginary part.
pub fn eigenvalues(m: &Matrix) -> Result<Vec<Cpx>> {
    if !m.is_square() {
        return Err(NumError::InvalidInput("eigenvalues requires square matrix"));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = CMat {
        n,
        d: m.data().iter().map(|&x| Cpx::real(x)).collect(),
    };
    hessenberg(&mut h);

    let mut eigs = vec![Cpx::ZERO; n];
    let mut hi = n - 1; // active block is rows/cols 0..=hi
    let mut iters_since_deflation = 0usize;
    let mut total = 0usize;
    let max_total = 200 * n;
    loop {
        // deflate any negligible subdiagonals at the bottom of the block
        while hi > 0 {
            let sub = h.at(hi, hi - 1).abs();
            let scale = h.at(hi - 1, hi - 1).abs() + h.at(hi, hi).abs();
            if sub <= 1e-14 * scale.max(1e-300) {
                eigs[hi] = h.at(hi, hi);
                hi -= 1;
                iters_since_deflation = 0;
            } else {
                break;
            }
        }
        if hi == 0 {
            eigs[0] = h.at(0, 0);
            break;
        }
        // find top of the active block
        let mut lo = hi;
        while lo > 0 {
            let sub = h.at(lo, lo - 1).abs();
            let scale = h.at(lo - 1, lo - 1).abs() + h.at(lo, lo).abs();
            if sub <= 1e-14 * scale.max(1e-300) {
                break;
            }
            lo -= 1;
        }
        total += 1;
        if total > max_total {
            return Err(NumError::NoConvergence { iterations: total, residual: h.at(hi, hi - 1).abs() });
        }
        iters_since_deflation += 1;
        let mut mu = wilkinson_shift(&h, hi);
        if iters_since_deflation % 12 == 0 {
            // exceptional shift to break rare cycles
            mu = Cpx::real(h.at(hi, hi - 1).abs() + h.at(hi - 1, hi - 2.min(hi - 1)).abs());
        }
        // shifted QR sweep on block [lo..=hi] via Givens rotations
        let mut cs = vec![(Cpx::ONE, Cpx::ZERO); hi];
        for i in lo..=hi {
            let v = h.at(i, i) - mu;
            h.set(i, i, v);
        }
        for k in lo..hi {
            let a = h.at(k, k);
            let b = h.at(k + 1, k);
            let r = libm::hypot(a.abs(), b.abs());
            if r == 0.0 {
                cs[k] = (Cpx::ONE, Cpx::ZERO);
                continue;
            }
            let c = a.conj().scale(1.0 / r);
            let s = b.conj().scale(1.0 / r);
            cs[k] = (c, s);
            for j in k..=hi {
                let x = h.at(k, j);
                let y = h.at(k + 1, j);
                h.set(k, j, c * x + s * y);
                h.set(k + 1, j, -s.conj() * x + c.conj() * y);
            }
        }
        for k in lo..hi {
            let (c, s) = cs[k];
            let upper = if k + 2 <= hi { k + 2 } else { hi };
            for i in lo..=upper {
                let x = h.at(i, k);
                let y = h.at(i, k + 1);
                h.set(i, k, x * c.conj() + y * s.conj());
                h.set(i, k + 1, -(x * s) + y * c);
            }
        }
        for i in lo..=hi {
            let v = h.at(i, i) + mu;
            h.set(i, i, v);
        }
    }
    eigs.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(core::cmp::Ordering::Equal))
    });
    Ok(eigs)
}

/// Largest eigenvalue real part; used for Hurwitz checks.
pub fn max_real_part(m: &Matrix) -> Result<f64> {
    let e = eigenvalues(m)?;
    Ok(e.iter().fold(f64::NEG_INFINITY, |mx, z| mx.max(z.re)))
}
