//! Reference computations shared by the integration tests. Nothing here calls
//! into the library's numerics, so agreement is a genuine cross-check.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Tanh-sinh quadrature on `[0, 1]`. The integrand receives both `t` and
/// `1 - t`, each computed without cancellation, so endpoint singularities of
/// either side can be written in terms of the small quantity.
pub fn tanh_sinh_unit<F: Fn(f64, f64) -> f64>(f: F) -> f64 {
    let h = 1.0 / 128.0;
    let mut sum = 0.0;
    let mut k: i64 = -(6.5 / h) as i64;
    while (k as f64) * h <= 6.5 {
        let tau = k as f64 * h;
        let e = (PI * tau.sinh()).exp();
        let (t, omt) = if e.is_infinite() { (1.0, 0.0) } else { (e / (1.0 + e), 1.0 / (1.0 + e)) };
        let w = t * omt * PI * tau.cosh();
        if t > 0.0 && omt > 0.0 && w > 0.0 {
            let v = f(t, omt);
            if v.is_finite() {
                sum += w * v;
            }
        }
        k += 1;
    }
    sum * h
}

/// `B(x, y)` as a plain integral of `t^{x-1} (1-t)^{y-1}`.
pub fn beta_integral(x: f64, y: f64) -> f64 {
    tanh_sinh_unit(|t, omt| ((x - 1.0) * t.ln() + (y - 1.0) * omt.ln()).exp())
}

/// `d/dx B(x, y) = int t^{x-1} ln t (1-t)^{y-1} dt`.
pub fn dbeta_dx_integral(x: f64, y: f64) -> f64 {
    tanh_sinh_unit(|t, omt| {
        let ln_t = if t > 0.5 { (-omt).ln_1p() } else { t.ln() };
        ((x - 1.0) * ln_t + (y - 1.0) * omt.ln()).exp() * ln_t
    })
}

/// `int_0^1 t^{x-1} (1 - t^y) / (1 - t)^{3/2} dt`.
pub fn h_integral(x: f64, y: f64) -> f64 {
    tanh_sinh_unit(|t, omt| {
        let ln_t = if t > 0.5 { (-omt).ln_1p() } else { t.ln() };
        let one_minus = -(y * ln_t).exp_m1();
        ((x - 1.0) * ln_t).exp() * one_minus / (omt * omt.sqrt())
    })
}

/// `int_0^1 [-(5-p)(1-s^P) + (5-q)(1-s^Q)] / (s^P - s^Q)^{3/2} ds`.
pub fn two_power_integral(p: f64, q: f64) -> f64 {
    let (kp, kq) = ((p - 1.0) / 2.0, (q - 1.0) / 2.0);
    tanh_sinh_unit(|s, oms| {
        let ln_s = if s > 0.5 { (-oms).ln_1p() } else { s.ln() };
        let omp = -(kp * ln_s).exp_m1();
        let omq = -(kq * ln_s).exp_m1();
        let num = -(5.0 - p) * omp + (5.0 - q) * omq;
        let den = if s > 0.5 { omq - omp } else { (kp * ln_s).exp() - (kq * ln_s).exp() };
        num / (den * den.sqrt())
    })
}

/// Normalized coefficients `(c_p, c_q, c_r) = (a1, -gamma, a3)`.
#[derive(Clone, Copy, Debug)]
pub struct Model {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub a1: f64,
    pub a3: f64,
}

impl Model {
    pub fn new(p: f64, q: f64, r: f64, a1: f64, a3: f64) -> Self {
        Model { p, q, r, a1, a3 }
    }

    fn terms(&self, gamma: f64) -> [(f64, f64); 3] {
        [(self.a1, self.p), (-gamma, self.q), (self.a3, self.r)]
    }

    /// `U(s)`, `U'(s)` and `U''(s)` for `U = omega s - sum 2 c_l s^{(l+1)/2} / (l+1)`.
    pub fn u_derivs(&self, omega: f64, gamma: f64, s: f64) -> (f64, f64, f64) {
        let mut u = omega * s;
        let mut du = omega;
        let mut ddu = 0.0;
        for (c, l) in self.terms(gamma) {
            let k = (l - 1.0) / 2.0;
            u -= 2.0 * c * s.powf(k + 1.0) / (l + 1.0);
            du -= c * s.powf(k);
            ddu -= c * k * s.powf(k - 1.0);
        }
        (u, du, ddu)
    }

    /// `dF1/ds` with `F1(s) = sum 2 c_l s^{(l-1)/2} / (l+1)`.
    pub fn f1_deriv(&self, gamma: f64, s: f64) -> f64 {
        self.terms(gamma)
            .iter()
            .map(|&(c, l)| {
                let k = (l - 1.0) / 2.0;
                2.0 * c * k * s.powf(k - 1.0) / (l + 1.0)
            })
            .sum()
    }

    /// The point of the nonexistence curve with double root at `a`: the
    /// linear system `U(a) = 0`, `U'(a) = 0` in the unknowns `(omega, gamma)`.
    pub fn curve_point(&self, a: f64) -> (f64, f64) {
        let (kp, kq, kr) = ((self.p - 1.0) / 2.0, (self.q - 1.0) / 2.0, (self.r - 1.0) / 2.0);
        // U(a)/a = omega - 2 a1 a^P/(p+1) + 2 gamma a^Q/(q+1) - 2 a3 a^R/(r+1)
        // U'(a)  = omega - a1 a^P + gamma a^Q - a3 a^R
        let (m11, m12, b1) = (
            1.0,
            2.0 * a.powf(kq) / (self.q + 1.0),
            2.0 * self.a1 * a.powf(kp) / (self.p + 1.0) + 2.0 * self.a3 * a.powf(kr) / (self.r + 1.0),
        );
        let (m21, m22, b2) = (1.0, a.powf(kq), self.a1 * a.powf(kp) + self.a3 * a.powf(kr));
        let det = m11 * m22 - m12 * m21;
        ((b1 * m22 - m12 * b2) / det, (m11 * b2 - m21 * b1) / det)
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Coarse scan plus bisection for the first positive zero of `omega - F1`.
pub fn first_root(m: &Model, omega: f64, gamma: f64) -> Option<f64> {
    let g = |s: f64| m.u_derivs(omega, gamma, s).0 / s;
    let mut lo = 1e-12;
    if g(lo) <= 0.0 {
        return None;
    }
    let mut hi = lo;
    while hi < 1e8 {
        hi *= 1.0005;
        if g(hi) <= 0.0 {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if g(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        lo = hi;
    }
    None
}
