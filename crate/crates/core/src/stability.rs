//! The stability functional `J(omega, gamma) = dQ/domega` by three independent
//! routes, and its `omega -> 0` limit `J(0, gamma)` for the defocusing-first
//! cases.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::landscape::{eval_f1, eval_u, one_minus_pow_ln, spow, NdKernel};
use crate::model::{NonlinearityParams, Sign};
use crate::profile::{critical_points, f1_scale, find_a, find_a0, profile_at_zero, ProfileResult};
use crate::quadrature::{integrate, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Transformed,
    Raw,
    MassFd,
    OmegaZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Stable,
    Unstable,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityValue {
    pub j: f64,
    pub abs_error: f64,
    pub diverging: bool,
    pub method: Method,
}

impl StabilityValue {
    fn divergent(sign: f64, method: Method) -> Self {
        Self { j: sign * f64::INFINITY, abs_error: 0.0, diverging: true, method }
    }

    /// `J > 0` is stable and `J < 0` unstable, provided `|J|` exceeds the
    /// error estimate.
    pub fn verdict(&self) -> Verdict {
        if self.diverging || self.j.abs() > self.abs_error {
            if self.j > 0.0 {
                Verdict::Stable
            } else if self.j < 0.0 {
                Verdict::Unstable
            } else {
                Verdict::Indeterminate
            }
        } else {
            Verdict::Indeterminate
        }
    }
}

/// Relative gap `omega - F1(s_c)` at a local maximum of `F1` below `a` under
/// which the point is treated as sitting on the upper-right side of the curve.
pub const UPPER_TOUCH_TOL: f64 = 1e-12;

/// Which side of the nonexistence curve, if any, the profile is stuck to.
fn divergence(params: &NonlinearityParams, omega: f64, gamma: f64, prof: &ProfileResult) -> Option<f64> {
    if prof.on_boundary {
        return Some(1.0);
    }
    for s_c in critical_points(params, gamma) {
        if s_c < prof.a {
            let gap = omega - eval_f1(params, gamma, s_c);
            if gap <= UPPER_TOUCH_TOL * f1_scale(params, omega, gamma, s_c) {
                return Some(-1.0);
            }
        }
    }
    None
}

fn existing_profile(params: &NonlinearityParams, omega: f64, gamma: f64) -> Result<ProfileResult> {
    let prof = find_a(params, omega, gamma)?;
    if !prof.exists && !prof.on_boundary {
        return Err(Error::NotFound(format!("U'(a) >= 0 at omega = {omega}, gamma = {gamma}")));
    }
    Ok(prof)
}

/// `u`-positions of the critical points of `F1` inside `(0, a)` under `s = a(1 - u^2)`.
fn u_breakpoints(params: &NonlinearityParams, gamma: f64, a: f64) -> Vec<f64> {
    critical_points(params, gamma)
        .into_iter()
        .filter(|&s| s > 0.0 && s < a)
        .map(|s| (1.0 - s / a).sqrt())
        .collect()
}

/// `J = C int_0^1 N(a,t) / D(a,t)^{3/2} dt` with `C = -a / (4 sqrt2 U'(a))`,
/// integrated in `u` with `t = 1 - u^2`.
pub fn eval_j(params: &NonlinearityParams, omega: f64, gamma: f64) -> Result<StabilityValue> {
    let prof = existing_profile(params, omega, gamma)?;
    if let Some(sign) = divergence(params, omega, gamma, &prof) {
        return Ok(StabilityValue::divergent(sign, Method::Transformed));
    }
    let a = prof.a;
    let kernel = NdKernel::new(params, gamma, a);
    let integrand = |u: f64| {
        let (n, d) = kernel.at_ln((-u * u).ln_1p());
        2.0 * u * n / (d * d.sqrt())
    };
    let quad = integrate(integrand, 0.0, 1.0, &u_breakpoints(params, gamma, a), QuadOptions::default());
    let c = -a / (4.0 * std::f64::consts::SQRT_2 * prof.uprime_at_a);
    Ok(StabilityValue {
        j: c * quad.value,
        abs_error: (c * quad.abs_error).abs(),
        diverging: false,
        method: Method::Transformed,
    })
}

/// `J = -1/(2U'(a)) int_0^a (3 + s(U'(a) - U'(s))/U(s)) sqrt(s/U(s)) ds`,
/// evaluated straight from `U` with `s = a - u^2`.
pub fn eval_j_raw(params: &NonlinearityParams, omega: f64, gamma: f64) -> Result<StabilityValue> {
    let prof = existing_profile(params, omega, gamma)?;
    if let Some(sign) = divergence(params, omega, gamma, &prof) {
        return Ok(StabilityValue::divergent(sign, Method::Raw));
    }
    let a = prof.a;
    let ua = prof.uprime_at_a;
    let integrand = |u: f64| {
        let s = a - u * u;
        if s <= 0.0 {
            return 0.0;
        }
        let e = eval_u(params, omega, gamma, s);
        let bracket = 3.0 + s * (ua - e.first_deriv) / e.value;
        2.0 * u * bracket * (s / e.value).sqrt()
    };
    let breaks: Vec<f64> = critical_points(params, gamma)
        .into_iter()
        .filter(|&s| s > 0.0 && s < a)
        .map(|s| (a - s).sqrt())
        .collect();
    let quad = integrate(integrand, 0.0, a.sqrt(), &breaks, QuadOptions::default());
    let c = -1.0 / (2.0 * ua);
    Ok(StabilityValue {
        j: c * quad.value,
        abs_error: (c * quad.abs_error).abs(),
        diverging: false,
        method: Method::Raw,
    })
}

/// Mass `Q = int_0^a sqrt(s / U(s)) ds = a int_0^1 dt / sqrt(2 D(a,t))`.
pub fn mass_q(params: &NonlinearityParams, omega: f64, gamma: f64) -> Result<f64> {
    let prof = existing_profile(params, omega, gamma)?;
    if let Some(sign) = divergence(params, omega, gamma, &prof) {
        return Err(Error::Diverging { sign });
    }
    let a = prof.a;
    let kernel = NdKernel::new(params, gamma, a);
    let integrand = |u: f64| {
        let (_, d) = kernel.at_ln((-u * u).ln_1p());
        2.0 * u / (2.0 * d).sqrt()
    };
    let opts = QuadOptions { rel_tol: 1e-13, abs_tol: 0.0, ..Default::default() };
    let quad = integrate(integrand, 0.0, 1.0, &u_breakpoints(params, gamma, a), opts);
    Ok(a * quad.value)
}

/// `J` as a central difference of the mass in `omega`, at steps `h` and
/// `h/2`, Richardson-combined. The difference of the two estimates is the
/// reported error.
pub fn mass_fd(params: &NonlinearityParams, omega: f64, gamma: f64) -> Result<StabilityValue> {
    let prof = existing_profile(params, omega, gamma)?;
    if let Some(sign) = divergence(params, omega, gamma, &prof) {
        return Ok(StabilityValue::divergent(sign, Method::MassFd));
    }
    let h = (1e-4 * omega).max(1e-6).min(0.25 * omega);
    let central = |h: f64| -> Result<f64> {
        Ok((mass_q(params, omega + h, gamma)? - mass_q(params, omega - h, gamma)?) / (2.0 * h))
    };
    let coarse = central(h)?;
    let fine = central(0.5 * h)?;
    let j = (4.0 * fine - coarse) / 3.0;
    let abs_error = (fine - coarse).abs();
    if abs_error > 1e-2 * (1.0 + j.abs()) {
        return Err(Error::Inconsistent(format!(
            "step h gives {coarse}, h/2 gives {fine} at omega = {omega}, gamma = {gamma}"
        )));
    }
    Ok(StabilityValue { j, abs_error, diverging: false, method: Method::MassFd })
}

/// The pieces of the `J(0, gamma)` integrand after eliminating `gamma` with
/// `F1(a0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmegaZeroPieces {
    pub beta: f64,
    pub a0: f64,
    a1: f64,
    a3: f64,
    kp: f64,
    kq: f64,
    kr: f64,
    p: f64,
    q: f64,
    r: f64,
}

impl OmegaZeroPieces {
    pub fn new(params: &NonlinearityParams, a0: f64) -> Self {
        let NonlinearityParams { p, q, r, .. } = *params;
        Self {
            beta: (p + 1.0) / (r + 1.0) * spow(a0, (r - p) / 2.0),
            a0,
            a1: params.a1(),
            a3: params.a3(),
            kp: (p - 1.0) / 2.0,
            kq: (q - 1.0) / 2.0,
            kr: (r - 1.0) / 2.0,
            p,
            q,
            r,
        }
    }

    /// `(N1, N2, D1, D2)` at `s = exp(ln_s)`. Differences `s^Q - s^P` are
    /// formed from powers directly when `s` is small and from `1 - s^k`
    /// when `s` is near one, to avoid cancellation at either end.
    pub fn at_ln(&self, ln_s: f64) -> (f64, f64, f64, f64) {
        let omp = one_minus_pow_ln(ln_s, self.kp);
        let omq = one_minus_pow_ln(ln_s, self.kq);
        let omr = one_minus_pow_ln(ln_s, self.kr);
        let n1 = self.a1 * ((5.0 - self.p) * omp - (5.0 - self.q) * omq);
        let n2 = self.a3 * ((5.0 - self.r) * omr - (5.0 - self.q) * omq);
        let (d1, d2) = if ln_s < -std::f64::consts::LN_2 {
            let pw = |k: f64| (k * ln_s).exp();
            (self.a1 * (pw(self.kq) - pw(self.kp)), self.a3 * (pw(self.kq) - pw(self.kr)))
        } else {
            (self.a1 * (omp - omq), self.a3 * (omr - omq))
        };
        (n1, n2, d1, d2)
    }

    pub fn at(&self, s: f64) -> (f64, f64, f64, f64) {
        self.at_ln(s.ln())
    }
}

/// `J(0, gamma) = C ((p+1)/a0^P)^{1/2} int_0^1 (N1 + beta N2)/(D1 + beta D2)^{3/2} ds`
/// with `C` taken at `omega = 0`. Needs `a1 = -1` and `p < 7/3`.
pub fn eval_j0(params: &NonlinearityParams, gamma: f64) -> Result<StabilityValue> {
    if params.sign1 != Sign::Defocusing {
        return Err(Error::Domain("J(0, gamma) is defined only when the lowest power is defocusing".into()));
    }
    if params.p >= 7.0 / 3.0 {
        return Err(Error::Unsupported(format!(
            "J(0, gamma) is -inf for p >= 7/3 (p = {})",
            params.p
        )));
    }
    let a0 = find_a0(params, gamma)?;
    let prof = profile_at_zero(params, gamma)?;
    if prof.on_boundary || prof.uprime_at_a >= 0.0 {
        return Ok(StabilityValue::divergent(1.0, Method::OmegaZero));
    }
    let pieces = OmegaZeroPieces::new(params, a0);
    let beta = pieces.beta;
    let f = |ln_s: f64| {
        let (n1, n2, d1, d2) = pieces.at_ln(ln_s);
        let d = d1 + beta * d2;
        (n1 + beta * n2) / (d * d.sqrt())
    };
    // On (0, 1/2], s = v^m with m = 4/(7-3p) cancels the s^{-3P/2} blow-up.
    let m = 4.0 / (7.0 - 3.0 * params.p);
    let v_top = 0.5f64.powf(1.0 / m);
    let low = integrate(
        |v: f64| {
            let ln_s = m * v.ln();
            f(ln_s) * m * ((m - 1.0) * v.ln()).exp()
        },
        0.0,
        v_top,
        &[],
        QuadOptions::default(),
    );
    // On [1/2, 1), s = 1 - u^2 cancels the (1-s)^{-1/2} blow-up.
    let high = integrate(
        |u: f64| 2.0 * u * f((-u * u).ln_1p()),
        0.0,
        0.5f64.sqrt(),
        &[],
        QuadOptions::default(),
    );
    let kp = (params.p - 1.0) / 2.0;
    let c = -a0 / (4.0 * std::f64::consts::SQRT_2 * prof.uprime_at_a)
        * ((params.p + 1.0) / spow(a0, kp)).sqrt();
    Ok(StabilityValue {
        j: c * (low.value + high.value),
        abs_error: (c * (low.abs_error + high.abs_error)).abs(),
        diverging: false,
        method: Method::OmegaZero,
    })
}
