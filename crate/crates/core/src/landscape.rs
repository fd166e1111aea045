//! The reduced energy landscape `U(s) = 2G(sqrt s)`, the amplitude function
//! `F1` with `U(s) = s (omega - F1(s))`, and the pieces `A_l`, `N`, `D` of the
//! transformed stability integrand. Here `s` is the squared amplitude.

use crate::model::NonlinearityParams;

/// `s^e` for `s >= 0`, with the `s = 0` limit taken by the sign of `e`.
pub(crate) fn spow(s: f64, e: f64) -> f64 {
    if s == 0.0 {
        if e > 0.0 {
            0.0
        } else if e == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        (e * s.ln()).exp()
    }
}

/// `1 - s^k` given `ln s`; accurate as `s -> 1`, exact `1` at `s = 0` (`ln s = -inf`).
#[inline]
pub(crate) fn one_minus_pow_ln(ln_s: f64, k: f64) -> f64 {
    -(k * ln_s).exp_m1()
}

/// The three signed terms of the nonlinearity: `(coefficient, exponent l)`
/// for `a1 |u|^{p-1}u`, `-gamma |u|^{q-1}u`, `a3 |u|^{r-1}u`.
#[inline]
pub(crate) fn terms(params: &NonlinearityParams, gamma: f64) -> [(f64, f64); 3] {
    [(params.a1(), params.p), (-gamma, params.q), (params.a3(), params.r)]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandscapeEval {
    pub value: f64,
    pub first_deriv: f64,
    pub second_deriv: f64,
}

/// `F1(gamma, s) = sum 2 c_l s^{(l-1)/2} / (l + 1)`.
pub fn eval_f1(params: &NonlinearityParams, gamma: f64, s: f64) -> f64 {
    terms(params, gamma)
        .iter()
        .map(|&(c, l)| 2.0 * c / (l + 1.0) * spow(s, (l - 1.0) / 2.0))
        .sum()
}

/// `d F1 / ds`.
pub fn eval_f1_deriv(params: &NonlinearityParams, gamma: f64, s: f64) -> f64 {
    terms(params, gamma)
        .iter()
        .map(|&(c, l)| c * (l - 1.0) / (l + 1.0) * spow(s, (l - 3.0) / 2.0))
        .sum()
}

/// `U(s) = omega s - sum 2 c_l s^{(l+1)/2} / (l + 1)` and its first two
/// derivatives, each coded term by term.
pub fn eval_u(params: &NonlinearityParams, omega: f64, gamma: f64, s: f64) -> LandscapeEval {
    let mut value = omega * s;
    let mut first = omega;
    let mut second = 0.0;
    for (c, l) in terms(params, gamma) {
        if c == 0.0 {
            continue;
        }
        value -= 2.0 * c / (l + 1.0) * spow(s, (l + 1.0) / 2.0);
        first -= c * spow(s, (l - 1.0) / 2.0);
        second -= c * (l - 1.0) / 2.0 * spow(s, (l - 3.0) / 2.0);
    }
    LandscapeEval { value, first_deriv: first, second_deriv: second }
}

/// `A_l(a, s) = (1 - s^{(l-1)/2}) a^{(l-1)/2} / (l + 1)`.
pub fn eval_a(l: f64, a: f64, s: f64) -> f64 {
    let k = (l - 1.0) / 2.0;
    one_minus_pow_ln(s.ln(), k) * spow(a, k) / (l + 1.0)
}

/// Numerator `N` and denominator base `D` of the transformed stability
/// integrand `N / D^{3/2}` at `(a, s)`.
pub fn eval_nd(params: &NonlinearityParams, gamma: f64, a: f64, s: f64) -> (f64, f64) {
    NdKernel::new(params, gamma, a).at_ln(s.ln())
}

/// `N` and `D` with the `a`-dependent factors folded in once, so the
/// integrand can be evaluated in terms of `ln s`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct NdKernel {
    alpha: [f64; 3],
    weight: [f64; 3],
    k: [f64; 3],
}

impl NdKernel {
    pub(crate) fn new(params: &NonlinearityParams, gamma: f64, a: f64) -> Self {
        let t = terms(params, gamma);
        let mut alpha = [0.0; 3];
        let mut weight = [0.0; 3];
        let mut k = [0.0; 3];
        for (i, &(c, l)) in t.iter().enumerate() {
            k[i] = (l - 1.0) / 2.0;
            alpha[i] = c * spow(a, k[i]) / (l + 1.0);
            weight[i] = 5.0 - l;
        }
        Self { alpha, weight, k }
    }

    /// `(N, D)` at `s = exp(ln_s)`.
    #[inline]
    pub(crate) fn at_ln(&self, ln_s: f64) -> (f64, f64) {
        let mut n = 0.0;
        let mut d = 0.0;
        for i in 0..3 {
            if self.alpha[i] == 0.0 {
                continue;
            }
            let term = self.alpha[i] * one_minus_pow_ln(ln_s, self.k[i]);
            n += self.weight[i] * term;
            d += term;
        }
        (n, d)
    }
}
