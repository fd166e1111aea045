//! The squared amplitude `a(omega, gamma)`: the first positive zero of
//! `omega - F1`, and the existence test `U'(a) < 0`.
//!
//! Rather than scanning for a sign change, the critical points of `F1` are
//! located exactly (there are at most two), which splits `(0, inf)` into
//! pieces on which `F1` is monotone. The first piece on which `omega - F1`
//! reaches zero holds the root, and bisection on it cannot miss.

use crate::error::{Error, Result};
use crate::landscape::{eval_f1, eval_f1_deriv, eval_u, spow, terms};
use crate::model::{NonlinearityParams, Sign};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileResult {
    pub a: f64,
    pub uprime_at_a: f64,
    pub exists: bool,
    pub on_boundary: bool,
}

/// Relative size of `|U'(a)|` below which the profile is treated as lying on
/// the nonexistence curve.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Relative gap `omega - F1(s_c)` at a local maximum of `F1` below which the
/// maximum is treated as touching `omega` (a double zero of `U`).
pub const TOUCH_TOL: f64 = 1e-13;

/// Magnitude of the terms making up `U'(s)`, the reference for tolerances.
pub fn uprime_scale(params: &NonlinearityParams, omega: f64, gamma: f64, s: f64) -> f64 {
    omega.abs()
        + terms(params, gamma)
            .iter()
            .map(|&(c, l)| (c * spow(s, (l - 1.0) / 2.0)).abs())
            .sum::<f64>()
}

/// Magnitude of the terms making up `omega - F1(s)`.
pub fn f1_scale(params: &NonlinearityParams, omega: f64, gamma: f64, s: f64) -> f64 {
    omega.abs()
        + terms(params, gamma)
            .iter()
            .map(|&(c, l)| (2.0 * c / (l + 1.0) * spow(s, (l - 1.0) / 2.0)).abs())
            .sum::<f64>()
}

/// Bisection midpoint that switches to the geometric mean on wide brackets.
fn split(lo: f64, hi: f64) -> f64 {
    if lo > 0.0 && hi > 4.0 * lo {
        (lo * hi).sqrt()
    } else {
        0.5 * (lo + hi)
    }
}

/// Zero of `f` between `lo` and `hi` given `f(lo)` and `f(hi)` of opposite
/// (or zero) sign.
fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..400 {
        let mid = split(lo, hi);
        if mid <= lo || mid >= hi || (hi - lo) <= 1e-15 * hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Positive critical points of `F1(gamma, .)`, ascending.
///
/// `s F1'(s) / s^P = c_p + c_q s^{Q-P} + c_r s^{R-P}` (with folded constants)
/// has a derivative with at most one positive zero, so it is monotone on at
/// most two pieces and each piece holds at most one zero.
pub fn critical_points(params: &NonlinearityParams, gamma: f64) -> Vec<f64> {
    let t = terms(params, gamma);
    let k: Vec<f64> = t.iter().map(|&(_, l)| (l - 1.0) / 2.0).collect();
    let w: Vec<f64> = t.iter().map(|&(c, l)| 2.0 * c / (l + 1.0) * (l - 1.0) / 2.0).collect();
    let h = |s: f64| w[0] + w[1] * spow(s, k[1] - k[0]) + w[2] * spow(s, k[2] - k[0]);

    let ratio = -w[1] * (k[1] - k[0]) / (w[2] * (k[2] - k[0]));
    let mut edges = vec![0.0];
    if ratio > 0.0 {
        edges.push(ratio.powf(1.0 / (k[2] - k[1])));
    }
    let far_sign = w[2].signum();
    let mut out = Vec::new();
    for (i, &lo) in edges.iter().enumerate() {
        let h_lo = if lo == 0.0 { w[0] } else { h(lo) };
        let hi = match edges.get(i + 1) {
            Some(&hi) => hi,
            None => {
                let mut hi = lo.max(1.0) * 2.0;
                while h(hi).signum() != far_sign && hi < 1e300 {
                    hi *= 2.0;
                }
                hi
            }
        };
        let h_hi = h(hi);
        if h_lo == 0.0 && lo > 0.0 {
            out.push(lo);
        } else if h_lo * h_hi < 0.0 {
            let start = if lo == 0.0 {
                let mut s = hi;
                while h(s).signum() != w[0].signum() && s > 1e-300 {
                    s /= 16.0;
                }
                s
            } else {
                lo
            };
            out.push(bisect(h, start, hi));
        }
    }
    out.dedup();
    out
}

/// First positive zero of `g(s) = omega - F1(s)`, or `None` if `g > 0`
/// throughout. `g` must be positive just right of zero.
fn first_zero(params: &NonlinearityParams, omega: f64, gamma: f64) -> Option<f64> {
    let g = |s: f64| omega - eval_f1(params, gamma, s);
    for s_c in critical_points(params, gamma) {
        let gc = g(s_c);
        if gc <= TOUCH_TOL * f1_scale(params, omega, gamma, s_c) {
            // The zero lies before or at this critical point.
            if gc.abs() <= TOUCH_TOL * f1_scale(params, omega, gamma, s_c) {
                // A local maximum of F1 that touches omega: double zero of U.
                // Check first that no simple zero precedes it.
                return Some(zero_below(&g, s_c).unwrap_or(s_c));
            }
            return zero_below(&g, s_c);
        }
    }
    if params.sign3 == Sign::Defocusing {
        return None;
    }
    let mut hi = 1.0;
    while g(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return None;
        }
    }
    zero_below(&g, hi)
}

/// Zero of `g` below `hi` where `g(hi) <= 0`, on the monotone piece that ends
/// at `hi` (earlier critical points are known to have `g > 0`).
fn zero_below<G: Fn(f64) -> f64>(g: &G, hi: f64) -> Option<f64> {
    if g(hi) > 0.0 {
        return None;
    }
    let mut lo = hi;
    while g(lo) <= 0.0 {
        lo /= 16.0;
        if lo < 1e-300 {
            return None;
        }
    }
    Some(bisect(g, lo, hi))
}

/// Newton steps on `omega - F1` kept inside a small bracket around `s`.
fn polish(params: &NonlinearityParams, omega: f64, gamma: f64, s: f64) -> f64 {
    let lo = s * (1.0 - 1e-10);
    let hi = s * (1.0 + 1e-10);
    let mut x = s;
    for _ in 0..3 {
        let g = omega - eval_f1(params, gamma, x);
        let dg = -eval_f1_deriv(params, gamma, x);
        if g == 0.0 || dg == 0.0 || !dg.is_finite() {
            break;
        }
        let next = x - g / dg;
        if !(next > lo && next < hi) {
            break;
        }
        let before = g.abs();
        let after = (omega - eval_f1(params, gamma, next)).abs();
        if after >= before {
            break;
        }
        x = next;
    }
    x
}

fn result_at(params: &NonlinearityParams, omega: f64, gamma: f64, a: f64) -> ProfileResult {
    let uprime = eval_u(params, omega, gamma, a).first_deriv;
    let tol = BOUNDARY_TOL * (1.0 + uprime_scale(params, omega, gamma, a));
    let on_boundary = uprime.abs() <= tol;
    ProfileResult { a, uprime_at_a: uprime, exists: !on_boundary && uprime < 0.0, on_boundary }
}

/// The squared amplitude `a(omega, gamma)` and existence flags.
pub fn find_a(params: &NonlinearityParams, omega: f64, gamma: f64) -> Result<ProfileResult> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("omega must be positive, got {omega}")));
    }
    if !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma must be finite, got {gamma}")));
    }
    let a = first_zero(params, omega, gamma).ok_or_else(|| {
        Error::NotFound(format!("omega - F1 has no positive zero at omega = {omega}, gamma = {gamma}"))
    })?;
    let a = polish(params, omega, gamma, a);
    Ok(result_at(params, omega, gamma, a))
}

/// `a0(gamma) = lim_{omega -> 0} a(omega, gamma)`: the first positive zero of
/// `F1(gamma, .)`. Only defined when the lowest power is defocusing.
pub fn find_a0(params: &NonlinearityParams, gamma: f64) -> Result<f64> {
    if params.sign1 != Sign::Defocusing {
        return Err(Error::Domain("a0 is defined only when the lowest power is defocusing".into()));
    }
    let a = first_zero(params, 0.0, gamma).ok_or_else(|| {
        Error::NotFound(format!("F1 has no positive zero at gamma = {gamma}"))
    })?;
    Ok(polish(params, 0.0, gamma, a))
}

/// Profile data at `omega = 0` for the defocusing-first cases.
pub fn profile_at_zero(params: &NonlinearityParams, gamma: f64) -> Result<ProfileResult> {
    let a = find_a0(params, gamma)?;
    Ok(result_at(params, 0.0, gamma, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Case;
    use proptest::prelude::*;

    fn params(p: f64, q: f64, r: f64, case: Case) -> NonlinearityParams {
        NonlinearityParams::with_case(p, q, r, case).unwrap()
    }

    #[test]
    fn inverts_forward_evaluation() {
        let ff = params(2.0, 3.0, 4.0, Case::FF);
        let res = find_a(&ff, 16.0 / 15.0, 0.0).unwrap();
        assert!((res.a - 1.0).abs() < 1e-13);
        assert!(res.exists && !res.on_boundary);
    }

    #[test]
    fn defocusing_top_has_bounded_range() {
        let fd = params(3.0, 5.0, 7.0, Case::FD);
        // F1 = s/2 - 2 gamma s^2/6 - s^3/4 at gamma = 0 peaks at s = sqrt(2/3).
        let s = (2.0f64 / 3.0).sqrt();
        let sup = eval_f1(&fd, 0.0, s);
        assert!(matches!(find_a(&fd, sup * 1.001, 0.0), Err(Error::NotFound(_))));
        let r = find_a(&fd, sup * 0.5, 0.0).unwrap();
        assert!(r.exists && r.a < s);
    }

    #[test]
    fn a0_closed_form() {
        let df = params(2.0, 3.0, 4.0, Case::DF);
        let a0 = find_a0(&df, 0.0).unwrap();
        assert!((a0 - 5.0 / 3.0).abs() < 1e-13);
        assert!(eval_f1(&df, 0.0, a0).abs() < 1e-12);
        for gamma in [-3.0, 0.7, 4.0] {
            let a0 = find_a0(&df, gamma).unwrap();
            assert!(eval_f1(&df, gamma, a0).abs() < 1e-12);
        }
        assert!(find_a0(&params(2.0, 3.0, 4.0, Case::FF), 0.0).is_err());
    }

    #[test]
    fn critical_points_match_derivative_zeros() {
        let ff = params(2.0, 3.0, 4.0, Case::FF);
        let cps = critical_points(&ff, 3.0);
        assert_eq!(cps.len(), 2);
        for s in cps {
            assert!(eval_f1_deriv(&ff, 3.0, s).abs() < 1e-12);
        }
        assert!(critical_points(&ff, 0.0).is_empty());
    }

    #[test]
    fn small_gamma_limit_shrinks_amplitude() {
        let ff = params(2.0, 3.0, 4.0, Case::FF);
        let mut prev = f64::INFINITY;
        for k in 0..6 {
            let a = find_a(&ff, 0.5, -(10f64.powi(k))).unwrap().a;
            assert!(a < prev);
            prev = a;
        }
        assert!(prev < 2e-5);
    }

    fn any_params() -> impl Strategy<Value = NonlinearityParams> {
        (1.1f64..4.0, 0.1f64..3.0, 0.1f64..3.0, 0usize..4).prop_map(|(p, dq, dr, c)| {
            let case = [Case::FF, Case::FD, Case::DF, Case::DD][c];
            NonlinearityParams::with_case(p, p + dq, p + dq + dr, case).unwrap()
        })
    }

    proptest! {
        #[test]
        fn root_is_first_zero(params in any_params(), omega in 0.01f64..5.0, gamma in -5.0f64..5.0) {
            if let Ok(res) = find_a(&params, omega, gamma) {
                let g = |s: f64| omega - eval_f1(&params, gamma, s);
                // Absolute 1e-12 accuracy is out of reach once the terms of F1 are huge.
                let scale = f1_scale(&params, omega, gamma, res.a);
                prop_assert!(g(res.a).abs() <= 1e-12 * (1.0 + omega) + 1e-14 * scale);
                for i in 1..400 {
                    let s = res.a * i as f64 / 400.0;
                    prop_assert!(g(s) > 0.0 || (res.a - s) < 1e-6 * res.a, "earlier zero near {s}");
                }
                if res.exists {
                    prop_assert!(res.uprime_at_a < 0.0);
                }
            }
        }

        #[test]
        fn nd_denominator_positive_for_existing_profiles(
            params in any_params(), omega in 0.01f64..5.0, gamma in -5.0f64..5.0,
        ) {
            if let Ok(res) = find_a(&params, omega, gamma) {
                if res.exists {
                    for i in 1..10 {
                        let s = i as f64 / 10.0;
                        let (_, d) = crate::landscape::eval_nd(&params, gamma, res.a, s);
                        prop_assert!(d > 0.0);
                        let u = eval_u(&params, omega, gamma, res.a * s).value;
                        prop_assert!((2.0 * d - u / (res.a * s)).abs() <= 1e-10 * (2.0 * d).abs().max(1e-300));
                    }
                }
            }
        }

        #[test]
        fn amplitude_increases_with_omega_and_gamma(
            params in any_params(), w1 in 0.01f64..3.0, w2 in 0.01f64..3.0,
            g1 in -4.0f64..4.0, g2 in -4.0f64..4.0,
        ) {
            let (lo, hi) = (w1.min(w2), w1.max(w2));
            if hi > lo {
                if let (Ok(a), Ok(b)) = (find_a(&params, lo, g1), find_a(&params, hi, g1)) {
                    if a.exists && b.exists {
                        // Equal up to root-finder resolution when the gap is below f64 precision.
                        prop_assert!(a.a <= b.a * (1.0 + 1e-13));
                    }
                }
            }
            let (glo, ghi) = (g1.min(g2), g1.max(g2));
            if ghi > glo {
                if let (Ok(a), Ok(b)) = (find_a(&params, w1, glo), find_a(&params, w1, ghi)) {
                    if a.exists && b.exists {
                        // Equal up to root-finder resolution when the gap is below f64 precision.
                        prop_assert!(a.a <= b.a * (1.0 + 1e-13));
                    }
                }
            }
        }
    }
}
