//! Self-checks behind `triple-nls verify`: identities, closed forms and
//! sign theorems evaluated against independent numerical oracles.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boundary::{endpoints, gamma_omega_ne, omega_star, sample_curve};
use crate::error::Result;
use crate::landscape::eval_u;
use crate::model::{Case, NonlinearityParams};
use crate::profile::find_a;
use crate::quadrature::{integrate, QuadOptions};
use crate::signs::{count_positive_roots_sampled, ratio_h, sign_changes, GeneralizedPolynomial};
use crate::special::{beta_deriv_bounds, beta_fn, dbeta_dx, h_fn, two_power_integral};
use crate::stability::{eval_j, eval_j0, eval_j_raw, mass_fd};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn check(name: &str, passed: bool, detail: String) -> CheckResult {
    CheckResult { name: name.to_string(), passed, detail }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Special,
    Boundary,
    Signs,
    Profile,
    Stability,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Special, Suite::Boundary, Suite::Signs, Suite::Profile, Suite::Stability];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Special => "special",
            Suite::Boundary => "boundary",
            Suite::Signs => "signs",
            Suite::Profile => "profile",
            Suite::Stability => "stability",
        }
    }
}

pub fn run_suite(suite: Suite) -> Vec<CheckResult> {
    match suite {
        Suite::Special => special_suite(),
        Suite::Boundary => boundary_suite(),
        Suite::Signs => signs_suite(),
        Suite::Profile => profile_suite(),
        Suite::Stability => stability_suite(),
    }
}

fn tight() -> QuadOptions {
    QuadOptions { rel_tol: 1e-12, abs_tol: 0.0, max_intervals: 4000 }
}

/// `int_0^1 t^{x-1} g(t) dt` for smooth `g` on `[0, 1/2]`, via `t = v^{1/x}`.
fn left_power_part<G: Fn(f64) -> f64>(x: f64, g: G) -> f64 {
    let top = 0.5f64.powf(x);
    integrate(|v: f64| g(v.powf(1.0 / x)) / x, 0.0, top, &[], tight()).value
}

/// `B(x, y)` by quadrature of its defining integral.
pub fn beta_quadrature(x: f64, y: f64) -> f64 {
    left_power_part(x, |t| (1.0 - t).powf(y - 1.0)) + left_power_part(y, |t| (1.0 - t).powf(x - 1.0))
}

/// `H(x, y)` by quadrature: `t = v^{1/x}` on `[0, 1/2]`, `t = 1 - u^2` on `[1/2, 1]`.
pub fn h_quadrature(x: f64, y: f64) -> f64 {
    let left = left_power_part(x, |t| (1.0 - t.powf(y)) / (1.0 - t).powf(1.5));
    let right = integrate(
        |u: f64| {
            let ln_t = (-u * u).ln_1p();
            let one_minus = -(y * ln_t).exp_m1();
            let ratio = if u == 0.0 { y } else { one_minus / (u * u) };
            2.0 * ((x - 1.0) * ln_t).exp() * ratio
        },
        0.0,
        0.5f64.sqrt(),
        &[],
        tight(),
    )
    .value;
    left + right
}

/// The two-power integral by quadrature, with `s = v^{4/(7-3p)}` near 0 and
/// `s = 1 - u^2` near 1.
pub fn two_power_quadrature(p: f64, q: f64) -> f64 {
    let (kp, kq) = ((p - 1.0) / 2.0, (q - 1.0) / 2.0);
    let f = |ln_s: f64, near_one: bool| {
        let omp = -(kp * ln_s).exp_m1();
        let omq = -(kq * ln_s).exp_m1();
        let num = -(5.0 - p) * omp + (5.0 - q) * omq;
        let den = if near_one { omq - omp } else { (kp * ln_s).exp() - (kq * ln_s).exp() };
        num / (den * den.sqrt())
    };
    let m = 4.0 / (7.0 - 3.0 * p);
    let low = integrate(
        |v: f64| f(m * v.ln(), false) * m * ((m - 1.0) * v.ln()).exp(),
        0.0,
        0.5f64.powf(1.0 / m),
        &[],
        tight(),
    );
    let high = integrate(|u: f64| 2.0 * u * f((-u * u).ln_1p(), true), 0.0, 0.5f64.sqrt(), &[], tight());
    low.value + high.value
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

pub fn special_suite() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let pi = std::f64::consts::PI;
    let b = beta_fn(0.5, 0.5).unwrap_or(f64::NAN);
    out.push(check("beta(1/2,1/2) = pi", (b - pi).abs() < 1e-12 * pi, format!("{b:.17}")));
    let bq = beta_quadrature(0.25, 0.5);
    let bc = beta_fn(0.25, 0.5).unwrap_or(f64::NAN);
    out.push(check("beta(1/4,1/2) vs quadrature", rel(bc, bq) < 1e-9, format!("{bc:.15} vs {bq:.15}")));

    let mut worst = 0.0f64;
    for (x, y) in [(0.7, 0.5), (1.0, 1.0), (2.5, 0.3), (0.2, 4.0)] {
        let h = 1e-5 * x;
        let fd = (beta_fn(x + h, y).unwrap_or(f64::NAN) - beta_fn(x - h, y).unwrap_or(f64::NAN)) / (2.0 * h);
        let an = dbeta_dx(x, y).unwrap_or(f64::NAN);
        worst = worst.max((an - fd).abs() / an.abs());
    }
    out.push(check("dB/dx vs finite differences", worst < 1e-7, format!("max rel {worst:.2e}")));

    let grid: Vec<f64> = (0..10).map(|k| 0.1 * 50f64.powf(k as f64 / 9.0)).collect();
    let mut worst = 0.0f64;
    for &x in &grid {
        for &y in &grid {
            let closed = h_fn(x, y).unwrap_or(f64::NAN);
            worst = worst.max(rel(closed, h_quadrature(x, y)));
        }
    }
    out.push(check("H closed form vs quadrature (10x10)", worst <= 1e-8, format!("max {worst:.2e}")));

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let p = rng.gen_range(1.05..2.3);
        let q = p + rng.gen_range(0.1..3.0);
        let closed = two_power_integral(p, q).unwrap_or(f64::NAN);
        let quad = two_power_quadrature(p, q);
        worst = worst.max((closed - quad).abs() / closed.abs().max(1e-300));
    }
    out.push(check("two-power closed form vs quadrature (20 random)", worst <= 1e-6, format!("max rel {worst:.2e}")));
    let zero = two_power_integral(2.0, 3.0).unwrap_or(f64::NAN);
    out.push(check("two-power integral vanishes at 2p + q = 7", zero == 0.0, format!("{zero}")));

    let mut failures = 0;
    for k in 0..50 {
        let b = 0.05 * 1e4f64.powf(k as f64 / 49.0);
        let ok = match (beta_deriv_bounds(b), dbeta_dx(b + 0.5, 0.5)) {
            (Ok(bounds), Ok(d)) => bounds.contains_strictly(d),
            _ => false,
        };
        failures += usize::from(!ok);
    }
    out.push(check("dB/dx(b + 1/2, 1/2) strictly inside bounds (50 b)", failures == 0, format!("{failures} violations")));
    out
}

pub fn boundary_suite() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let ff = NonlinearityParams::with_case(2.0, 3.0, 4.0, Case::FF).expect("valid exponents");
    let ends = endpoints(&ff);
    let a = ends.endpoint_a.unwrap_or(f64::NAN);
    let g1 = ends.gamma1.unwrap_or(f64::NAN);
    let w = gamma_omega_ne(&ff, a).0;
    let ok = (a - 5.0 / 9.0).abs() < 1e-12
        && (g1 - 4.0 / 5f64.sqrt()).abs() < 1e-12
        && (w - 2.0 * 5f64.sqrt() / 27.0).abs() < 1e-12;
    out.push(check("FF(2,3,4) endpoint constants", ok, format!("a = {a:.17}, gamma1 = {g1:.17}, omega = {w:.17}")));
    let dd = NonlinearityParams::with_case(3.0, 4.0, 7.0, Case::DD).expect("valid exponents");
    let ab = endpoints(&dd).endpoint_a.unwrap_or(f64::NAN);
    let wb = gamma_omega_ne(&dd, ab).0;
    let ok = (ab - (2.0f64 / 3.0).sqrt()).abs() < 1e-12 && wb.abs() < 1e-12;
    out.push(check("DD(3,4,7) endpoint constants", ok, format!("a_b = {ab:.17}, omega = {wb:.3e}")));

    for (params, lo, hi) in [
        (ff, 1e-3, 10.0),
        (NonlinearityParams::with_case(3.0, 5.0, 7.0, Case::FD).expect("valid exponents"), 0.01, 10.0),
        (dd, ab, 10.0 * ab),
    ] {
        let curve = match sample_curve(&params, lo, hi, 200) {
            Ok(c) => c,
            Err(e) => {
                out.push(check("curve sampling", false, e.to_string()));
                continue;
            }
        };
        let mut worst = (0.0f64, 0.0f64, 0.0f64);
        let mut trip = 0.0f64;
        for s in &curve.samples {
            let e = eval_u(&params, s.omega_ne, s.gamma_ne, s.a);
            worst.0 = worst.0.max(e.value.abs() / (1.0 + s.a));
            worst.1 = worst.1.max(e.first_deriv.abs());
            worst.2 = worst.2.min(e.second_deriv);
            let back = omega_star(&params, s.gamma_ne).unwrap_or(f64::NAN);
            trip = trip.max((back - s.omega_ne).abs() / s.omega_ne.abs().max(1e-300));
        }
        let ok = worst.0 <= 1e-10 && worst.1 <= 1e-10 && worst.2 >= -1e-10 && trip <= 1e-9;
        out.push(check(
            &format!("{} curve: U = U' = 0, U'' >= 0, omega* round trip", params.case()),
            ok,
            format!("|U| {:.1e}, |U'| {:.1e}, min U'' {:.1e}, round trip {trip:.1e}", worst.0, worst.1, worst.2),
        ));
    }
    out
}

fn random_gp(rng: &mut ChaCha8Rng) -> Option<GeneralizedPolynomial> {
    let n = rng.gen_range(1..=5);
    let terms = (0..n)
        .map(|_| {
            let c: f64 = rng.gen_range(0.1..5.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            (c, rng.gen_range(0.0..10.0))
        })
        .collect();
    GeneralizedPolynomial::from_unsorted(terms).ok()
}

pub fn signs_suite() -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut violations = 0;
    let mut tested = 0;
    while tested < 1000 {
        if let Some(gp) = random_gp(&mut rng) {
            tested += 1;
            violations += usize::from(count_positive_roots_sampled(&gp, 10.0, 2000) > sign_changes(&gp));
        }
    }
    let mut out = vec![check(
        "rule of signs on 1000 random generalized polynomials",
        violations == 0,
        format!("{violations} violations"),
    )];
    let mut bad = 0;
    for _ in 0..100 {
        let p2 = rng.gen_range(0.0..3.0);
        let p1 = p2 + rng.gen_range(0.0..2.0);
        let q2 = p2 + rng.gen_range(0.1..3.0);
        let q1 = (q2 + rng.gen_range(0.05f64..3.0)).max(p1 + 0.05);
        let mut prev = ratio_h(0.01, p1, q1, p2, q2);
        for i in 2..100 {
            let h = ratio_h(i as f64 / 100.0, p1, q1, p2, q2);
            bad += usize::from(h <= prev);
            prev = h;
        }
    }
    out.push(check("two-power ratio increasing (100 random)", bad == 0, format!("{bad} non-increasing steps")));
    out
}

fn random_params(rng: &mut ChaCha8Rng) -> NonlinearityParams {
    let p = rng.gen_range(1.2..5.0);
    let q = p + rng.gen_range(0.2..3.0);
    let r = q + rng.gen_range(0.2..3.0);
    let case = [Case::FF, Case::FD, Case::DF, Case::DD][rng.gen_range(0..4)];
    NonlinearityParams::with_case(p, q, r, case).expect("ordered exponents")
}

pub fn profile_suite() -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let (mut compared, mut violations) = (0, 0);
    for _ in 0..1000 {
        let params = random_params(&mut rng);
        let gamma = rng.gen_range(-3.0..3.0);
        let (w1, w2): (f64, f64) = (rng.gen_range(0.01..3.0), rng.gen_range(0.01..3.0));
        let (lo, hi) = (w1.min(w2), w1.max(w2));
        if let (Ok(a), Ok(b)) = (find_a(&params, lo, gamma), find_a(&params, hi, gamma)) {
            if a.exists && b.exists && hi > lo {
                compared += 1;
                violations += usize::from(a.a >= b.a);
            }
        }
        let omega = rng.gen_range(0.01..3.0);
        let (g1, g2): (f64, f64) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let (glo, ghi) = (g1.min(g2), g1.max(g2));
        if let (Ok(a), Ok(b)) = (find_a(&params, omega, glo), find_a(&params, omega, ghi)) {
            if a.exists && b.exists && ghi > glo {
                compared += 1;
                violations += usize::from(a.a >= b.a);
            }
        }
    }
    vec![check(
        "amplitude increasing in omega and gamma",
        violations == 0,
        format!("{violations} violations in {compared} comparisons"),
    )]
}

/// A 5x5 grid of interior points of the existence region of each case.
pub fn interior_grid(params: &NonlinearityParams) -> Vec<(f64, f64)> {
    let fractions = [0.15, 0.3, 0.45, 0.6, 0.75];
    match params.case() {
        Case::FF => {
            let g1 = endpoints(params).gamma1.unwrap_or(0.0);
            let gammas = [-2.0, -1.0, 0.0, 0.5 * g1, 0.85 * g1];
            let omegas = [0.1, 0.3, 0.6, 1.0, 2.0];
            gammas.iter().flat_map(|&g| omegas.iter().map(move |&w| (w, g))).collect()
        }
        Case::DF => {
            let gammas = [-2.0, -1.0, 0.0, 1.0, 2.0];
            let omegas = [0.1, 0.3, 0.6, 1.0, 2.0];
            gammas.iter().flat_map(|&g| omegas.iter().map(move |&w| (w, g))).collect()
        }
        Case::FD | Case::DD => {
            let top = endpoints(params).gamma1.map(|g| g - 0.5).unwrap_or(2.0);
            let gammas: Vec<f64> = (0..5).map(|k| top - k as f64).collect();
            gammas
                .iter()
                .flat_map(|&g| {
                    let star = omega_star(params, g).unwrap_or(f64::NAN);
                    fractions.iter().map(move |&f| (f * star, g))
                })
                .collect()
        }
    }
}

/// Worst relative disagreement of the raw and finite-difference routes with
/// the transformed route over a set of points.
pub fn triple_method_errors(params: &NonlinearityParams, points: &[(f64, f64)]) -> Result<(f64, f64)> {
    let mut worst = (0.0f64, 0.0f64);
    for &(w, g) in points {
        let t = eval_j(params, w, g)?.j;
        let r = eval_j_raw(params, w, g)?.j;
        let m = mass_fd(params, w, g)?.j;
        worst.0 = worst.0.max((t - r).abs() / (1.0 + t.abs()));
        worst.1 = worst.1.max((t - m).abs() / (1.0 + t.abs()));
    }
    Ok(worst)
}

pub fn stability_suite() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for case in [Case::FF, Case::FD, Case::DF, Case::DD] {
        let params = NonlinearityParams::with_case(3.0, 4.0, 7.0, case).expect("valid exponents");
        let pts = interior_grid(&params);
        match triple_method_errors(&params, &pts) {
            Ok((raw, fd)) => out.push(check(
                &format!("{case}(3,4,7) transformed vs raw vs mass finite difference"),
                raw <= 1e-4 && fd <= 1e-3,
                format!("raw {raw:.1e}, mass fd {fd:.1e} over {} points", pts.len()),
            )),
            Err(e) => out.push(check(&format!("{case}(3,4,7) three routes"), false, e.to_string())),
        }
    }

    let fd = NonlinearityParams::with_case(3.0, 5.0, 7.0, Case::FD).expect("valid exponents");
    let df = NonlinearityParams::with_case(3.0, 5.0, 7.0, Case::DF).expect("valid exponents");
    let (mut fd_bad, mut df_bad) = (0, 0);
    for i in 0..10 {
        let g = -5.0 + 10.0 * i as f64 / 9.0;
        let star = omega_star(&fd, g).unwrap_or(f64::NAN);
        for k in 1..=10 {
            let w = star * k as f64 / 11.0;
            fd_bad += usize::from(!matches!(eval_j(&fd, w, g), Ok(v) if v.j > 0.0));
            let w = 0.05 + (10.0 - 0.05) * k as f64 / 10.0;
            df_bad += usize::from(!matches!(eval_j(&df, w, g), Ok(v) if v.j < 0.0));
        }
    }
    out.push(check("FD(3,5,7): J > 0 on existence region (q <= 5)", fd_bad == 0, format!("{fd_bad} violations")));
    out.push(check("DF(3,5,7): J < 0 everywhere (q >= 5)", df_bad == 0, format!("{df_bad} violations")));

    let pos = NonlinearityParams::with_case(1.3, 1.8, 2.5, Case::DF).expect("valid exponents");
    let neg = NonlinearityParams::with_case(2.2, 2.8, 4.0, Case::DF).expect("valid exponents");
    let signs: Vec<(f64, f64)> = [-10.0, 0.0, 10.0]
        .iter()
        .map(|&g| {
            let p = eval_j0(&pos, g).map(|v| v.j).unwrap_or(f64::NAN);
            let n = eval_j0(&neg, g).map(|v| v.j).unwrap_or(f64::NAN);
            (p, n)
        })
        .collect();
    out.push(check(
        "J(0, gamma) > 0 when 2q + r < 7",
        signs.iter().all(|s| s.0 > 0.0),
        format!("{:?}", signs.iter().map(|s| s.0).collect::<Vec<_>>()),
    ));
    out.push(check(
        "J(0, gamma) < 0 when 2p + q > 7",
        signs.iter().all(|s| s.1 < 0.0),
        format!("{:?}", signs.iter().map(|s| s.1).collect::<Vec<_>>()),
    ));
    out
}
