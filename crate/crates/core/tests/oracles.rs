//! Library values against the independent reference code in `common`.

mod common;

use common::Model;
use triple_nls::profile::find_a;
use triple_nls::stability::{eval_j, eval_j_raw, mass_q};
use triple_nls::{Case, NonlinearityParams};

fn points() -> Vec<(NonlinearityParams, f64, f64)> {
    let mut out = Vec::new();
    let setups = [
        ((2.0, 3.0, 4.0, Case::FF), [(0.3, 0.0), (1.0, -1.0), (0.2, 1.0)]),
        ((3.0, 5.0, 7.0, Case::FD), [(0.1, 0.0), (0.5, -2.0), (1.0, -4.0)]),
        ((3.0, 5.0, 7.0, Case::DF), [(0.1, 0.0), (1.0, 2.0), (3.0, -2.0)]),
        ((3.0, 4.0, 7.0, Case::DD), [(0.05, -3.0), (0.5, -4.0), (1.0, -5.0)]),
        ((1.5, 2.5, 6.0, Case::FF), [(0.5, -1.0), (2.0, 0.0), (0.1, -3.0)]),
    ];
    for ((p, q, r, case), pts) in setups {
        let prm = NonlinearityParams::with_case(p, q, r, case).unwrap();
        out.extend(pts.iter().map(|&(w, g)| (prm, w, g)));
    }
    out
}

fn model(prm: &NonlinearityParams) -> Model {
    Model::new(prm.p, prm.q, prm.r, prm.a1(), prm.a3())
}

/// `Q = a int_0^1 dt / sqrt((F1(a) - F1(at)))`, with the difference written
/// term by term through `1 - t^k` so nothing cancels near `t = 1`.
fn mass_oracle(m: &Model, gamma: f64, a: f64) -> f64 {
    let terms = [(m.a1, m.p), (-gamma, m.q), (m.a3, m.r)];
    a * common::tanh_sinh_unit(|t, omt| {
        let ln_t = if t > 0.5 { (-omt).ln_1p() } else { t.ln() };
        let diff: f64 = terms
            .iter()
            .map(|&(c, l)| {
                let k = (l - 1.0) / 2.0;
                2.0 * c * a.powf(k) * -(k * ln_t).exp_m1() / (l + 1.0)
            })
            .sum();
        1.0 / diff.sqrt()
    })
}

fn q_oracle(m: &Model, omega: f64, gamma: f64) -> f64 {
    let a = common::first_root(m, omega, gamma).expect("profile exists");
    mass_oracle(m, gamma, a)
}

#[test]
fn amplitude_matches_scan_and_bisection() {
    for (prm, w, g) in points() {
        let lib = find_a(&prm, w, g).unwrap().a;
        let oracle = common::first_root(&model(&prm), w, g).unwrap();
        assert!((lib - oracle).abs() <= 1e-11 * oracle, "{:?} {w} {g}: {lib} vs {oracle}", prm.case());
    }
}

#[test]
fn mass_matches_tanh_sinh() {
    for (prm, w, g) in points() {
        let lib = mass_q(&prm, w, g).unwrap();
        let oracle = q_oracle(&model(&prm), w, g);
        assert!((lib - oracle).abs() <= 1e-9 * oracle, "{:?} {w} {g}: {lib} vs {oracle}", prm.case());
    }
}

#[test]
fn j_matches_derivative_of_independent_mass() {
    for (prm, w, g) in points() {
        let m = model(&prm);
        let h = 1e-3 * w;
        let q = |x: f64| q_oracle(&m, x, g);
        let oracle = (-q(w + 2.0 * h) + 8.0 * q(w + h) - 8.0 * q(w - h) + q(w - 2.0 * h)) / (12.0 * h);
        for v in [eval_j(&prm, w, g).unwrap().j, eval_j_raw(&prm, w, g).unwrap().j] {
            assert!((v - oracle).abs() <= 1e-6 * (1.0 + oracle.abs()), "{:?} {w} {g}: {v} vs {oracle}", prm.case());
        }
    }
}
