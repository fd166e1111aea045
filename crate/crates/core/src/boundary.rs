//! The nonexistence curve `Gamma_ne`, parameterized by the double zero `a` of
//! `U`, its endpoint constants, and the inverse `omega*(gamma)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Case, NonlinearityParams};

/// The `a`-range over which `(omega_ne(a), gamma_ne(a))` traces the curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ValidRange {
    /// No nonexistence curve.
    Empty,
    /// `0 < a <= a_sharp`.
    UpTo(f64),
    /// `0 < a < inf`.
    Unbounded,
    /// `a_b < a < inf`.
    Above(f64),
}

impl ValidRange {
    pub fn contains(&self, a: f64) -> bool {
        match *self {
            ValidRange::Empty => false,
            ValidRange::UpTo(end) => a > 0.0 && a <= end,
            ValidRange::Unbounded => a > 0.0 && a.is_finite(),
            ValidRange::Above(start) => a > start && a.is_finite(),
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            ValidRange::Empty => "empty (solutions exist for every omega > 0)".into(),
            ValidRange::UpTo(end) => format!("0 < a <= {end:.17}"),
            ValidRange::Unbounded => "0 < a < inf".into(),
            ValidRange::Above(start) => format!("{start:.17} < a < inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Endpoints {
    pub endpoint_a: Option<f64>,
    pub gamma1: Option<f64>,
    pub range: ValidRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSample {
    pub a: f64,
    pub omega_ne: f64,
    pub gamma_ne: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryCurve {
    pub samples: Vec<CurveSample>,
    pub endpoint_a: Option<f64>,
    pub gamma1: Option<f64>,
}

/// `(omega_ne(a), gamma_ne(a))`: the point of parameter space at which `a` is
/// a double zero of `U`.
pub fn gamma_omega_ne(params: &NonlinearityParams, a: f64) -> (f64, f64) {
    let NonlinearityParams { p, q, r, .. } = *params;
    let (a1, a3) = (params.a1(), params.a3());
    let ln_a = a.ln();
    let pw = |e: f64| (e * ln_a).exp();
    let omega = 2.0 * a1 * (q - p) / ((q - 1.0) * (p + 1.0)) * pw((p - 1.0) / 2.0)
        - 2.0 * a3 * (r - q) / ((q - 1.0) * (r + 1.0)) * pw((r - 1.0) / 2.0);
    let gamma = (q + 1.0) / (q - 1.0)
        * (a1 * (p - 1.0) / (p + 1.0) * pw((p - q) / 2.0)
            + a3 * (r - 1.0) / (r + 1.0) * pw((r - q) / 2.0));
    (omega, gamma)
}

/// `a_sharp` (FF) or `a_b` (DD), `gamma1`, and the valid `a`-range.
pub fn endpoints(params: &NonlinearityParams) -> Endpoints {
    let NonlinearityParams { p, q, r, .. } = *params;
    let root = |v: f64| v.powf(2.0 / (r - p));
    match params.case() {
        Case::FF => {
            let a = root((q - p) * (p - 1.0) * (r + 1.0) / ((r - q) * (r - 1.0) * (p + 1.0)));
            Endpoints { endpoint_a: Some(a), gamma1: Some(gamma_omega_ne(params, a).1), range: ValidRange::UpTo(a) }
        }
        Case::FD => Endpoints { endpoint_a: None, gamma1: None, range: ValidRange::Unbounded },
        Case::DF => Endpoints { endpoint_a: None, gamma1: None, range: ValidRange::Empty },
        Case::DD => {
            let a = root((q - p) * (r + 1.0) / ((r - q) * (p + 1.0)));
            Endpoints { endpoint_a: Some(a), gamma1: Some(gamma_omega_ne(params, a).1), range: ValidRange::Above(a) }
        }
    }
}

/// The parameter `a` with `gamma_ne(a) = gamma`, by bisection in `ln a`.
pub fn a_on_curve(params: &NonlinearityParams, gamma: f64) -> Result<f64> {
    if !gamma.is_finite() {
        return Err(Error::NotOnCurve { gamma });
    }
    let ends = endpoints(params);
    let gamma_ne = |a: f64| gamma_omega_ne(params, a).1;
    let slack = |g1: f64| 1e-12 * (1.0 + g1.abs());
    // gamma_ne is decreasing on the valid range; bracket with lo having
    // gamma_ne(lo) >= gamma and hi having gamma_ne(hi) <= gamma.
    let (mut lo, mut hi) = match ends.range {
        ValidRange::Empty => return Err(Error::NotOnCurve { gamma }),
        ValidRange::UpTo(end) => {
            let g1 = ends.gamma1.unwrap_or(f64::NAN);
            if gamma < g1 - slack(g1) {
                return Err(Error::NotOnCurve { gamma });
            }
            if gamma <= g1 {
                return Ok(end);
            }
            let mut lo = end / 2.0;
            while gamma_ne(lo) < gamma {
                lo /= 2.0;
                if lo < 1e-300 {
                    return Err(Error::NotOnCurve { gamma });
                }
            }
            (lo, end)
        }
        ValidRange::Unbounded => {
            let mut lo = 1.0;
            while gamma_ne(lo) < gamma {
                lo /= 2.0;
                if lo < 1e-300 {
                    return Err(Error::NotOnCurve { gamma });
                }
            }
            let mut hi = lo * 2.0;
            while gamma_ne(hi) > gamma {
                hi *= 2.0;
                if hi > 1e300 {
                    return Err(Error::NotOnCurve { gamma });
                }
            }
            (lo, hi)
        }
        ValidRange::Above(start) => {
            let g1 = ends.gamma1.unwrap_or(f64::NAN);
            if gamma >= g1 {
                return Err(Error::NotOnCurve { gamma });
            }
            let mut hi = start * 2.0;
            while gamma_ne(hi) > gamma {
                hi *= 2.0;
                if hi > 1e300 {
                    return Err(Error::NotOnCurve { gamma });
                }
            }
            (start, hi)
        }
    };
    for _ in 0..300 {
        let mid = (0.5 * (lo.ln() + hi.ln())).exp();
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * hi {
            break;
        }
        if gamma_ne(mid) >= gamma {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `omega*(gamma)`: the unique `omega` with `(omega, gamma)` on the curve.
pub fn omega_star(params: &NonlinearityParams, gamma: f64) -> Result<f64> {
    let a = a_on_curve(params, gamma)?;
    Ok(gamma_omega_ne(params, a).0)
}

/// `n` samples of the curve for `a` in `[a_min, a_max]` clipped to the valid
/// range, geometrically spaced and ascending in `a`.
pub fn sample_curve(params: &NonlinearityParams, a_min: f64, a_max: f64, n: usize) -> Result<BoundaryCurve> {
    if !(a_min > 0.0 && a_max > a_min && a_max.is_finite()) || n < 2 {
        return Err(Error::Domain(format!("need 0 < a_min < a_max and n >= 2, got [{a_min}, {a_max}], n = {n}")));
    }
    let ends = endpoints(params);
    let (lo, hi, open_lo) = match ends.range {
        ValidRange::Empty => (a_min, a_min, false),
        ValidRange::UpTo(end) => (a_min, a_max.min(end), false),
        ValidRange::Unbounded => (a_min, a_max, false),
        ValidRange::Above(start) if a_min <= start => (start, a_max, true),
        ValidRange::Above(_) => (a_min, a_max, false),
    };
    let mut samples = Vec::new();
    if hi > lo {
        let (l0, l1) = (lo.ln(), hi.ln());
        for k in 0..n {
            let t = if open_lo { (k + 1) as f64 / n as f64 } else { k as f64 / (n - 1) as f64 };
            let a = if k == n - 1 { hi } else { (l0 + (l1 - l0) * t).exp() };
            let (omega_ne, gamma_ne) = gamma_omega_ne(params, a);
            samples.push(CurveSample { a, omega_ne, gamma_ne });
        }
    }
    Ok(BoundaryCurve { samples, endpoint_a: ends.endpoint_a, gamma1: ends.gamma1 })
}
