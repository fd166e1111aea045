//! Symbolic limits of `J` as `omega -> 0, inf` and `gamma -> +-inf`, the
//! sign guarantees that hold on whole regions, and the power-law rates of
//! `J` in terms of the amplitude `a`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Case, NonlinearityParams};
use crate::profile::find_a;
use crate::stability::eval_j;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LimitClass {
    NegInfinity,
    FiniteNegative,
    ZeroMinus,
    ExactZero,
    ZeroPlus,
    FinitePositive,
    PosInfinity,
}

impl LimitClass {
    /// Sign of the values approaching the limit (0 for `ExactZero`).
    pub fn sign(self) -> f64 {
        match self {
            LimitClass::NegInfinity | LimitClass::FiniteNegative | LimitClass::ZeroMinus => -1.0,
            LimitClass::ExactZero => 0.0,
            _ => 1.0,
        }
    }

    fn by_sign(sign: f64, pos: LimitClass, neg: LimitClass) -> LimitClass {
        if sign > 0.0 {
            pos
        } else {
            neg
        }
    }
}

impl fmt::Display for LimitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitClass::NegInfinity => "-inf",
            LimitClass::FiniteNegative => "finite < 0",
            LimitClass::ZeroMinus => "0-",
            LimitClass::ExactZero => "0",
            LimitClass::ZeroPlus => "0+",
            LimitClass::FinitePositive => "finite > 0",
            LimitClass::PosInfinity => "+inf",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    OmegaToZero,
    OmegaToInf,
    GammaToInf,
    GammaToNegInf,
}

impl Direction {
    pub const ALL: [Direction; 4] =
        [Direction::OmegaToZero, Direction::OmegaToInf, Direction::GammaToInf, Direction::GammaToNegInf];
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::OmegaToZero => "omega -> 0",
            Direction::OmegaToInf => "omega -> inf",
            Direction::GammaToInf => "gamma -> inf",
            Direction::GammaToNegInf => "gamma -> -inf",
        })
    }
}

const SEVEN_THIRDS: f64 = 7.0 / 3.0;

fn unsupported(params: &NonlinearityParams, direction: Direction) -> Error {
    Error::Domain(format!("no limit statement for {direction} in the {} case", params.case()))
}

fn undetermined(params: &NonlinearityParams, direction: Direction) -> Error {
    Error::Unsupported(format!(
        "the limit for {direction} is not determined for {} with p = {}, q = {}, r = {}",
        params.case(),
        params.p,
        params.q,
        params.r
    ))
}

/// `omega -> 0` when the lowest power is focusing. `sign_at_gamma0` is the
/// sign of the `p = 5, gamma = 0` branch, which differs between FF and FD.
fn omega_to_zero_focusing(params: &NonlinearityParams, gamma: f64, sign_at_gamma0: f64) -> LimitClass {
    use LimitClass::*;
    let NonlinearityParams { p, q, r, .. } = *params;
    if p > 5.0 {
        NegInfinity
    } else if p == 5.0 {
        if gamma != 0.0 {
            let s = gamma.signum();
            if q > 9.0 {
                LimitClass::by_sign(s, ZeroPlus, ZeroMinus)
            } else if q == 9.0 {
                LimitClass::by_sign(s, FinitePositive, FiniteNegative)
            } else {
                LimitClass::by_sign(s, PosInfinity, NegInfinity)
            }
        } else if r > 9.0 {
            LimitClass::by_sign(sign_at_gamma0, ZeroPlus, ZeroMinus)
        } else if r == 9.0 {
            LimitClass::by_sign(sign_at_gamma0, FinitePositive, FiniteNegative)
        } else {
            LimitClass::by_sign(sign_at_gamma0, PosInfinity, NegInfinity)
        }
    } else if p > SEVEN_THIRDS {
        PosInfinity
    } else if p == SEVEN_THIRDS {
        FinitePositive
    } else {
        ZeroPlus
    }
}

/// `omega -> inf` when the highest power is focusing. At `r = 5` the limit
/// is `0-` on `gamma > 0` (FF) or `gamma >= 0` (DF) and `0+` otherwise.
fn omega_to_inf_focusing(params: &NonlinearityParams, gamma: f64) -> LimitClass {
    use LimitClass::*;
    let r = params.r;
    if r > 5.0 {
        ZeroMinus
    } else if r == 5.0 {
        let negative = match params.case() {
            Case::DF => gamma >= 0.0,
            _ => gamma > 0.0,
        };
        if negative {
            ZeroMinus
        } else {
            ZeroPlus
        }
    } else if r > SEVEN_THIRDS {
        ZeroPlus
    } else if r == SEVEN_THIRDS {
        FinitePositive
    } else {
        PosInfinity
    }
}

fn gamma_to_inf_focusing(params: &NonlinearityParams) -> LimitClass {
    use LimitClass::*;
    let NonlinearityParams { q, r, .. } = *params;
    let guarded = params.case() == Case::FF;
    if r < SEVEN_THIRDS {
        PosInfinity
    } else if r == SEVEN_THIRDS {
        FinitePositive
    } else if r + 2.0 * q < 7.0 {
        ZeroPlus
    } else if guarded && q >= SEVEN_THIRDS {
        NegInfinity
    } else if r + 2.0 * q == 7.0 {
        ExactZero
    } else {
        ZeroMinus
    }
}

/// Limit of `J` along `direction`. The second argument is the fixed
/// coordinate: `gamma` for the `omega` limits and `omega` for the `gamma`
/// limits (the `gamma` limits hold for every `omega > 0`).
pub fn classify_limit(params: &NonlinearityParams, direction: Direction, fixed: f64) -> Result<LimitClass> {
    use LimitClass::*;
    let NonlinearityParams { p, q, r, .. } = *params;
    let case = params.case();
    match (case, direction) {
        (Case::FF, Direction::OmegaToZero) => Ok(omega_to_zero_focusing(params, fixed, -1.0)),
        (Case::FD, Direction::OmegaToZero) => Ok(omega_to_zero_focusing(params, fixed, 1.0)),
        (Case::FF | Case::DF, Direction::OmegaToInf) => Ok(omega_to_inf_focusing(params, fixed)),
        (Case::FF | Case::DF, Direction::GammaToInf) => Ok(gamma_to_inf_focusing(params)),
        (Case::FF | Case::FD, Direction::GammaToNegInf) => Ok(if q <= 5.0 { ZeroPlus } else { ZeroMinus }),
        (Case::DF | Case::DD, Direction::GammaToNegInf) => Ok(if q < 5.0 { ZeroPlus } else { ZeroMinus }),
        (Case::DF, Direction::OmegaToZero) => {
            if p >= SEVEN_THIRDS {
                Ok(NegInfinity)
            } else if 2.0 * q + r < 7.0 {
                Ok(FinitePositive)
            } else if 2.0 * p + q > 7.0 {
                Ok(FiniteNegative)
            } else {
                Err(undetermined(params, direction))
            }
        }
        (Case::DD, Direction::OmegaToZero) => {
            let gamma1 = crate::boundary::endpoints(params).gamma1.unwrap_or(f64::INFINITY);
            if fixed >= gamma1 {
                return Err(Error::Domain(format!(
                    "no standing waves near omega = 0 for gamma = {fixed} >= gamma1 = {gamma1}"
                )));
            }
            if p >= SEVEN_THIRDS {
                Ok(NegInfinity)
            } else {
                Err(undetermined(params, direction))
            }
        }
        _ => Err(unsupported(params, direction)),
    }
}

/// Exponent `e` in `J = Theta(a^e)` along `direction`, where the proofs
/// supply one. `gamma` selects the `p = 5` / `r = 5` sub-case.
pub fn asymptotic_exponent(params: &NonlinearityParams, direction: Direction, gamma: f64) -> Option<f64> {
    let NonlinearityParams { p, q, r, .. } = *params;
    let case = params.case();
    let lowest_focusing = matches!(case, Case::FF | Case::FD);
    let highest_focusing = matches!(case, Case::FF | Case::DF);
    match direction {
        Direction::OmegaToZero if lowest_focusing => Some(if p != 5.0 {
            (7.0 - 3.0 * p) / 4.0
        } else if gamma != 0.0 {
            (q - 9.0) / 2.0
        } else {
            (r - 9.0) / 2.0
        }),
        Direction::OmegaToInf if highest_focusing => Some(if r != 5.0 {
            (7.0 - 3.0 * r) / 4.0
        } else if gamma != 0.0 {
            (q - 9.0) / 2.0
        } else {
            (p - 9.0) / 2.0
        }),
        Direction::GammaToNegInf => Some(if q != 5.0 { 1.0 } else { (p + 1.0) / 2.0 }),
        Direction::GammaToInf if highest_focusing && q < SEVEN_THIRDS && r + 2.0 * q != 7.0 => {
            Some((7.0 - 3.0 * r) / 4.0)
        }
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignGuarantee {
    /// `J > 0` on the whole existence region.
    AllStablePositiveJ,
    /// `J < 0` for every `omega > 0`, `gamma`.
    AllUnstableNegativeJ,
    /// `J < 0` for all `omega` beyond some `omega_-`, uniformly in `gamma`.
    UnstableForLargeOmega,
    /// `J(0, gamma) > 0` for every `gamma`.
    OmegaZeroPositive,
    /// `J(0, gamma) < 0` for every `gamma`.
    OmegaZeroNegative,
    /// `J(0, gamma) > 0` for large `-gamma` and `< 0` for large `gamma`.
    OmegaZeroSignChange,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Guarantee {
    pub statement: SignGuarantee,
    pub region: String,
}

/// All region-wide sign statements whose hypotheses hold for `params`. An
/// empty list means none apply.
pub fn sign_guarantees(params: &NonlinearityParams) -> Vec<Guarantee> {
    let NonlinearityParams { p, q, r, .. } = *params;
    let mut out = Vec::new();
    let mut push = |statement, region: &str| out.push(Guarantee { statement, region: region.to_string() });
    match params.case() {
        Case::FD if q <= 5.0 => push(SignGuarantee::AllStablePositiveJ, "J > 0 on the existence region (q <= 5)"),
        Case::FF if q > 5.0 => {
            push(SignGuarantee::UnstableForLargeOmega, "J < 0 for omega > omega_-, all gamma (q > 5)")
        }
        Case::DF => {
            if q >= 5.0 {
                push(SignGuarantee::AllUnstableNegativeJ, "J < 0 for all omega > 0, gamma (q >= 5)");
            }
            if 2.0 * q + r < 7.0 {
                push(SignGuarantee::OmegaZeroPositive, "J(0, gamma) > 0 for all gamma (2q + r < 7)");
            }
            if 2.0 * p + q > 7.0 {
                push(SignGuarantee::OmegaZeroNegative, "J(0, gamma) < 0 for all gamma (2p + q > 7)");
            }
            if 2.0 * p + q < 7.0 && 7.0 < 2.0 * q + r {
                push(
                    SignGuarantee::OmegaZeroSignChange,
                    "J(0, gamma) > 0 for large -gamma, < 0 for large gamma (2p + q < 7 < 2q + r)",
                );
            }
        }
        _ => {}
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrendSample {
    /// The moving coordinate (`omega` or `gamma`).
    pub param: f64,
    pub a: f64,
    pub j: f64,
}

/// `J` and `a` along `direction` at the given values of the moving
/// coordinate, holding the other at `fixed`.
pub fn probe(
    params: &NonlinearityParams,
    direction: Direction,
    fixed: f64,
    values: &[f64],
) -> Result<Vec<TrendSample>> {
    values
        .iter()
        .map(|&v| {
            let (omega, gamma) = match direction {
                Direction::OmegaToZero | Direction::OmegaToInf => (v, fixed),
                Direction::GammaToInf | Direction::GammaToNegInf => (fixed, v),
            };
            let a = find_a(params, omega, gamma)?.a;
            let j = eval_j(params, omega, gamma)?.j;
            Ok(TrendSample { param: v, a, j })
        })
        .collect()
}

/// Least-squares slope of `ln|J|` against `ln a`.
pub fn loglog_slope(samples: &[TrendSample]) -> f64 {
    let pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.a.ln(), s.j.abs().ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
