//! Normalized triple-power nonlinearity
//! `f(u) = a1|u|^{p-1}u - gamma|u|^{q-1}u + a3|u|^{r-1}u` with `|a1| = |a3| = 1`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Sign of an outer coefficient: focusing (+1) or defocusing (-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Focusing,
    Defocusing,
}

impl Sign {
    pub fn from_int(s: i32) -> Result<Self> {
        match s {
            1 => Ok(Sign::Focusing),
            -1 => Ok(Sign::Defocusing),
            _ => Err(Error::Domain(format!("sign must be +1 or -1, got {s}"))),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Focusing => 1.0,
            Sign::Defocusing => -1.0,
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "+1" | "1" | "+" | "f" => Ok(Sign::Focusing),
            "-1" | "-" | "d" => Ok(Sign::Defocusing),
            other => Err(Error::Domain(format!("cannot parse sign {other:?} (use +1/-1 or f/d)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Case {
    FF,
    FD,
    DF,
    DD,
}

impl Case {
    pub fn from_signs(sign1: Sign, sign3: Sign) -> Self {
        match (sign1, sign3) {
            (Sign::Focusing, Sign::Focusing) => Case::FF,
            (Sign::Focusing, Sign::Defocusing) => Case::FD,
            (Sign::Defocusing, Sign::Focusing) => Case::DF,
            (Sign::Defocusing, Sign::Defocusing) => Case::DD,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Case::FF => "FF",
            Case::FD => "FD",
            Case::DF => "DF",
            Case::DD => "DD",
        };
        f.write_str(s)
    }
}

pub fn classify_case(sign1: i32, sign3: i32) -> Result<Case> {
    Ok(Case::from_signs(Sign::from_int(sign1)?, Sign::from_int(sign3)?))
}

/// Exponents `1 < p < q < r` and the signs of the lowest and highest power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonlinearityParams {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub sign1: Sign,
    pub sign3: Sign,
}

impl NonlinearityParams {
    pub fn new(p: f64, q: f64, r: f64, sign1: Sign, sign3: Sign) -> Result<Self> {
        if !(p.is_finite() && q.is_finite() && r.is_finite()) {
            return Err(Error::Domain("exponents must be finite".into()));
        }
        if !(1.0 < p && p < q && q < r) {
            return Err(Error::Domain(format!(
                "exponents must satisfy 1 < p < q < r, got p={p}, q={q}, r={r}"
            )));
        }
        Ok(Self { p, q, r, sign1, sign3 })
    }

    pub fn with_case(p: f64, q: f64, r: f64, case: Case) -> Result<Self> {
        let (s1, s3) = match case {
            Case::FF => (Sign::Focusing, Sign::Focusing),
            Case::FD => (Sign::Focusing, Sign::Defocusing),
            Case::DF => (Sign::Defocusing, Sign::Focusing),
            Case::DD => (Sign::Defocusing, Sign::Defocusing),
        };
        Self::new(p, q, r, s1, s3)
    }

    pub fn case(&self) -> Case {
        Case::from_signs(self.sign1, self.sign3)
    }

    /// `a1` as a real number.
    pub fn a1(&self) -> f64 {
        self.sign1.value()
    }

    /// `a3` as a real number.
    pub fn a3(&self) -> f64 {
        self.sign3.value()
    }
}

/// A point of the parameter half-plane; `gamma = -a2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QueryPoint {
    pub omega: f64,
    pub gamma: f64,
}

/// Result of rescaling `u = kappa v(x/lambda, t/lambda^2)` so that the outer
/// coefficients have unit modulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingReduction {
    pub kappa: f64,
    pub lambda: f64,
    pub normalized: NonlinearityParams,
    pub gamma: f64,
}

pub fn normalize(a1: f64, a2: f64, a3: f64, p: f64, q: f64, r: f64) -> Result<ScalingReduction> {
    if a1 == 0.0 || a3 == 0.0 || !a1.is_finite() || !a3.is_finite() || !a2.is_finite() {
        return Err(Error::Domain(format!(
            "outer coefficients must be finite and nonzero, got a1={a1}, a3={a3}"
        )));
    }
    let sign1 = if a1 > 0.0 { Sign::Focusing } else { Sign::Defocusing };
    let sign3 = if a3 > 0.0 { Sign::Focusing } else { Sign::Defocusing };
    let normalized = NonlinearityParams::new(p, q, r, sign1, sign3)?;

    let (m1, m3) = (a1.abs(), a3.abs());
    // Work in logs so that extreme coefficient ratios do not overflow.
    let ln_kappa = (m1.ln() - m3.ln()) / (r - p);
    let ln_lambda = (m3.ln() - (r - 1.0) / (p - 1.0) * m1.ln()) * (p - 1.0) / (2.0 * (r - p));
    let kappa = ln_kappa.exp();
    let lambda = ln_lambda.exp();
    let c = a2 * ((q - 1.0) * ln_kappa + 2.0 * ln_lambda).exp();

    Ok(ScalingReduction { kappa, lambda, normalized, gamma: -c })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_labels() {
        assert_eq!(classify_case(1, 1).unwrap(), Case::FF);
        assert_eq!(classify_case(1, -1).unwrap(), Case::FD);
        assert_eq!(classify_case(-1, 1).unwrap(), Case::DF);
        assert_eq!(classify_case(-1, -1).unwrap(), Case::DD);
        assert!(classify_case(0, 1).is_err());
        assert!(classify_case(1, 2).is_err());
    }

    #[test]
    fn sign_parsing() {
        assert_eq!("+1".parse::<Sign>().unwrap(), Sign::Focusing);
        assert_eq!("f".parse::<Sign>().unwrap(), Sign::Focusing);
        assert_eq!("-1".parse::<Sign>().unwrap(), Sign::Defocusing);
        assert_eq!("D".parse::<Sign>().unwrap(), Sign::Defocusing);
        assert!("x".parse::<Sign>().is_err());
    }

    #[test]
    fn exponent_ordering_is_enforced() {
        assert!(NonlinearityParams::new(2.0, 3.0, 4.0, Sign::Focusing, Sign::Focusing).is_ok());
        assert!(NonlinearityParams::new(1.0, 3.0, 4.0, Sign::Focusing, Sign::Focusing).is_err());
        assert!(NonlinearityParams::new(3.0, 3.0, 4.0, Sign::Focusing, Sign::Focusing).is_err());
        assert!(NonlinearityParams::new(2.0, 5.0, 4.0, Sign::Focusing, Sign::Focusing).is_err());
        // borderline exponents are fine
        assert!(NonlinearityParams::new(7.0 / 3.0, 5.0, 9.0, Sign::Focusing, Sign::Focusing).is_ok());
    }

    #[test]
    fn normalize_identity() {
        let red = normalize(1.0, -0.7, 1.0, 2.0, 3.0, 4.0).unwrap();
        assert!((red.kappa - 1.0).abs() < 1e-15);
        assert!((red.lambda - 1.0).abs() < 1e-15);
        assert!((red.gamma - 0.7).abs() < 1e-15);
        assert_eq!(red.normalized.case(), Case::FF);
    }

    fn substituted(a: [f64; 3], p: f64, q: f64, r: f64, red: &ScalingReduction) -> [f64; 3] {
        let l2 = red.lambda * red.lambda;
        [
            a[0] * red.kappa.powf(p - 1.0) * l2,
            a[1] * red.kappa.powf(q - 1.0) * l2,
            a[2] * red.kappa.powf(r - 1.0) * l2,
        ]
    }

    #[test]
    fn normalize_kappa_two() {
        let red = normalize(4.0, 0.0, 1.0, 2.0, 3.0, 4.0).unwrap();
        assert!((red.kappa - 2.0).abs() < 1e-14);
        let [b, _, d] = substituted([4.0, 0.0, 1.0], 2.0, 3.0, 4.0, &red);
        assert!((b.abs() - 1.0).abs() < 1e-12);
        assert!((d.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalize_dd_preserves_signs() {
        let red = normalize(-2.0, 1.0, -8.0, 2.0, 3.0, 4.0).unwrap();
        assert_eq!(red.normalized.case(), Case::DD);
        let [b, c, d] = substituted([-2.0, 1.0, -8.0], 2.0, 3.0, 4.0, &red);
        assert!((b + 1.0).abs() < 1e-12);
        assert!((d + 1.0).abs() < 1e-12);
        assert!((red.gamma + c).abs() < 1e-12);
    }

    #[test]
    fn normalize_rejects_zero_outer_coefficients() {
        assert!(normalize(0.0, 1.0, 1.0, 2.0, 3.0, 4.0).is_err());
        assert!(normalize(1.0, 1.0, 0.0, 2.0, 3.0, 4.0).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn normalized_outer_coefficients_have_unit_modulus(
                m1 in 0.1f64..10.0, m3 in 0.1f64..10.0, a2 in -10.0f64..10.0,
                neg1 in any::<bool>(), neg3 in any::<bool>(),
                p in 1.05f64..4.0, dq in 0.2f64..3.0, dr in 0.2f64..3.0,
            ) {
                let a1 = if neg1 { -m1 } else { m1 };
                let a3 = if neg3 { -m3 } else { m3 };
                let (q, r) = (p + dq, p + dq + dr);
                let red = normalize(a1, a2, a3, p, q, r).unwrap();
                let [b, c, d] = substituted([a1, a2, a3], p, q, r, &red);
                prop_assert!((b.abs() - 1.0).abs() <= 1e-12);
                prop_assert!((d.abs() - 1.0).abs() <= 1e-12);
                prop_assert_eq!(b.signum(), a1.signum());
                prop_assert_eq!(d.signum(), a3.signum());
                prop_assert!((red.gamma + c).abs() <= 1e-12 * (1.0 + c.abs()));
            }
        }
    }
}
