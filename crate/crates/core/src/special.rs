//! Beta and digamma functions and the closed forms built from them.

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {x}")))
    }
}

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Digamma `psi(x)` for `x > 0`: shift up past 10, then the asymptotic series.
pub fn digamma(mut x: f64) -> f64 {
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Bernoulli terms B_{2k} / (2k): 1/12, -1/120, 1/252, -1/240, 1/132, -691/32760, 1/12.
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    shift + x.ln() - 0.5 / x - series
}

/// `B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y)`.
pub fn beta_fn(x: f64, y: f64) -> Result<f64> {
    check_positive("x", x)?;
    check_positive("y", y)?;
    Ok((ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)).exp())
}

/// `d/dx B(x, y) = B(x, y) (psi(x) - psi(x + y))`.
pub fn dbeta_dx(x: f64, y: f64) -> Result<f64> {
    Ok(beta_fn(x, y)? * (digamma(x) - digamma(x + y)))
}

/// `H(x, y) = int_0^1 t^{x-1} (1 - t^y) / (1 - t)^{3/2} dt`, via its Beta form.
pub fn h_fn(x: f64, y: f64) -> Result<f64> {
    check_positive("x", x)?;
    check_positive("y", y)?;
    Ok(-(2.0 * x - 1.0) * beta_fn(x, 0.5)? + (2.0 * x + 2.0 * y - 1.0) * beta_fn(x + y, 0.5)?)
}

/// Closed form of
/// `int_0^1 [-(5-p)(1 - s^P) + (5-q)(1 - s^Q)] / (s^P - s^Q)^{3/2} ds`
/// with `P = (p-1)/2`, `Q = (q-1)/2`. Finite only for `p < 7/3`.
pub fn two_power_integral(p: f64, q: f64) -> Result<f64> {
    if !(p > 1.0 && q > p && q.is_finite()) {
        return Err(Error::Domain(format!("need 1 < p < q, got p = {p}, q = {q}")));
    }
    if p >= 7.0 / 3.0 {
        return Err(Error::Domain(format!("integral diverges for p >= 7/3, got p = {p}")));
    }
    let factor = 7.0 - 2.0 * p - q;
    if factor == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * factor / (q - p) * beta_fn((7.0 - 3.0 * p) / (2.0 * (q - p)), 0.5)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaDerivBounds {
    pub lower: f64,
    pub upper: f64,
}

impl BetaDerivBounds {
    pub fn contains_strictly(&self, v: f64) -> bool {
        self.lower < v && v < self.upper
    }
}

/// Bounds on `d/dx B(b + 1/2, 1/2)`:
/// `-B(b+1/2,1/2)/(2b) < . < -B(b+1/2,1/2)/(2b+1)`.
pub fn beta_deriv_bounds(b: f64) -> Result<BetaDerivBounds> {
    check_positive("b", b)?;
    let beta = beta_fn(b + 0.5, 0.5)?;
    Ok(BetaDerivBounds { lower: -beta / (2.0 * b), upper: -beta / (2.0 * b + 1.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn gamma_known_values() {
        assert!(ln_gamma(1.0).abs() < 1e-15);
        assert!(ln_gamma(2.0).abs() < 1e-15);
        assert!((ln_gamma(0.5) - 0.5 * PI.ln()).abs() < 1e-14);
        assert!(rel(ln_gamma(10.0), 362_880f64.ln()) < 1e-14);
        assert!(rel(ln_gamma(0.1), 9.513_507_698_668_732f64.ln()) < 1e-13);
    }

    #[test]
    fn digamma_known_values() {
        let euler = 0.577_215_664_901_532_9;
        assert!((digamma(1.0) + euler).abs() < 1e-14);
        assert!((digamma(0.5) + euler + 2.0 * 2f64.ln()).abs() < 1e-14);
        assert!((digamma(2.0) - (1.0 - euler)).abs() < 1e-14);
        assert!((digamma(100.0) - 4.600_161_852_738_087).abs() < 1e-13);
    }

    #[test]
    fn beta_values() {
        assert!(rel(beta_fn(0.5, 0.5).unwrap(), PI) < 1e-13);
        assert!(rel(beta_fn(1.0, 0.5).unwrap(), 2.0) < 1e-13);
        assert!(rel(beta_fn(2.0, 0.5).unwrap(), 4.0 / 3.0) < 1e-13);
        assert!(rel(beta_fn(3.0, 4.0).unwrap(), 1.0 / 60.0) < 1e-13);
        assert!(beta_fn(0.0, 1.0).is_err());
        assert!(beta_fn(1.0, -2.0).is_err());
    }

    #[test]
    fn dbeta_values() {
        assert!((dbeta_dx(1.0, 1.0).unwrap() + 1.0).abs() < 1e-13);
        for (x, y) in [(0.7, 0.5), (2.3, 1.1), (0.2, 3.0)] {
            let h = 1e-5 * x;
            let fd = (beta_fn(x + h, y).unwrap() - beta_fn(x - h, y).unwrap()) / (2.0 * h);
            assert!(rel(dbeta_dx(x, y).unwrap(), fd) < 1e-7);
        }
    }

    #[test]
    fn h_values() {
        assert!((h_fn(0.5, 0.5).unwrap() - 2.0).abs() < 1e-13);
        assert!((h_fn(1.0, 1.0).unwrap() - 2.0).abs() < 1e-13);
        assert!(h_fn(-1.0, 1.0).is_err());
    }

    #[test]
    fn two_power_values() {
        assert_eq!(two_power_integral(2.0, 3.0).unwrap(), 0.0);
        let b = beta_fn(0.25, 0.5).unwrap();
        assert!(rel(two_power_integral(2.0, 4.0).unwrap(), -b) < 1e-14);
        assert!((b - 5.244_115_108_584_24).abs() < 1e-10);
        assert!(two_power_integral(1.5, 2.0).unwrap() > 0.0);
        assert!(two_power_integral(7.0 / 3.0, 3.0).is_err());
    }

    #[test]
    fn beta_bounds() {
        for b in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let bounds = beta_deriv_bounds(b).unwrap();
            assert!(bounds.upper < 0.0);
            assert!(bounds.contains_strictly(dbeta_dx(b + 0.5, 0.5).unwrap()), "b = {b}");
        }
        let small = beta_deriv_bounds(1.0).unwrap();
        let large = beta_deriv_bounds(1e3).unwrap();
        let gap = |b: BetaDerivBounds| (b.upper - b.lower) / b.lower.abs();
        assert!(gap(large) < gap(small) && gap(large) < 1e-3);
    }
}
