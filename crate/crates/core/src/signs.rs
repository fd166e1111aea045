//! Descartes' rule of signs for generalized polynomials `sum c_i s^{e_i}` with
//! real exponents, and the two-power ratio `h`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedPolynomial {
    terms: Vec<(f64, f64)>,
}

impl GeneralizedPolynomial {
    /// Terms are `(coefficient, exponent)`; exponents must be strictly
    /// increasing and coefficients nonzero.
    pub fn new(terms: Vec<(f64, f64)>) -> Result<Self> {
        if terms.iter().any(|&(c, e)| c == 0.0 || !c.is_finite() || !e.is_finite()) {
            return Err(Error::Domain("coefficients must be nonzero and finite".into()));
        }
        if terms.windows(2).any(|w| w[1].1 <= w[0].1) {
            return Err(Error::Domain("exponents must be strictly increasing".into()));
        }
        Ok(Self { terms })
    }

    /// Build from arbitrary terms: drop zero coefficients, merge equal exponents.
    pub fn from_unsorted(mut terms: Vec<(f64, f64)>) -> Result<Self> {
        terms.sort_by(|a, b| a.1.total_cmp(&b.1));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(terms.len());
        for (c, e) in terms {
            match merged.last_mut() {
                Some(last) if last.1 == e => last.0 += c,
                _ => merged.push((c, e)),
            }
        }
        merged.retain(|&(c, _)| c != 0.0);
        Self::new(merged)
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.terms.iter().map(|&(c, e)| c * crate::landscape::spow(s, e)).sum()
    }
}

/// Number of sign changes in the coefficient sequence.
pub fn sign_changes(gp: &GeneralizedPolynomial) -> usize {
    gp.terms.windows(2).filter(|w| w[0].0 * w[1].0 < 0.0).count()
}

/// Positive roots located by sign changes of `gp` on an `n`-point geometric
/// grid spanning `(s_max * 1e-12, s_max]`, each refined by bisection.
pub fn positive_roots_sampled(gp: &GeneralizedPolynomial, s_max: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let ln_lo = (s_max * 1e-12).ln();
    let ln_hi = s_max.ln();
    let grid: Vec<f64> = (0..n)
        .map(|k| (ln_lo + (ln_hi - ln_lo) * k as f64 / (n - 1) as f64).exp())
        .collect();
    let mut roots = Vec::new();
    let mut prev = (grid[0], gp.eval(grid[0]));
    if prev.1 == 0.0 {
        roots.push(prev.0);
    }
    for &s in &grid[1..] {
        let v = gp.eval(s);
        if v == 0.0 {
            roots.push(s);
        } else if prev.1 != 0.0 && prev.1.signum() != v.signum() {
            let (mut lo, mut hi, flo) = (prev.0, s, prev.1);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = gp.eval(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev = (s, v);
    }
    roots
}

pub fn count_positive_roots_sampled(gp: &GeneralizedPolynomial, s_max: f64, n: usize) -> usize {
    positive_roots_sampled(gp, s_max, n).len()
}

/// `h(x) = (x^{p1} - x^{q1}) / (x^{p2} - x^{q2})` on `(0, 1]`; at `x = 1` the
/// removable singularity is filled with `(q1 - p1) / (q2 - p2)`.
pub fn ratio_h(x: f64, p1: f64, q1: f64, p2: f64, q2: f64) -> f64 {
    if x == 1.0 {
        return (q1 - p1) / (q2 - p2);
    }
    let ln_x = x.ln();
    // x^p - x^q = -x^p expm1((q - p) ln x), which stays accurate as x -> 1.
    ((p1 - p2) * ln_x).exp() * ((q1 - p1) * ln_x).exp_m1() / ((q2 - p2) * ln_x).exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn counts_on_examples() {
        let gp = GeneralizedPolynomial::new(vec![(1.0, 0.5), (-2.0, 1.3), (1.0, 2.7)]).unwrap();
        assert_eq!(sign_changes(&gp), 2);
        let pos = GeneralizedPolynomial::new(vec![(1.0, 0.0), (3.0, 1.5)]).unwrap();
        assert_eq!(sign_changes(&pos), 0);
        assert_eq!(count_positive_roots_sampled(&pos, 10.0, 400), 0);
        let line = GeneralizedPolynomial::new(vec![(-1.0, 0.0), (1.0, 1.0)]).unwrap();
        let roots = positive_roots_sampled(&line, 10.0, 400);
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn u_prime_coefficients_ff_positive_gamma() {
        // U'(s) = omega - s^P + gamma s^Q - s^R in the FF case.
        let gp = GeneralizedPolynomial::new(vec![(0.3, 0.0), (-1.0, 0.5), (0.8, 1.0), (-1.0, 1.5)])
            .unwrap();
        assert_eq!(sign_changes(&gp), 3);
    }

    #[test]
    fn rejects_bad_terms() {
        assert!(GeneralizedPolynomial::new(vec![(1.0, 1.0), (1.0, 1.0)]).is_err());
        assert!(GeneralizedPolynomial::new(vec![(0.0, 1.0)]).is_err());
        let merged = GeneralizedPolynomial::from_unsorted(vec![(1.0, 2.0), (2.0, 1.0), (-1.0, 2.0)])
            .unwrap();
        assert_eq!(merged.terms(), &[(2.0, 1.0)]);
    }

    #[test]
    fn ratio_identity_and_limit() {
        for x in [0.01, 0.3, 0.9] {
            assert!((ratio_h(x, 0.5, 2.0, 0.5, 2.0) - 1.0).abs() < 1e-14);
        }
        let limit = (3.0 - 1.0) / (2.5 - 0.5);
        assert!((ratio_h(1.0 - 1e-9, 1.0, 3.0, 0.5, 2.5) - limit).abs() < 1e-6);
        assert_eq!(ratio_h(1.0, 1.0, 3.0, 0.5, 2.5), limit);
    }

    proptest! {
        #[test]
        fn sampled_roots_never_exceed_sign_changes(
            raw in prop::collection::vec((-5.0f64..5.0, 0.0f64..10.0), 1..=5),
        ) {
            if let Ok(gp) = GeneralizedPolynomial::from_unsorted(raw) {
                prop_assert!(count_positive_roots_sampled(&gp, 10.0, 500) <= sign_changes(&gp));
            }
        }

        #[test]
        fn ratio_increasing_when_exponents_dominate(
            p2 in 0.0f64..3.0, dp in 0.0f64..2.0, dq2 in 0.1f64..3.0, extra in 0.05f64..3.0,
        ) {
            let p1 = p2 + dp;
            let q2 = p2 + dq2;
            let q1 = (q2 + extra).max(p1 + 0.05);
            let limit = (q1 - p1) / (q2 - p2);
            let mut prev = ratio_h(0.005, p1, q1, p2, q2);
            for i in 2..200 {
                let x = i as f64 / 200.0;
                let h = ratio_h(x, p1, q1, p2, q2);
                prop_assert!(h > prev, "x = {x}: {h} <= {prev}");
                prop_assert!(h <= limit * (1.0 + 1e-12));
                prev = h;
            }
        }
    }
}
