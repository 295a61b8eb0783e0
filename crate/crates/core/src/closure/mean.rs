use serde::{Deserialize, Serialize};

use crate::certified::CompensatedSum;
use crate::error::{domain, Error, Result};
use crate::exponent::{ComplexExponent, ComplexValue};
use crate::sigma::power_unchecked;
use crate::zeta::zeta;

/// Largest `x` accepted by [`partial_sum`].
pub const PARTIAL_SUM_CAP: u64 = 10_000_000;

const ZETA_TOL: f64 = 1e-12;

/// `Σ_{n≤x} σ_c(n)`, computed as `Σ_{k≤x} ⌊x/k⌋ k^c`.
pub fn partial_sum(c: ComplexExponent, x: u64) -> Result<ComplexValue> {
    if x > PARTIAL_SUM_CAP {
        return Err(Error::Resource(format!(
            "partial sums are limited to x <= {PARTIAL_SUM_CAP}"
        )));
    }
    let mut acc = CompensatedSum::default();
    for k in 1..=x {
        acc.add(power_unchecked(k as f64, c) * (x / k) as f64);
    }
    Ok(acc.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanValueReport {
    pub c: ComplexExponent,
    pub x: u64,
    pub partial_sum: ComplexValue,
    /// `x·ζ(1 - c)`
    pub zeta_term: ComplexValue,
    pub deviation: f64,
    /// `ζ(-a) + x^{1+a}/(-a)`
    pub certified_bound: f64,
    pub within_bound: bool,
}

fn check_convergent(c: ComplexExponent) -> Result<()> {
    if !(c.a < -1.0) {
        return domain(format!("mean values need a < -1, got a = {}", c.a));
    }
    Ok(())
}

/// Compares `Σ_{n≤x} σ_c(n)` with `xζ(1 - c)`; the difference is at most
/// `Σ_k k^a + x·Σ_{k>x} k^{a-1}`.
pub fn mean_value_report(c: ComplexExponent, x: u64) -> Result<MeanValueReport> {
    check_convergent(c)?;
    if x == 0 {
        return domain("x must be at least 1");
    }
    let s = partial_sum(c, x)?;
    let z = zeta(ComplexValue::new(1.0, 0.0) - c.as_complex(), ZETA_TOL)?;
    let zeta_term = z.value * x as f64;
    let deviation = (s - zeta_term).norm();
    let zeta_a = zeta(ComplexValue::new(-c.a, 0.0), ZETA_TOL)?;
    let xf = x as f64;
    let certified_bound = zeta_a.value.re + zeta_a.error_bound + xf.powf(1.0 + c.a) / -c.a;
    Ok(MeanValueReport {
        c,
        x,
        partial_sum: s,
        zeta_term,
        deviation,
        certified_bound,
        within_bound: deviation <= certified_bound + xf * z.error_bound,
    })
}

/// The Cesàro mean `(1/n_max) Σ_{n≤n_max} σ_c(n)`; this is not the geometric
/// centroid of the closure.
pub fn empirical_centroid(c: ComplexExponent, n_max: u64) -> Result<ComplexValue> {
    check_convergent(c)?;
    if n_max == 0 {
        return domain("n_max must be at least 1");
    }
    Ok(partial_sum(c, n_max)? / n_max as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma::sigma_table;
    use num_complex::Complex64;

    fn c(a: f64, b: f64) -> ComplexExponent {
        ComplexExponent::new(a, b).unwrap()
    }

    #[test]
    fn partial_sum_examples() {
        assert_eq!(
            partial_sum(c(0.7, 2.0), 1).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        let s = partial_sum(c(-2.0, 0.0), 3).unwrap();
        assert!((s.re - 121.0 / 36.0).abs() < 1e-15 && s.im == 0.0);
        assert_eq!(partial_sum(c(0.0, 0.0), 10).unwrap().re, 27.0);
        assert_eq!(
            partial_sum(c(0.0, 0.0), 0).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert!(partial_sum(c(-2.0, 0.0), PARTIAL_SUM_CAP + 1).is_err());
    }

    #[test]
    fn rearrangement_matches_direct_sum() {
        for cc in [c(-2.0, 2.0), c(0.5, -1.0), c(-1.3, 1.0), c(1.0, 0.0)] {
            let t = sigma_table(10_000, cc);
            let mut direct = Complex64::new(0.0, 0.0);
            for x in 1..=10_000u64 {
                direct += t[x as usize];
                if x % 1_111 == 0 || x == 10_000 {
                    let s = partial_sum(cc, x).unwrap();
                    assert!((s - direct).norm() <= 1e-8 * direct.norm(), "{cc} x={x}");
                }
            }
        }
    }

    #[test]
    fn mean_value_examples() {
        let r = mean_value_report(c(-2.0, 2.0), 100_000).unwrap();
        assert!(r.within_bound && r.deviation <= r.certified_bound);
        assert!((r.certified_bound - (std::f64::consts::PI.powi(2) / 6.0 + 0.5e-5)).abs() < 1e-9);
        let r = mean_value_report(c(-1.3, 1.0), 10_000).unwrap();
        assert!(r.within_bound);
        assert!(mean_value_report(c(-1.0, 1.0), 10).is_err());
    }

    #[test]
    fn centroid_examples() {
        assert_eq!(
            empirical_centroid(c(-2.0, 0.0), 1).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        let m = empirical_centroid(c(-2.0, 0.0), 100_000).unwrap();
        assert!((m.re - 1.202_056_903_159_594).abs() < 2.0 * 1.645 / 1e5);
        assert!(empirical_centroid(c(-0.5, 0.0), 10).is_err());
    }
}
