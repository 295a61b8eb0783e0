use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::certified::{CertifiedReal, EPS};
use crate::error::{Error, Result};
use crate::zeta::zeta_real;

/// `F(x) = ζ(x) - (1 + 2^{-x})/(1 - 2^{-x-1} - 2^{-3x-1})` with a certified bound.
pub fn eq2_difference(x: f64, tol: f64) -> Result<CertifiedReal> {
    let z = zeta_real(x, tol)?;
    let r = rational_part(x);
    Ok(CertifiedReal::new(
        z.value - r,
        z.error_bound + 8.0 * EPS * (r + z.value),
    ))
}

fn rational_part(x: f64) -> f64 {
    let t = 2f64.powf(-x);
    (1.0 + t) / (1.0 - t / 2.0 - t * t * t / 2.0)
}

/// `(3·2^x + 1) ln 2 / (2(2^x - 1)^2)`, an upper bound for `F'(x)` that decreases
/// in `x`.
pub fn eq2_difference_slope_bound(x: f64) -> f64 {
    let u = 2f64.powf(x);
    (3.0 * u + 1.0) * std::f64::consts::LN_2 / (2.0 * (u - 1.0).powi(2))
}

/// A grid `lo, lo + step, …` of `points` nodes used to certify `F < -margin` at
/// the nodes and hence `F < 0` on `(lo, hi]`, given `F' ≤ deriv_bound` there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NegativityCheck {
    pub lo: Rational64,
    pub hi: Rational64,
    pub step: Rational64,
    pub points: u32,
    pub margin: Rational64,
    pub deriv_bound: Rational64,
}

impl NegativityCheck {
    /// `(3.02, 3.22]`: 401 nodes `3.02 + n/2000`, margin `1/10000`, slope `0.2`.
    pub fn lower_interval() -> Self {
        NegativityCheck {
            lo: Rational64::new(302, 100),
            hi: Rational64::new(322, 100),
            step: Rational64::new(1, 2000),
            points: 401,
            margin: Rational64::new(1, 10_000),
            deriv_bound: Rational64::new(1, 5),
        }
    }

    /// `(3.22, 5)`: 128 nodes `3.22 + 7n/500`, margin `7/1000`, slope `0.5`.
    pub fn upper_interval() -> Self {
        NegativityCheck {
            lo: Rational64::new(322, 100),
            hi: Rational64::new(5, 1),
            step: Rational64::new(7, 500),
            points: 128,
            margin: Rational64::new(7, 1000),
            deriv_bound: Rational64::new(1, 2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifiedNegativityReport {
    pub lo: f64,
    pub hi: f64,
    pub grid_points: u32,
    pub step: f64,
    pub margin: f64,
    pub derivative_bound: f64,
    /// Largest certified upper bound of `F` over the nodes, including the
    /// allowance for rounding the nodes down to binary64.
    pub max_grid_value: f64,
    pub max_zeta_error: f64,
    pub verdict: bool,
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}

/// Evaluates `F` at every node with `ζ` accurate to `margin/10`.
///
/// The verdict is true when every node value is certified below `-margin`; the
/// slope bound then carries negativity across each cell. Nodes are rounded down
/// to binary64 so that every `x` in a cell lies to the right of its evaluated
/// node.
pub fn verify_negative(check: &NegativityCheck) -> Result<VerifiedNegativityReport> {
    let zero = Rational64::from_integer(0);
    let NegativityCheck {
        lo,
        hi,
        step,
        points,
        margin,
        deriv_bound,
    } = *check;
    if margin <= zero || step <= zero || points == 0 || hi <= lo {
        return precondition("need margin > 0, step > 0, points > 0 and lo < hi");
    }
    if step * deriv_bound > margin {
        return precondition(format!(
            "grid too coarse: step·bound = {} exceeds margin {}",
            step * deriv_bound,
            margin
        ));
    }
    let last = lo + step * Rational64::from_integer(points as i64 - 1);
    if last + step < hi {
        return precondition(format!("grid ends at {last} and does not reach {hi}"));
    }
    let lo_f = to_f64(lo);
    let bound_f = to_f64(deriv_bound);
    if eq2_difference_slope_bound(lo_f.next_down()) > bound_f {
        return precondition(format!(
            "slope bound {deriv_bound} is below the majorant {} at the left end",
            eq2_difference_slope_bound(lo_f)
        ));
    }
    let margin_f = to_f64(margin);
    let tol = margin_f / 10.0;
    let mut max_grid_value = f64::NEG_INFINITY;
    let mut max_zeta_error: f64 = 0.0;
    for n in 0..points {
        let node = lo + step * Rational64::from_integer(n as i64);
        let x = to_f64(node).next_down();
        let f = eq2_difference(x, tol)?;
        max_zeta_error = max_zeta_error.max(f.error_bound);
        let shift = 3.0 * EPS * x * bound_f;
        max_grid_value = max_grid_value.max(f.hi() + shift);
    }
    Ok(VerifiedNegativityReport {
        lo: lo_f,
        hi: to_f64(hi),
        grid_points: points,
        step: to_f64(step),
        margin: margin_f,
        derivative_bound: bound_f,
        max_grid_value,
        max_zeta_error,
        verdict: max_grid_value < -margin_f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_at_left_end() {
        let f = eq2_difference(3.02, 1e-12).unwrap();
        assert!(f.hi() < -1e-4, "{f}");
        assert!(eq2_difference(1.0, 1e-9).is_err());
        // F is positive near the pole
        assert!(eq2_difference(1.5, 1e-12).unwrap().lo() > 0.0);
    }

    #[test]
    fn slope_bounds() {
        assert!(eq2_difference_slope_bound(3.02) < 0.2);
        assert!(eq2_difference_slope_bound(3.22) < 0.5);
        for i in 1..100 {
            let x = 1.0 + 0.05 * i as f64;
            assert!(eq2_difference_slope_bound(x + 0.05) < eq2_difference_slope_bound(x));
        }
    }

    #[test]
    fn slope_bound_dominates_finite_differences() {
        let h = 1e-4;
        for i in 0..=200 {
            let x = 3.02 + 0.01 * i as f64;
            let d = (eq2_difference(x + h, 1e-12).unwrap().value
                - eq2_difference(x, 1e-12).unwrap().value)
                / h;
            assert!(d <= eq2_difference_slope_bound(x), "x = {x}");
        }
    }

    #[test]
    fn presets_certify() {
        for check in [
            NegativityCheck::lower_interval(),
            NegativityCheck::upper_interval(),
        ] {
            let r = verify_negative(&check).unwrap();
            assert!(r.verdict, "{r:?}");
            assert!(r.max_zeta_error <= r.margin / 10.0);
        }
        let r = verify_negative(&NegativityCheck::lower_interval()).unwrap();
        assert_eq!(r.grid_points, 401);
        assert_eq!(r.step, 0.0005);
    }

    #[test]
    fn large_margin_fails() {
        let check = NegativityCheck {
            margin: Rational64::from_integer(10),
            ..NegativityCheck::lower_interval()
        };
        assert!(!verify_negative(&check).unwrap().verdict);
    }

    #[test]
    fn bad_grids_are_rejected() {
        let base = NegativityCheck::lower_interval();
        let coarse = NegativityCheck {
            step: Rational64::new(1, 1000),
            points: 201,
            ..base
        };
        assert!(matches!(
            verify_negative(&coarse),
            Err(Error::Precondition(_))
        ));
        let short = NegativityCheck {
            points: 399,
            ..base
        };
        assert!(matches!(
            verify_negative(&short),
            Err(Error::Precondition(_))
        ));
        let weak = NegativityCheck {
            deriv_bound: Rational64::new(1, 10),
            margin: Rational64::new(1, 20_000),
            ..base
        };
        assert!(matches!(
            verify_negative(&weak),
            Err(Error::Precondition(_))
        ));
    }
}
