//! The exponent `c = a + bi` of a divisor function, in floating and exact forms.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::factor::is_prime;

/// Complex values produced by the crate (`σ_c(n)`, `p^c`, `ζ(s)`).
pub type ComplexValue = Complex64;

/// Exponent `c = a + bi` with finite parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexExponent {
    pub a: f64,
    pub b: f64,
}

impl ComplexExponent {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return domain(format!("exponent parts must be finite, got {a}+{b}i"));
        }
        Ok(Self { a, b })
    }

    /// A real exponent `a + 0i`.
    pub fn real(a: f64) -> Result<Self> {
        Self::new(a, 0.0)
    }

    pub fn conj(self) -> Self {
        Self {
            a: self.a,
            b: -self.b,
        }
    }

    /// True only for the exact input `0 + 0i`.
    pub fn is_zero(self) -> bool {
        self.a == 0.0 && self.b == 0.0
    }

    pub fn as_complex(self) -> ComplexValue {
        Complex64::new(self.a, self.b)
    }

    pub(crate) fn scale(self, k: f64) -> Self {
        Self {
            a: self.a * k,
            b: self.b * k,
        }
    }
}

impl fmt::Display for ComplexExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_sign_negative() {
            write!(f, "{}-{}i", self.a, -self.b)
        } else {
            write!(f, "{}+{}i", self.a, self.b)
        }
    }
}

/// Parses the `A+Bi` / `A-Bi` syntax: both parts are mandatory and the
/// imaginary part carries an explicit sign and an `i` suffix.
impl FromStr for ComplexExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (re, im) = split_complex(s)?;
        Self::new(re, im)
    }
}

/// Splits `A+Bi` into its two parts.
pub fn split_complex(s: &str) -> Result<(f64, f64)> {
    let t = s.trim();
    let body = t
        .strip_suffix('i')
        .ok_or_else(|| Error::Domain(format!("`{s}`: expected form A+Bi (missing `i` suffix)")))?;
    let bytes = body.as_bytes();
    // the separating sign is the last +/- not at position 0 and not part of an exponent
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(|| {
            Error::Domain(format!(
                "`{s}`: expected form A+Bi (missing sign before imaginary part)"
            ))
        })?;
    let (re_s, im_s) = body.split_at(split);
    let bad = |part: &str| Error::Domain(format!("`{s}`: cannot parse `{part}` as a real number"));
    let re: f64 = re_s.parse().map_err(|_| bad(re_s))?;
    if im_s.len() < 2 {
        return Err(bad(im_s));
    }
    let im: f64 = im_s.parse().map_err(|_| bad(im_s))?;
    if !re.is_finite() || !im.is_finite() {
        return domain(format!("`{s}`: parts must be finite"));
    }
    Ok((re, im))
}

/// Exponent `c = i·(ℓ/m)·π/log p` with purely imaginary value, kept symbolically so
/// zero membership of the range can be decided exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactExponent {
    p: u64,
    ell: i64,
    m: u64,
}

impl ExactExponent {
    /// Builds `i·(ℓ/m)·π/log p`, storing `ℓ/m` in lowest terms.
    pub fn new(p: u64, ell: i64, m: u64) -> Result<Self> {
        if !is_prime(p) {
            return domain(format!("{p} is not prime"));
        }
        if m == 0 {
            return domain("denominator m must be at least 1");
        }
        let g = gcd(ell.unsigned_abs(), m);
        let (ell, m) = if g == 0 {
            (0, 1)
        } else {
            (ell / g as i64, m / g)
        };
        Ok(Self { p, ell, m })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ell(&self) -> i64 {
        self.ell
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// `q = ℓ/m` as a float.
    pub fn q(&self) -> f64 {
        self.ell as f64 / self.m as f64
    }

    /// True when `q = ℓ/m` is an even integer (reduced form has `m = 1`, `ℓ` even).
    pub fn q_is_even_integer(&self) -> bool {
        self.m == 1 && self.ell % 2 == 0
    }

    /// Imaginary part `b = qπ/log p`.
    pub fn b(&self) -> f64 {
        self.q() * PI / (self.p as f64).ln()
    }

    pub fn to_exponent(&self) -> ComplexExponent {
        ComplexExponent {
            a: 0.0,
            b: self.b(),
        }
    }
}

pub(crate) fn gcd(mut x: u64, mut y: u64) -> u64 {
    while y != 0 {
        let r = x % y;
        x = y;
        y = r;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_signed_forms() {
        let c: ComplexExponent = "-1.3+1i".parse().unwrap();
        assert_eq!((c.a, c.b), (-1.3, 1.0));
        let c: ComplexExponent = "0.5-2i".parse().unwrap();
        assert_eq!((c.a, c.b), (0.5, -2.0));
        let c: ComplexExponent = "1e-3+2.5E+1i".parse().unwrap();
        assert_eq!((c.a, c.b), (1e-3, 25.0));
        let c: ComplexExponent = "+0-0i".parse().unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn rejects_missing_parts() {
        for bad in ["-1.3", "1i", "-2i", "1+i", "a+bi", "1+2", "inf+1i", ""] {
            assert!(bad.parse::<ComplexExponent>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_roundtrips() {
        for (a, b) in [(-1.3, 1.0), (0.5, -2.0), (0.0, 0.0)] {
            let c = ComplexExponent::new(a, b).unwrap();
            assert_eq!(c.to_string().parse::<ComplexExponent>().unwrap(), c);
        }
    }

    #[test]
    fn exact_exponent_reduces() {
        let e = ExactExponent::new(5, 4, 2).unwrap();
        assert_eq!((e.ell(), e.m()), (2, 1));
        assert!(e.q_is_even_integer());
        let e = ExactExponent::new(3, 2, 3).unwrap();
        assert_eq!((e.ell(), e.m()), (2, 3));
        assert!(!e.q_is_even_integer());
        let e = ExactExponent::new(7, -6, 4).unwrap();
        assert_eq!((e.ell(), e.m()), (-3, 2));
        assert!(ExactExponent::new(4, 1, 1).is_err());
        assert!(ExactExponent::new(2, 1, 0).is_err());
    }

    #[test]
    fn exact_b_matches_formula() {
        let e = ExactExponent::new(2, 1, 1).unwrap();
        assert!((e.b() - PI / 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(ComplexExponent::new(f64::NAN, 0.0).is_err());
        assert!(ComplexExponent::new(0.0, f64::INFINITY).is_err());
    }
}
