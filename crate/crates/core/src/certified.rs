//! Reals with rigorous absolute error bounds and three-valued comparisons.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Unit roundoff for binary64.
pub const EPS: f64 = f64::EPSILON / 2.0;

/// A value together with an absolute error bound; the true quantity lies within
/// `[value - error_bound, value + error_bound]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifiedReal {
    pub value: f64,
    pub error_bound: f64,
}

impl CertifiedReal {
    pub fn new(value: f64, error_bound: f64) -> Self {
        debug_assert!(error_bound >= 0.0 && error_bound.is_finite());
        Self { value, error_bound }
    }

    pub fn exact(value: f64) -> Self {
        Self::new(value, 0.0)
    }

    pub fn lo(&self) -> f64 {
        self.value - self.error_bound
    }

    pub fn hi(&self) -> f64 {
        self.value + self.error_bound
    }

    /// Certified `self < x`.
    pub fn lt(&self, x: f64) -> Truth {
        if self.hi() < x {
            Truth::True
        } else if self.lo() >= x {
            Truth::False
        } else {
            Truth::Indeterminate
        }
    }

    /// Whether the two enclosures overlap.
    pub fn overlaps(&self, other: &CertifiedReal) -> bool {
        (self.value - other.value).abs() <= self.error_bound + other.error_bound
    }
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:e}", self.value, self.error_bound)
    }
}

/// Outcome of a strict inequality evaluated with certified errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Truth {
    True,
    False,
    Indeterminate,
}

impl Truth {
    pub fn is_true(self) -> bool {
        self == Truth::True
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::True => "true",
            Truth::False => "false",
            Truth::Indeterminate => "indeterminate",
        })
    }
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

impl CompensatedSum {
    #[inline]
    fn step(sum: &mut f64, comp: &mut f64, x: f64) {
        let t = *sum + x;
        if sum.abs() >= x.abs() {
            *comp += (*sum - t) + x;
        } else {
            *comp += (x - t) + *sum;
        }
        *sum = t;
    }

    #[inline]
    pub fn add(&mut self, z: num_complex::Complex64) {
        Self::step(&mut self.re, &mut self.re_c, z.re);
        Self::step(&mut self.im, &mut self.im_c, z.im);
    }

    pub fn value(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}
