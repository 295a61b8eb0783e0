//! Evaluation of `σ_c(n) = Σ_{d|n} d^c`.
//!
//! `σ_c` is multiplicative, so the main entry points work prime power by prime power.
//! [`sigma_direct`] sums over the divisors themselves and serves as the oracle for the
//! factored routes.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::exponent::{ComplexExponent, ComplexValue};
use crate::factor::{factorize, PrimeMultiset};

/// Below this value of `|p^c - 1|` the geometric closed form is replaced by the
/// explicit sum.
pub const GEOMETRIC_TOLERANCE: f64 = 1e-6;

/// Largest `n` accepted by [`sigma_direct`].
pub const DIRECT_LIMIT: u64 = 10_000_000;

/// `x^c = x^a · e^{i b log x}` for `x > 0`.
pub fn complex_power(x: f64, c: ComplexExponent) -> Result<ComplexValue> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!(
            "complex_power needs a positive finite base, got {x}"
        ));
    }
    Ok(power_unchecked(x, c))
}

#[inline]
pub(crate) fn power_unchecked(x: f64, c: ComplexExponent) -> ComplexValue {
    let lx = x.ln();
    let (s, co) = (c.b * lx).sin_cos();
    let m = x.powf(c.a);
    Complex64::new(m * co, m * s)
}

/// `σ_c(p^α) = 1 + p^c + … + p^{αc}`.
pub fn sigma_prime_power(p: u64, alpha: u32, c: ComplexExponent) -> ComplexValue {
    let pf = p as f64;
    let z = power_unchecked(pf, c);
    if (z - 1.0).norm() < GEOMETRIC_TOLERANCE {
        return sigma_prime_power_explicit(p, alpha, c);
    }
    let top = power_unchecked(pf, c.scale(alpha as f64 + 1.0));
    (top - 1.0) / (z - 1.0)
}

/// The `(α+1)`-term sum, with each power evaluated directly.
pub fn sigma_prime_power_explicit(p: u64, alpha: u32, c: ComplexExponent) -> ComplexValue {
    let pf = p as f64;
    (0..=alpha)
        .map(|j| power_unchecked(pf, c.scale(j as f64)))
        .sum()
}

/// `σ_c(n)` through the factorization of `n`.
pub fn sigma(n: u64, c: ComplexExponent) -> Result<ComplexValue> {
    let f = factorize(n)?;
    Ok(f.factors()
        .iter()
        .map(|&(p, e)| sigma_prime_power(p, e, c))
        .product())
}

/// `σ_c(n)` by enumerating divisors up to `√n`.
pub fn sigma_direct(n: u64, c: ComplexExponent) -> Result<ComplexValue> {
    if n == 0 {
        return domain("sigma_direct needs n >= 1");
    }
    if n > DIRECT_LIMIT {
        return domain(format!("sigma_direct is limited to n <= {DIRECT_LIMIT}"));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            acc += power_unchecked(d as f64, c);
            let e = n / d;
            if e != d {
                acc += power_unchecked(e as f64, c);
            }
        }
        d += 1;
    }
    Ok(acc)
}

/// `σ_c(N)` for an integer given only by its prime multiset.
pub fn sigma_of_multiset(ms: &PrimeMultiset, c: ComplexExponent) -> ComplexValue {
    ms.entries()
        .iter()
        .map(|&(p, e)| sigma_prime_power(p, e, c))
        .product()
}

/// Smallest-prime-factor table for `0..=n`.
pub(crate) fn spf_table(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            let j = i * p as usize;
            if p > si || j > n {
                break;
            }
            spf[j] = p;
        }
    }
    spf
}

/// `σ_c(n)` for every `n` in `1..=n_max`; element `0` of the result is unused (zero).
///
/// Uses a linear sieve and `σ_c(p^k m) = σ_c(p^k) σ_c(m)`.
pub fn sigma_table(n_max: usize, c: ComplexExponent) -> Vec<ComplexValue> {
    let spf = spf_table(n_max);
    let mut out = vec![Complex64::new(0.0, 0.0); n_max + 1];
    if n_max == 0 {
        return out;
    }
    out[1] = Complex64::new(1.0, 0.0);
    for n in 2..=n_max {
        let p = spf[n] as usize;
        let mut m = n / p;
        let mut e = 1u32;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        out[n] = out[m] * sigma_prime_power(p as u64, e, c);
    }
    out
}
