//! Prime bands: unions of intervals on which `arg(x^c)` is pinned near `0`, near `±π`,
//! or inside `[π/4, 3π/4]`, plus the prime-with-argument search and the window
//! inequality for `∏(1 - 1/p)`.
//!
//! For `b > 0` and `0 < β ≤ π/4`:
//!
//! ```text
//! G_k = [e^{(2kπ-β)/b},     e^{(2kπ+β)/b}]       k ≥ 0
//! H_k = [e^{((2k-1)π-β)/b}, e^{((2k-1)π+β)/b}]   k ≥ 1
//! J_k = [e^{(2k+1/4)π/b},   e^{(2k+3/4)π/b}]     k ≥ 0
//! ```
//!
//! Intervals are closed. Band sums accumulate in ascending prime order.

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exponent::ComplexExponent;
use crate::sieve::Sieve;
use crate::sigma::power_unchecked;

/// Default half-width of the `G` and `H` bands.
pub const DEFAULT_BETA: f64 = FRAC_PI_4 - 1e-6;

/// Below this modulus `1 + p^c` is treated as vanishing.
pub const VANISHING_TOLERANCE: f64 = 1e-12;

/// Reduces an angle to `(-π, π]`.
pub fn wrap_angle(t: f64) -> f64 {
    let r = t - TAU * (t / TAU).round();
    if r <= -PI {
        r + TAU
    } else if r > PI {
        r - TAU
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BandKind {
    /// `arg(x^c) ∈ [-β, β]`
    G,
    /// `arg(x^c) ≤ -π+β` or `≥ π-β`
    H,
    /// `arg(x^c) ∈ [π/4, 3π/4]`
    J,
}

impl BandKind {
    fn first_index(self) -> u64 {
        match self {
            BandKind::H => 1,
            _ => 0,
        }
    }
}

/// One interval `G_k`, `H_k` or `J_k` for a given `b` and `β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandFamily {
    kind: BandKind,
    b: f64,
    beta: f64,
    k: u64,
}

fn check_band_params(kind: BandKind, b: f64, beta: f64) -> Result<()> {
    if !(b > 0.0) || !b.is_finite() {
        return domain(format!("band parameter b must be positive, got {b}"));
    }
    if kind != BandKind::J && !(beta > 0.0 && beta <= FRAC_PI_4) {
        return domain(format!("band half-width must lie in (0, π/4], got {beta}"));
    }
    Ok(())
}

impl BandFamily {
    /// `beta` is ignored for [`BandKind::J`].
    pub fn new(kind: BandKind, b: f64, beta: f64, k: u64) -> Result<Self> {
        check_band_params(kind, b, beta)?;
        if kind == BandKind::H && k == 0 {
            return domain("H bands are indexed from k = 1");
        }
        Ok(Self { kind, b, beta, k })
    }

    pub fn kind(&self) -> BandKind {
        self.kind
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Endpoints in log scale, i.e. the bounds on `b·log x`.
    fn phase_interval(&self) -> (f64, f64) {
        let k = self.k as f64;
        match self.kind {
            BandKind::G => (2.0 * k * PI - self.beta, 2.0 * k * PI + self.beta),
            BandKind::H => (
                (2.0 * k - 1.0) * PI - self.beta,
                (2.0 * k - 1.0) * PI + self.beta,
            ),
            BandKind::J => ((2.0 * k + 0.25) * PI, (2.0 * k + 0.75) * PI),
        }
    }
}

/// The closed interval `[lo, hi]` of a band.
pub fn band_interval(fam: &BandFamily) -> (f64, f64) {
    let (lo, hi) = fam.phase_interval();
    ((lo / fam.b).exp(), (hi / fam.b).exp())
}

/// Sieved primes in the band, ascending.
pub fn primes_in_band(sieve: &Sieve, fam: &BandFamily) -> Result<Vec<u64>> {
    let (lo, hi) = band_interval(fam);
    sieve.require(hi, &format!("{:?}_{} band upper endpoint", fam.kind, fam.k))?;
    Ok(sieve.range(lo, hi).iter().map(|&p| p as u64).collect())
}

/// Ascending primes of the band union `⋃_k kind_k` up to `x`.
pub fn band_primes_up_to(
    sieve: &Sieve,
    kind: BandKind,
    b: f64,
    beta: f64,
    x: f64,
) -> Result<Vec<u64>> {
    check_band_params(kind, b, beta)?;
    sieve.require(x, &format!("{kind:?}-band primes up to {x}"))?;
    let mut out = Vec::new();
    let mut k = kind.first_index();
    loop {
        let fam = BandFamily { kind, b, beta, k };
        let (lo, hi) = band_interval(&fam);
        if lo > x {
            return Ok(out);
        }
        out.extend(sieve.range(lo, hi.min(x)).iter().map(|&p| p as u64));
        k += 1;
    }
}

/// Principal argument of `x^c`, in `(-π, π]`.
pub fn arg_of_power(x: f64, c: ComplexExponent) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("arg_of_power needs x > 0, got {x}"));
    }
    Ok(wrap_angle(c.b * x.ln()))
}

/// `log|1 + p^c|`; a vanishing factor is reported as [`Error::VanishingFactor`].
pub fn log_abs_one_plus_power(p: u64, c: ComplexExponent) -> Result<f64> {
    let w = power_unchecked(p as f64, c) + 1.0;
    let m = w.norm();
    if m < VANISHING_TOLERANCE {
        return Err(Error::VanishingFactor { p });
    }
    Ok(m.ln())
}

/// Sum over band primes `p ≤ x` of `log|1 + p^c|` (kinds `G`, `H`) or of `1/p`
/// (kind `J`).
pub fn band_partial_sum(
    sieve: &Sieve,
    kind: BandKind,
    c: ComplexExponent,
    beta: f64,
    x: f64,
) -> Result<f64> {
    if !(c.b > 0.0) {
        return domain("band sums need b > 0");
    }
    match kind {
        BandKind::G if c.a < -1.0 => return domain("G-band sums need a >= -1"),
        BandKind::H if !(c.a >= -1.0 && c.a < 0.0) => {
            return domain("H-band sums need -1 <= a < 0")
        }
        _ => {}
    }
    let primes = band_primes_up_to(sieve, kind, c.b, beta, x)?;
    let mut acc = 0.0;
    for p in primes {
        acc += match kind {
            BandKind::J => 1.0 / p as f64,
            _ => log_abs_one_plus_power(p, c)?,
        };
    }
    Ok(acc)
}

/// Smallest prime `p ≥ min_prime` with `|wrap(b·log p − φ)| < ε`.
///
/// Candidates lie in the windows `λμ^n < p < λμ^nδ` with `λ = e^{(φ-ε)/b}`,
/// `μ = e^{2π/b}`, `δ = e^{2ε/b}`, which are disjoint and increasing for `ε < π`;
/// the first window holding a qualifying prime yields the minimum.
pub fn prime_with_arg(b: f64, phi: f64, eps: f64, min_prime: u64, sieve: &Sieve) -> Result<u64> {
    prime_with_arg_excluding(b, phi, eps, min_prime, sieve, |_| false)
}

pub(crate) fn prime_with_arg_excluding(
    b: f64,
    phi: f64,
    eps: f64,
    min_prime: u64,
    sieve: &Sieve,
    excluded: impl Fn(u64) -> bool,
) -> Result<u64> {
    if !(b > 0.0) || !b.is_finite() {
        return domain(format!("prime_with_arg needs b > 0, got {b}"));
    }
    if !(eps > 0.0) {
        return domain(format!("prime_with_arg needs eps > 0, got {eps}"));
    }
    let qualifies = |p: u64| !excluded(p) && wrap_angle(b * (p as f64).ln() - phi).abs() < eps;
    let primes = sieve.primes();
    let floor = min_prime.max(2) as f64;
    if eps >= PI {
        // every window overlaps its neighbour; plain ascending scan
        let start = sieve.lower_index(floor);
        return primes[start..]
            .iter()
            .map(|&p| p as u64)
            .find(|&p| qualifies(p))
            .ok_or_else(|| Error::Coverage {
                what: "no qualifying prime in sieve".into(),
                required: sieve.limit() as f64 * 2.0,
            });
    }
    // first window whose upper end exceeds min_prime
    let mut n = ((b * floor.ln() - phi - eps) / TAU).floor() as i64;
    loop {
        let lo_phase = phi - eps + TAU * n as f64;
        let hi_phase = phi + eps + TAU * n as f64;
        let lo = (lo_phase / b).exp();
        let hi = (hi_phase / b).exp();
        if hi >= floor {
            // pad by one ulp-scale margin; the exact test below decides membership
            let start = sieve.lower_index((lo * (1.0 - 1e-12)).max(floor));
            let mut idx = start;
            while idx < primes.len() && (primes[idx] as f64) <= hi * (1.0 + 1e-12) {
                let p = primes[idx] as u64;
                if qualifies(p) {
                    return Ok(p);
                }
                idx += 1;
            }
            if hi > sieve.limit() as f64 {
                return Err(Error::Coverage {
                    what: format!("prime_with_arg window n = {n} is ({lo}, {hi})"),
                    required: hi,
                });
            }
        }
        n += 1;
    }
}

/// `∏_{p∈[y,x]}(1 - 1/p)` against `log y/log x + 2/log²y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MertensWindow {
    pub y: f64,
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn mertens_window_check(y: f64, x: f64, sieve: &Sieve) -> Result<MertensWindow> {
    if !(y >= 285.0) || !(x > y) {
        return domain(format!(
            "window check needs 285 <= y < x, got y = {y}, x = {x}"
        ));
    }
    sieve.require(x, "mertens window upper end")?;
    let lhs: f64 = sieve
        .range(y, x)
        .iter()
        .map(|&p| 1.0 - 1.0 / p as f64)
        .product();
    let ly = y.ln();
    let rhs = ly / x.ln() + 2.0 / (ly * ly);
    Ok(MertensWindow {
        y,
        x,
        lhs,
        rhs,
        holds: lhs < rhs,
    })
}
