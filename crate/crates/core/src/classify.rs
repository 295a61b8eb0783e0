//! Topological classification of the range `R(c) = {σ_c(n)}` and the witnesses that
//! back each verdict.
//!
//! | regime                 | verdict                                   |
//! |------------------------|-------------------------------------------|
//! | `a < -1`               | bounded                                   |
//! | `-1 ≤ a ≤ 0`, `b ≠ 0`  | dense in the plane                        |
//! | `a > 0` or `c = 0`     | every point isolated                      |
//! | `a ≤ 0`, `c ≠ 0`       | no isolated points                        |
//!
//! Zero lies in the range exactly when `a = 0` and `b = qπ/log p` for a prime `p` and
//! a rational `q` that is not an even integer; that condition is invisible to floating
//! point, so it is only decided from an [`ExactExponent`].

use serde::{Deserialize, Serialize};

use crate::bands::{band_primes_up_to, BandKind, DEFAULT_BETA, VANISHING_TOLERANCE};
use crate::error::{domain, Error, Result};
use crate::exponent::{ComplexExponent, ExactExponent};
use crate::factor::PrimeMultiset;
use crate::sieve::{Sieve, SIEVE_CAP};
use crate::sigma::{power_unchecked, sigma, sigma_prime_power};

/// Largest allowed `|b - (ℓ/m)π/log p|` between the two forms of an exponent.
pub const CONSISTENCY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ZeroMembership {
    Yes { witness: PrimeMultiset },
    No,
    UndecidableFloat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub c: ComplexExponent,
    pub bounded: bool,
    pub dense_in_plane: bool,
    pub all_points_isolated: bool,
    pub no_isolated_points: bool,
    pub contains_zero: ZeroMembership,
}

/// Limits on constructive witness searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessBudget {
    /// Largest prime a construction may use.
    pub sieve_limit: u64,
    /// Largest number of primes in a construction.
    pub max_primes: usize,
}

impl WitnessBudget {
    pub fn new(sieve_limit: u64, max_primes: usize) -> Result<Self> {
        if sieve_limit == 0 || max_primes == 0 {
            return domain("witness budget fields must be positive");
        }
        Ok(Self {
            sieve_limit,
            max_primes,
        })
    }
}

impl Default for WitnessBudget {
    fn default() -> Self {
        Self {
            sieve_limit: 10_000_000,
            max_primes: 100_000,
        }
    }
}

pub fn classify(c: ComplexExponent, exact: Option<&ExactExponent>) -> Result<Classification> {
    let contains_zero = match exact {
        Some(e) => {
            let drift = (c.b - e.b()).abs();
            if c.a != 0.0 || drift > CONSISTENCY_TOLERANCE {
                return Err(Error::Consistency(format!(
                    "c = {c} does not match i·({}/{})·π/log {} = {}i",
                    e.ell(),
                    e.m(),
                    e.p(),
                    e.b()
                )));
            }
            match zero_witness(e) {
                Ok(witness) => ZeroMembership::Yes { witness },
                Err(_) => ZeroMembership::No,
            }
        }
        None if c.a == 0.0 && c.b != 0.0 => ZeroMembership::UndecidableFloat,
        None => ZeroMembership::No,
    };
    let all_points_isolated = c.a > 0.0 || c.is_zero();
    Ok(Classification {
        c,
        bounded: c.a < -1.0,
        dense_in_plane: (-1.0..=0.0).contains(&c.a) && c.b != 0.0,
        all_points_isolated,
        no_isolated_points: !all_points_isolated,
        contains_zero,
    })
}

/// `p^{2m-1}`, whose divisor sum `(p^{2mc} - 1)/(p^c - 1)` vanishes.
pub fn zero_witness(exact: &ExactExponent) -> Result<PrimeMultiset> {
    if exact.q_is_even_integer() {
        return Err(Error::NoZero(format!(
            "q = {}/{} is an even integer, so p^c = 1",
            exact.ell(),
            exact.m()
        )));
    }
    let alpha = u32::try_from(2 * exact.m() - 1)
        .map_err(|_| Error::Resource(format!("exponent 2m-1 too large for m = {}", exact.m())))?;
    PrimeMultiset::from_pairs(vec![(exact.p(), alpha)])
}

/// A squarefree `N` with `|σ_c(N)| > M`, built from ascending primes (`b = 0`) or
/// ascending `G`-band primes (`b ≠ 0`).
pub fn unbounded_witness(
    c: ComplexExponent,
    m: f64,
    budget: &WitnessBudget,
    sieve: &Sieve,
) -> Result<PrimeMultiset> {
    if c.a < -1.0 {
        return domain(format!("a = {} < -1: the range is bounded", c.a));
    }
    if !(m > 0.0) || !m.is_finite() {
        return domain(format!("modulus target must be positive, got {m}"));
    }
    let limit = budget.sieve_limit.min(sieve.limit()) as f64;
    let candidates: Vec<u64> = if c.b == 0.0 {
        sieve.iter().take_while(|&p| p as f64 <= limit).collect()
    } else {
        band_primes_up_to(sieve, BandKind::G, c.b.abs(), DEFAULT_BETA, limit)?
    };
    let mut log_mod = 0.0;
    let target = m.ln();
    let mut chosen = Vec::new();
    for p in candidates {
        if chosen.len() >= budget.max_primes {
            break;
        }
        log_mod += (power_unchecked(p as f64, c) + 1.0).norm().ln();
        chosen.push((p, 1));
        if log_mod > target {
            return Ok(PrimeMultiset::from_sorted_unchecked(chosen));
        }
    }
    Err(Error::Budget {
        what: format!("|σ_c(N)| did not exceed {m}"),
        primes_used: chosen.len(),
        achieved: log_mod.exp(),
    })
}

/// A neighbouring point `σ_c(qn)` of `σ_c(n)` at distance `q^a |σ_c(n)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsolatedNeighbor {
    pub q: u64,
    pub distance: f64,
}

/// Smallest prime `q > n` with `q^a |σ_c(n)| < eps`.
pub fn isolated_neighbor(
    n: u64,
    c: ComplexExponent,
    eps: f64,
    sieve: &Sieve,
) -> Result<IsolatedNeighbor> {
    if !(c.a < 0.0) {
        return domain(format!("isolated_neighbor needs a < 0, got a = {}", c.a));
    }
    if !(eps > 0.0) {
        return domain(format!("eps must be positive, got {eps}"));
    }
    let z = sigma(n, c)?.norm();
    if z < VANISHING_TOLERANCE {
        return domain(format!("σ_c({n}) vanishes"));
    }
    // q^a z < eps  ⇔  q > (eps/z)^{1/a}
    let threshold = (eps / z).powf(1.0 / c.a);
    let start = sieve.lower_index((n as f64 + 0.5).max(threshold * (1.0 - 1e-12)));
    for &q in &sieve.primes()[start..] {
        let q = q as u64;
        if q <= n {
            continue;
        }
        let distance = (q as f64).powf(c.a) * z;
        if distance < eps {
            return Ok(IsolatedNeighbor { q, distance });
        }
    }
    Err(Error::Coverage {
        what: format!("prime q > {n} with q^a·|σ_c(n)| < {eps}"),
        required: threshold.max(n as f64) * 1.1,
    })
}

/// `∏_{p < 2^{1/a}} (p^a - 1)`, a lower bound for `|σ_c(n)|` when `a > 0`.
pub fn lower_bound_positive_a(c: ComplexExponent) -> Result<f64> {
    Ok(small_prime_factors(c.a)?.iter().product())
}

/// `p^a - 1` for each prime `p < 2^{1/a}`.
fn small_prime_factors(a: f64) -> Result<Vec<f64>> {
    if !(a > 0.0) {
        return domain(format!("the lower bound needs a > 0, got a = {a}"));
    }
    let cutoff = 2f64.powf(1.0 / a);
    if cutoff > SIEVE_CAP as f64 {
        return Err(Error::Resource(format!(
            "a = {a} needs primes below 2^(1/a) = {cutoff:e}"
        )));
    }
    let s = Sieve::new(cutoff.ceil() as u64)?;
    Ok(s.iter()
        .take_while(|&p| (p as f64) < cutoff)
        .map(|p| (p as f64).powf(a) - 1.0)
        .collect())
}

/// Every `m` with `|σ_c(m)| < d`, ascending, for `a > 0`.
///
/// Depth-first over prime powers in increasing prime order. A partial product `z`
/// is abandoned once `|z|` times the smallest possible contribution of the primes
/// still available reaches `d`; that contribution is `∏ (p^a - 1)` over the unused
/// primes below `2^{1/a}`, and `(p^{(α+1)a} - 1)/(p^a + 1)` bounds a single factor.
pub fn small_modulus_enumerate(c: ComplexExponent, d: f64) -> Result<Vec<u64>> {
    if !(c.a > 0.0) {
        return domain(format!(
            "small_modulus_enumerate needs a > 0, got a = {}",
            c.a
        ));
    }
    if !(d > 0.0) || !d.is_finite() {
        return Ok(Vec::new());
    }
    let small = small_prime_factors(c.a)?;
    // suffix[i] = ∏_{j ≥ i} small[j]
    let mut suffix = vec![1.0; small.len() + 1];
    for i in (0..small.len()).rev() {
        suffix[i] = suffix[i + 1] * small[i];
    }
    let floor = suffix[0];
    // any prime dividing a qualifying m has p^a - 1 < d / floor
    let p_max = (d / floor + 1.0).powf(1.0 / c.a);
    if p_max > SIEVE_CAP as f64 {
        return Err(Error::Resource(format!(
            "enumeration would need primes up to {p_max:e}"
        )));
    }
    let sieve = Sieve::new(p_max.ceil() as u64 + 1)?;
    let ctx = Dfs {
        c,
        d,
        primes: sieve.primes(),
        suffix: &suffix,
    };
    let mut out = Vec::new();
    ctx.walk(0, 1, 1.0, &mut out)?;
    out.sort_unstable();
    Ok(out)
}

struct Dfs<'a> {
    c: ComplexExponent,
    d: f64,
    primes: &'a [u32],
    suffix: &'a [f64],
}

const PRUNE_SLACK: f64 = 1.0 + 1e-9;

impl Dfs<'_> {
    fn rest_bound(&self, idx: usize) -> f64 {
        self.suffix[idx.min(self.suffix.len() - 1)]
    }

    fn walk(&self, idx: usize, m: u64, z: f64, out: &mut Vec<u64>) -> Result<()> {
        if z < self.d {
            out.push(m);
        }
        let a = self.c.a;
        for i in idx..self.primes.len() {
            let p = self.primes[i] as u64;
            let pf = p as f64;
            let rest = self.rest_bound(i + 1);
            // the α = 1 factor bound p^a - 1 only grows past the small primes
            if z * (pf.powf(a) - 1.0) * rest > self.d * PRUNE_SLACK {
                if i >= self.suffix.len() - 1 {
                    break;
                }
                continue;
            }
            let mut alpha = 1u32;
            let mut pk = p;
            loop {
                let lb = (pf.powf((alpha + 1) as f64 * a) - 1.0) / (pf.powf(a) + 1.0);
                if z * lb * rest > self.d * PRUNE_SLACK {
                    break;
                }
                let mk = m
                    .checked_mul(pk)
                    .ok_or_else(|| Error::Resource("enumerated integer exceeds u64".into()))?;
                let zk = z * sigma_prime_power(p, alpha, self.c).norm();
                self.walk(i + 1, mk, zk, out)?;
                alpha += 1;
                pk = match pk.checked_mul(p) {
                    Some(v) => v,
                    None => break,
                };
            }
        }
        Ok(())
    }
}
