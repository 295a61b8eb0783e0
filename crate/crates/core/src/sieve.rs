//! Segmented sieve of Eratosthenes.

use crate::error::{Error, Result};

/// Largest sieve limit accepted by [`Sieve::new`].
pub const SIEVE_CAP: u64 = 1_000_000_000;

const SEGMENT: usize = 1 << 18;

/// All primes up to `limit`, ascending. Immutable once built.
#[derive(Debug, Clone)]
pub struct Sieve {
    limit: u64,
    primes: Vec<u32>,
}

impl Sieve {
    pub fn new(limit: u64) -> Result<Self> {
        if limit > SIEVE_CAP {
            return Err(Error::Resource(format!(
                "sieve limit {limit} exceeds cap {SIEVE_CAP}"
            )));
        }
        Ok(Self {
            limit,
            primes: Self::eratosthenes(limit as usize),
        })
    }

    /// Primes `<= limit` via an odd-only segmented sieve.
    pub(crate) fn eratosthenes(limit: usize) -> Vec<u32> {
        if limit < 2 {
            return Vec::new();
        }
        let root = (limit as f64).sqrt() as usize + 1;
        let mut small = vec![true; root + 1];
        small[0] = false;
        small[1] = false;
        let mut i = 2;
        while i * i <= root {
            if small[i] {
                let mut j = i * i;
                while j <= root {
                    small[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        let base: Vec<usize> = (3..=root).filter(|&p| small[p]).collect();

        let mut primes = Vec::with_capacity(estimate_count(limit));
        primes.push(2u32);
        // segment covers odd numbers lo, lo+2, ...; index k stands for lo + 2k
        let mut seg = vec![true; SEGMENT];
        let mut lo = 3usize;
        while lo <= limit {
            let hi = (lo + 2 * SEGMENT - 1).min(limit);
            let len = (hi - lo) / 2 + 1;
            seg[..len].fill(true);
            for &p in &base {
                if p * p > hi {
                    break;
                }
                let mut start = (p * p).max(lo.div_ceil(p) * p);
                if start % 2 == 0 {
                    start += p;
                }
                let mut k = (start - lo) / 2;
                while k < len {
                    seg[k] = false;
                    k += p;
                }
            }
            primes.extend(
                seg[..len]
                    .iter()
                    .enumerate()
                    .filter(|(_, &is_p)| is_p)
                    .map(|(k, _)| (lo + 2 * k) as u32),
            );
            lo = hi + 1;
            if lo.is_multiple_of(2) {
                lo += 1;
            }
        }
        primes
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().map(|&p| p as u64)
    }

    /// Membership for `n <= limit`.
    pub fn contains(&self, n: u64) -> bool {
        n <= u32::MAX as u64 && self.primes.binary_search(&(n as u32)).is_ok()
    }

    /// Index of the first prime `>= x`.
    pub fn lower_index(&self, x: f64) -> usize {
        self.primes.partition_point(|&p| (p as f64) < x)
    }

    /// Index just past the last prime `<= x`.
    pub fn upper_index(&self, x: f64) -> usize {
        self.primes.partition_point(|&p| (p as f64) <= x)
    }

    /// Primes in the closed interval `[lo, hi]`.
    pub fn range(&self, lo: f64, hi: f64) -> &[u32] {
        let i = self.lower_index(lo);
        let j = self.upper_index(hi).max(i);
        &self.primes[i..j]
    }

    /// The `k`-th prime, 1-indexed (`nth(1) = 2`).
    pub fn nth(&self, k: usize) -> Option<u64> {
        k.checked_sub(1)
            .and_then(|i| self.primes.get(i))
            .map(|&p| p as u64)
    }

    /// Number of primes `<= x`.
    pub fn prime_pi(&self, x: f64) -> usize {
        self.upper_index(x)
    }

    pub(crate) fn require(&self, x: f64, what: &str) -> Result<()> {
        if x > self.limit as f64 {
            Err(Error::Coverage {
                what: what.to_string(),
                required: x,
            })
        } else {
            Ok(())
        }
    }
}

/// The `k`-th prime for small `k`, sieving as far as needed.
pub fn nth_prime(k: usize) -> Result<u64> {
    if k == 0 {
        return Err(Error::Domain("primes are indexed from 1".into()));
    }
    let mut limit = 64u64;
    loop {
        let s = Sieve::new(limit)?;
        if let Some(p) = s.nth(k) {
            return Ok(p);
        }
        limit *= 4;
    }
}

fn estimate_count(limit: usize) -> usize {
    if limit < 10 {
        return 4;
    }
    let x = limit as f64;
    (1.26 * x / x.ln()) as usize
}

/// Builds the sieve of all primes `<= limit`.
pub fn primes_up_to(limit: u64) -> Result<Sieve> {
    Sieve::new(limit)
}
