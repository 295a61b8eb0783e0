//! Integer factorization and prime multisets.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Largest integer accepted by [`factorize`].
pub const FACTORIZE_LIMIT: u64 = 1_000_000_000_000;

const TRIAL_LIMIT: u64 = 1_000_000;

fn trial_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| crate::sieve::Sieve::eratosthenes(TRIAL_LIMIT as usize))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A factored positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs in increasing prime order.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn into_multiset(self) -> PrimeMultiset {
        PrimeMultiset::from_sorted_unchecked(self.factors)
    }
}

/// Factors `1 ≤ n ≤ 10^12` by trial division with primes below `10^6`; any cofactor
/// left over has no factor below `10^6` and is at most `10^12`, hence prime.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return domain("cannot factor 0");
    }
    if n > FACTORIZE_LIMIT {
        return domain(format!(
            "{n} exceeds the factorization limit {FACTORIZE_LIMIT}"
        ));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    for &p in trial_primes() {
        let p = p as u64;
        if p * p > rest {
            break;
        }
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        debug_assert!(is_prime(rest));
        factors.push((rest, 1));
    }
    Ok(Factorization { n, factors })
}

/// A positive integer stored only through its prime factorization, so it may be far
/// beyond machine range.
///
/// Serializes as a list of `[p, e]` pairs with `p` ascending.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u64, u32)>", into = "Vec<(u64, u32)>")]
pub struct PrimeMultiset {
    entries: Vec<(u64, u32)>,
    squarefree: bool,
}

impl TryFrom<Vec<(u64, u32)>> for PrimeMultiset {
    type Error = Error;

    fn try_from(pairs: Vec<(u64, u32)>) -> Result<Self> {
        Self::from_pairs(pairs)
    }
}

impl From<PrimeMultiset> for Vec<(u64, u32)> {
    fn from(m: PrimeMultiset) -> Self {
        m.entries
    }
}

impl PrimeMultiset {
    /// The empty multiset, representing 1.
    pub fn one() -> Self {
        Self {
            entries: Vec::new(),
            squarefree: true,
        }
    }

    /// Validates strictly increasing primes and positive exponents.
    pub fn from_pairs(pairs: Vec<(u64, u32)>) -> Result<Self> {
        for w in pairs.windows(2) {
            if w[0].0 >= w[1].0 {
                return domain("primes must be strictly increasing");
            }
        }
        for &(p, e) in &pairs {
            if e == 0 {
                return domain(format!("exponent of {p} must be at least 1"));
            }
            if !is_prime(p) {
                return domain(format!("{p} is not prime"));
            }
        }
        Ok(Self::from_sorted_unchecked(pairs))
    }

    /// Squarefree multiset from distinct primes in any order.
    pub fn from_primes(primes: &[u64]) -> Result<Self> {
        let mut sorted = primes.to_vec();
        sorted.sort_unstable();
        Self::from_pairs(sorted.into_iter().map(|p| (p, 1)).collect())
    }

    pub(crate) fn from_sorted_unchecked(entries: Vec<(u64, u32)>) -> Self {
        let squarefree = entries.iter().all(|&(_, e)| e == 1);
        Self {
            entries,
            squarefree,
        }
    }

    pub fn entries(&self) -> &[(u64, u32)] {
        &self.entries
    }

    pub fn is_squarefree(&self) -> bool {
        self.squarefree
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.entries.binary_search_by_key(&p, |&(q, _)| q).is_ok()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|&(p, _)| p)
    }

    pub fn largest_prime(&self) -> Option<u64> {
        self.entries.last().map(|&(p, _)| p)
    }

    pub fn smallest_prime(&self) -> Option<u64> {
        self.entries.first().map(|&(p, _)| p)
    }

    /// Multiplies in a prime not yet present.
    pub fn insert_prime(&mut self, p: u64) -> Result<()> {
        match self.entries.binary_search_by_key(&p, |&(q, _)| q) {
            Ok(_) => Err(Error::Domain(format!("prime {p} already present"))),
            Err(pos) => {
                self.entries.insert(pos, (p, 1));
                Ok(())
            }
        }
    }

    /// The represented integer, if it fits in a `u64`.
    pub fn to_u64(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for &(p, e) in &self.entries {
            for _ in 0..e {
                acc = acc.checked_mul(p)?;
            }
        }
        Some(acc)
    }

    /// Base-10 logarithm of the represented integer.
    pub fn log10(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(p, e)| e as f64 * (p as f64).log10())
            .sum()
    }
}

/// Formats as `2^1*3^5`; the empty multiset prints as `1`.
impl fmt::Display for PrimeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{p}^{e}")?;
        }
        Ok(())
    }
}
