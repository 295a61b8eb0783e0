//! Constructive approximation of complex targets by `σ_c(N)` with `N` squarefree,
//! for `-1 ≤ a ≤ 0` and `b ≠ 0`.
//!
//! For squarefree `N`, `log σ_c(N) = Σ_{p|N} log(1 + p^c)`, so the work happens in
//! log coordinates:
//!
//! * `J`-band primes add a small positive amount to the argument ([`approx_arg`]);
//! * `G`-band primes raise and `H`-band primes lower the log-modulus
//!   ([`adjust_modulus`]).
//!
//! [`approx_target`] alternates the two with a shrinking tolerance. Each band is
//! split by the sign of the prime's effect on the other coordinate, and the walk
//! draws from whichever half pulls that coordinate back toward its target, so one
//! round leaves both errors within the round tolerance.
//!
//! For `a = 0` single factors no longer shrink, and the target is hit by placing a
//! handful of primes at computed arguments with [`prime_with_arg`].
//!
//! Every result is re-evaluated with [`sigma_of_multiset`] before it is reported.
//!
//! [`prime_with_arg`]: crate::bands::prime_with_arg

use std::collections::HashSet;
use std::f64::consts::{FRAC_PI_3, TAU};

use serde::{Deserialize, Serialize};

use crate::bands::{
    band_primes_up_to, prime_with_arg_excluding, wrap_angle, BandKind, DEFAULT_BETA,
};
use crate::certified::CompensatedSum;
use crate::classify::WitnessBudget;
use crate::error::{domain, Error, Result};
use crate::exponent::{ComplexExponent, ComplexValue};
use crate::factor::PrimeMultiset;
use crate::sieve::Sieve;
use crate::sigma::{power_unchecked, sigma_of_multiset};

/// Halvings of the round tolerance before [`approx_target`] gives up.
const MAX_ROUNDS: u32 = 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxRequest {
    pub c: ComplexExponent,
    pub target: ComplexValue,
    pub eps: f64,
    /// Every prime of the result exceeds this.
    pub min_prime: u64,
    pub budget: WitnessBudget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApproxStatus {
    Converged,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxResult {
    pub n: PrimeMultiset,
    pub value: ComplexValue,
    pub abs_error: f64,
    pub primes_used: usize,
    pub largest_prime: Option<u64>,
    pub status: ApproxStatus,
    /// Why the search stopped early, when it did.
    pub note: Option<String>,
}

impl ApproxResult {
    fn evaluate(n: PrimeMultiset, c: ComplexExponent, target: ComplexValue) -> Self {
        let value = sigma_of_multiset(&n, c);
        Self {
            primes_used: n.len(),
            largest_prime: n.largest_prime(),
            abs_error: (value - target).norm(),
            value,
            n,
            status: ApproxStatus::Converged,
            note: None,
        }
    }

    pub fn converged(&self) -> bool {
        self.status == ApproxStatus::Converged
    }
}

fn check_regime(c: ComplexExponent) -> Result<()> {
    if !(-1.0..=0.0).contains(&c.a) || c.b == 0.0 {
        return domain(format!(
            "c = {c}: σ_c(N) is dense in the plane only for -1 <= a <= 0 and b != 0"
        ));
    }
    Ok(())
}

/// Log-space state of a squarefree construction.
struct Walk {
    c: ComplexExponent,
    primes: Vec<u64>,
    used: HashSet<u64>,
    log: CompensatedSum,
    max_primes: usize,
}

/// Ascending walk through one band union.
struct Cursor {
    kind: BandKind,
    list: Vec<u64>,
    pos: usize,
}

impl Cursor {
    fn new(
        kind: BandKind,
        b: f64,
        beta: f64,
        floor: u64,
        limit: f64,
        sieve: &Sieve,
    ) -> Result<Self> {
        let mut list = band_primes_up_to(sieve, kind, b, beta, limit)?;
        list.retain(|&p| p > floor);
        Ok(Self { kind, list, pos: 0 })
    }
}

#[derive(Debug)]
enum Stop {
    Coverage(BandKind),
    Budget,
}

impl Walk {
    fn new(c: ComplexExponent, base: &PrimeMultiset, max_primes: usize) -> Self {
        let mut w = Self {
            c,
            primes: Vec::new(),
            used: HashSet::new(),
            log: CompensatedSum::default(),
            max_primes,
        };
        for p in base.primes() {
            w.push(p, w.term(p));
        }
        w
    }

    fn term(&self, p: u64) -> ComplexValue {
        (power_unchecked(p as f64, self.c) + 1.0).ln()
    }

    fn push(&mut self, p: u64, t: ComplexValue) {
        self.primes.push(p);
        self.used.insert(p);
        self.log.add(t);
    }

    fn log(&self) -> ComplexValue {
        self.log.value()
    }

    fn multiset(&self) -> PrimeMultiset {
        let mut ps = self.primes.clone();
        ps.sort_unstable();
        PrimeMultiset::from_sorted_unchecked(ps.into_iter().map(|p| (p, 1)).collect())
    }

    /// Next unused cursor prime accepted by `keep`, which sees the prime's log term.
    fn take(
        &mut self,
        cur: &mut Cursor,
        mut keep: impl FnMut(ComplexValue) -> bool,
    ) -> std::result::Result<(), Stop> {
        if self.primes.len() >= self.max_primes {
            return Err(Stop::Budget);
        }
        while cur.pos < cur.list.len() {
            let p = cur.list[cur.pos];
            cur.pos += 1;
            if self.used.contains(&p) {
                continue;
            }
            let t = self.term(p);
            if keep(t) {
                self.push(p, t);
                return Ok(());
            }
        }
        Err(Stop::Coverage(cur.kind))
    }

    /// Raises the argument with `J` primes until it lies within `tol` of `theta`
    /// modulo `2π`, each step below `tol`.
    fn raise_arg(
        &mut self,
        cur: &mut Cursor,
        theta: f64,
        tol: f64,
    ) -> std::result::Result<(), Stop> {
        while !self.arg_within(theta, tol) {
            self.take(cur, |t| t.im > 0.0 && t.im < tol)?;
        }
        Ok(())
    }

    fn arg_within(&self, theta: f64, tol: f64) -> bool {
        let need = (theta - self.log().im).rem_euclid(TAU);
        need < tol || need > TAU - tol
    }

    /// Brings the log-modulus within `tol` of `target` with `G` primes (raising) or
    /// `H` primes (lowering), each step below `tol`.
    fn adjust_log_mod(
        &mut self,
        g: &mut Cursor,
        h: &mut Cursor,
        target: f64,
        tol: f64,
    ) -> std::result::Result<(), Stop> {
        loop {
            let e = self.log().re - target;
            if e.abs() < tol {
                return Ok(());
            }
            if e < 0.0 {
                self.take(g, |t| t.re > 0.0 && t.re < tol)?;
            } else {
                self.take(h, |t| t.re < 0.0 && -t.re < tol)?;
            }
        }
    }

    /// One refinement round at tolerance `t`: the argument error ends in
    /// `[-t/2, 0]` and the log-modulus error in `(-t, t)`.
    fn round(
        &mut self,
        bands: &mut SplitBands,
        theta: f64,
        log_mod: f64,
        t: f64,
    ) -> std::result::Result<(), Stop> {
        // J steps below t/2 land the argument error in [-t/2, 0]
        while !self.arg_within(theta, t / 2.0) {
            let e_m = self.log().re - log_mod;
            let cur = if e_m < 0.0 {
                &mut bands.j_up
            } else {
                &mut bands.j_down
            };
            self.take(cur, |l| l.im > 0.0 && l.im < t / 2.0)?;
        }
        // argument steps below t/4, each toward -t/4, keep it inside [-t/2, 0]
        loop {
            let l = self.log();
            let e = l.re - log_mod;
            if e.abs() < t {
                return Ok(());
            }
            let e_t = wrap_angle(l.im - theta);
            let rotate_up = e_t < -t / 4.0;
            let cur = match (e < 0.0, rotate_up) {
                (true, true) => &mut bands.g_up,
                (true, false) => &mut bands.g_down,
                (false, true) => &mut bands.h_up,
                (false, false) => &mut bands.h_down,
            };
            self.take(cur, |l| {
                (l.re < 0.0) == (e > 0.0) && l.re.abs() < t && l.im.abs() < t / 4.0
            })?;
        }
    }
}

/// Band primes split by the sign of their effect on the coordinate a phase leaves
/// alone: log-modulus for `J`, argument for `G` and `H`.
struct SplitBands {
    j_up: Cursor,
    j_down: Cursor,
    g_up: Cursor,
    g_down: Cursor,
    h_up: Cursor,
    h_down: Cursor,
}

impl SplitBands {
    fn new(c: ComplexExponent, floor: u64, limit: f64, sieve: &Sieve) -> Result<Self> {
        let split = |kind: BandKind,
                     beta: f64,
                     side: fn(ComplexValue) -> f64|
         -> Result<(Cursor, Cursor)> {
            let all = Cursor::new(kind, c.b, beta, floor, limit, sieve)?;
            let (up, down): (Vec<u64>, Vec<u64>) = all
                .list
                .into_iter()
                .partition(|&p| side((power_unchecked(p as f64, c) + 1.0).ln()) >= 0.0);
            Ok((
                Cursor {
                    kind,
                    list: up,
                    pos: 0,
                },
                Cursor {
                    kind,
                    list: down,
                    pos: 0,
                },
            ))
        };
        let (j_up, j_down) = split(BandKind::J, 0.0, |l| l.re)?;
        let (g_up, g_down) = split(BandKind::G, DEFAULT_BETA, |l| l.im)?;
        let (h_up, h_down) = split(BandKind::H, DEFAULT_BETA, |l| l.im)?;
        Ok(Self {
            j_up,
            j_down,
            g_up,
            g_down,
            h_up,
            h_down,
        })
    }
}

fn stop_error(stop: Stop, what: &str, sieve: &Sieve, used: usize) -> Error {
    match stop {
        Stop::Coverage(kind) => Error::Coverage {
            what: format!("{what}: {kind:?}-band primes exhausted after {used} primes"),
            required: sieve.limit() as f64 * 2.0,
        },
        Stop::Budget => Error::Budget {
            what: what.to_string(),
            primes_used: used,
            achieved: f64::NAN,
        },
    }
}

fn check_band_exponent(c: ComplexExponent) -> Result<()> {
    if !(c.a >= -1.0 && c.a < 0.0) || !(c.b > 0.0) {
        return domain(format!(
            "band constructions need -1 <= a < 0 and b > 0, got c = {c}"
        ));
    }
    Ok(())
}

/// Squarefree product of `J`-band primes above `min_prime` whose argument sum
/// `Σ arg(1 + s^c)` is within `eps` of `theta` modulo `2π`; each summand is below
/// `eps` when chosen.
pub fn approx_arg(
    c: ComplexExponent,
    theta: f64,
    eps: f64,
    min_prime: u64,
    sieve: &Sieve,
) -> Result<PrimeMultiset> {
    check_band_exponent(c)?;
    if !(eps > 0.0) {
        return domain(format!("eps must be positive, got {eps}"));
    }
    let mut j = Cursor::new(
        BandKind::J,
        c.b,
        0.0,
        min_prime,
        sieve.limit() as f64,
        sieve,
    )?;
    let mut w = Walk::new(c, &PrimeMultiset::one(), usize::MAX);
    match w.raise_arg(&mut j, theta, eps) {
        Ok(()) => Ok(w.multiset()),
        Err(stop) => Err(stop_error(
            stop,
            &format!(
                "argument reached {:.6} of {:.6}",
                w.log().im,
                theta.rem_euclid(TAU)
            ),
            sieve,
            w.primes.len(),
        )),
    }
}

/// Extends `base` with `G`-band primes (when `r` exceeds the current modulus) or
/// `H`-band primes (otherwise) until `|σ_c| ∈ (r e^{-eps}, r e^{eps})`. Primes of
/// `base` are never reused; each added term has `|log|1 + p^c|| < eps`.
pub fn adjust_modulus(
    c: ComplexExponent,
    base: &PrimeMultiset,
    r: f64,
    eps: f64,
    beta: f64,
    sieve: &Sieve,
) -> Result<PrimeMultiset> {
    check_band_exponent(c)?;
    if !(r > 0.0) || !(eps > 0.0) {
        return domain(format!("need r > 0 and eps > 0, got r = {r}, eps = {eps}"));
    }
    if !base.is_squarefree() {
        return domain("base must be squarefree");
    }
    let limit = sieve.limit() as f64;
    let mut g = Cursor::new(BandKind::G, c.b, beta, 1, limit, sieve)?;
    let mut h = Cursor::new(BandKind::H, c.b, beta, 1, limit, sieve)?;
    let mut w = Walk::new(c, base, usize::MAX);
    match w.adjust_log_mod(&mut g, &mut h, r.ln(), eps) {
        Ok(()) => Ok(w.multiset()),
        Err(stop) => Err(stop_error(
            stop,
            &format!("modulus reached {:.6} of {r}", w.log().re.exp()),
            sieve,
            w.primes.len(),
        )),
    }
}

/// Squarefree `N` with all primes above `req.min_prime` and `|σ_c(N) - target| < eps`.
///
/// Running out of sieve or prime budget yields a result flagged
/// [`ApproxStatus::BudgetExhausted`] carrying the best `N` found.
pub fn approx_target(req: &ApproxRequest, sieve: &Sieve) -> Result<ApproxResult> {
    check_regime(req.c)?;
    if !(req.eps > 0.0) {
        return domain(format!("eps must be positive, got {}", req.eps));
    }
    if req.target.norm() == 0.0 || !req.target.re.is_finite() || !req.target.im.is_finite() {
        return domain("target must be a finite nonzero complex number; use zero_witness for 0");
    }
    let one = ApproxResult::evaluate(PrimeMultiset::one(), req.c, req.target);
    if one.abs_error < req.eps {
        return Ok(one);
    }
    // σ_{c̄}(N) = conj σ_c(N)
    let (c, target) = if req.c.b < 0.0 {
        (req.c.conj(), req.target.conj())
    } else {
        (req.c, req.target)
    };
    let limit = req.budget.sieve_limit.min(sieve.limit()) as f64;
    let outcome = if c.a == 0.0 {
        construct_unit_circle(c, target, req, sieve, limit)?
    } else {
        construct_bands(c, target, req, sieve, limit)?
    };
    let (n, note) = outcome;
    let mut res = ApproxResult::evaluate(n, req.c, req.target);
    if res.abs_error >= req.eps {
        res.status = ApproxStatus::BudgetExhausted;
        res.note = Some(note.unwrap_or_else(|| "tolerance not reached".into()));
    }
    Ok(res)
}

type Outcome = (PrimeMultiset, Option<String>);

fn construct_bands(
    c: ComplexExponent,
    target: ComplexValue,
    req: &ApproxRequest,
    sieve: &Sieve,
    limit: f64,
) -> Result<Outcome> {
    let mut bands = SplitBands::new(c, req.min_prime, limit, sieve)?;
    let theta = target.arg();
    let log_mod = target.norm().ln();
    // |e^δ - 1| < eps/|z| once |δ| < log(1 + eps/|z|); a round at t leaves |δ| < 1.12 t
    let mut tol = (1.0 + req.eps / target.norm()).ln() / 2.0;
    let mut w = Walk::new(c, &PrimeMultiset::one(), req.budget.max_primes);
    for _ in 0..MAX_ROUNDS {
        if let Err(stop) = w.round(&mut bands, theta, log_mod, tol) {
            let note = match stop {
                Stop::Coverage(kind) => {
                    format!("{kind:?}-band primes up to {limit} exhausted at tolerance {tol:e}")
                }
                Stop::Budget => format!("prime budget of {} reached", req.budget.max_primes),
            };
            return Ok((w.multiset(), Some(note)));
        }
        let n = w.multiset();
        if (sigma_of_multiset(&n, c) - target).norm() < req.eps {
            return Ok((n, None));
        }
        tol /= 2.0;
    }
    Ok((
        w.multiset(),
        Some(format!("no convergence after {MAX_ROUNDS} rounds")),
    ))
}

/// `a = 0`: every factor `1 + e^{iφ} = 2cos(φ/2) e^{iφ/2}` has modulus independent of
/// `p`, so the target is assembled from factors at chosen arguments: rotations by
/// `π/3` (`φ = 2π/3`), one partial rotation `φ = 2y`, and conjugate pairs
/// `φ = ±φ'` contributing the real factor `4cos²(φ'/2)`.
fn construct_unit_circle(
    c: ComplexExponent,
    target: ComplexValue,
    req: &ApproxRequest,
    sieve: &Sieve,
    limit: f64,
) -> Result<Outcome> {
    let theta = target.arg().rem_euclid(TAU);
    let turns = ((theta / FRAC_PI_3).floor() as usize).min(5);
    let y = theta - turns as f64 * FRAC_PI_3;
    let mut phis = vec![2.0 * FRAC_PI_3; turns];
    let mut modulus = target.norm();
    if y > 0.0 {
        phis.push(2.0 * y);
        modulus /= 2.0 * y.cos();
    }
    let pairs = if modulus < 3.0 {
        1
    } else {
        (modulus.ln() / 3f64.ln()).floor() as usize + 1
    };
    let share = modulus.powf(1.0 / pairs as f64);
    let phi_pair = 2.0 * (share.sqrt() / 2.0).acos();
    for _ in 0..pairs {
        phis.push(phi_pair);
        phis.push(-phi_pair);
    }
    // d log(1 + e^{iφ}) / dφ has modulus 1/(2cos(φ/2))
    let weakest = phis.iter().map(|&p| (p / 2.0).cos()).fold(1.0, f64::min);
    let mut width = (1.0 + req.eps / target.norm()).ln() * weakest / phis.len() as f64;
    let mut best: Option<(PrimeMultiset, f64)> = None;
    for _ in 0..MAX_ROUNDS {
        match place_primes(c, &phis, width, req.min_prime, sieve, limit) {
            Ok(n) => {
                let err = (sigma_of_multiset(&n, c) - target).norm();
                if err < req.eps {
                    return Ok((n, None));
                }
                if best.as_ref().is_none_or(|(_, e)| err < *e) {
                    best = Some((n, err));
                }
            }
            Err(e) => {
                let n = best.map(|(n, _)| n).unwrap_or_else(PrimeMultiset::one);
                return Ok((n, Some(format!("argument width {width:e}: {e}"))));
            }
        }
        width /= 2.0;
    }
    let n = best.map(|(n, _)| n).unwrap_or_else(PrimeMultiset::one);
    Ok((n, Some(format!("no convergence after {MAX_ROUNDS} rounds"))))
}

fn place_primes(
    c: ComplexExponent,
    phis: &[f64],
    width: f64,
    min_prime: u64,
    sieve: &Sieve,
    limit: f64,
) -> Result<PrimeMultiset> {
    let mut used: Vec<u64> = Vec::with_capacity(phis.len());
    for &phi in phis {
        let p = prime_with_arg_excluding(c.b, wrap_angle(phi), width, min_prime + 1, sieve, |q| {
            used.contains(&q)
        })?;
        if p as f64 > limit {
            return Err(Error::Coverage {
                what: format!("prime with argument {phi} within {width:e}"),
                required: p as f64,
            });
        }
        used.push(p);
    }
    used.sort_unstable();
    Ok(PrimeMultiset::from_sorted_unchecked(
        used.into_iter().map(|p| (p, 1)).collect(),
    ))
}
