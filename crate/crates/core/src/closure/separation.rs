use serde::{Deserialize, Serialize};

use crate::certified::{CertifiedReal, CompensatedSum, Truth, EPS};
use crate::error::{domain, Error, Result};
use crate::exponent::{ComplexExponent, ComplexValue};
use crate::sieve::Sieve;
use crate::sigma::{sigma_table, spf_table};
use crate::zeta::zeta_real;

/// Default absolute error target for [`l_k`].
pub const L_K_TARGET: f64 = 1e-9;

/// Largest `n_max` accepted by [`empirical_separation`].
pub const SEPARATION_CAP: u64 = 1_000_000;

const TAU_GRID_LO: f64 = -40.0;
const TAU_GRID_STEP: f64 = 0.05;

fn check_a(a: f64) -> Result<()> {
    if !(a < -1.0) {
        return Err(Error::Convergence {
            re: -a,
            im: 0.0,
            min_re: 1.0,
            required_terms: f64::INFINITY,
        });
    }
    Ok(())
}

fn kth_prime(k: usize, sieve: &Sieve) -> Result<u64> {
    if k == 0 {
        return domain("k must be at least 1");
    }
    sieve.nth(k).ok_or_else(|| Error::Coverage {
        what: format!("prime number {k}"),
        required: k as f64,
    })
}

/// `L_k(a) = Σ_{v ∈ V_k, v > 1} v^a`, computed as `∏_{p > p_k} (1 - p^a)^{-1} - 1`.
///
/// The product runs to the smallest `P` whose tail bound `2P^{1+a}/(-1-a)` is
/// below half of [`L_K_TARGET`], or to the sieve limit if that comes first, in
/// which case the returned error bound is correspondingly larger.
pub fn l_k(k: usize, a: f64, sieve: &Sieve) -> Result<CertifiedReal> {
    check_a(a)?;
    let pk = kth_prime(k, sieve)?;
    let wanted = (0.5 * L_K_TARGET * (-1.0 - a) / 2.0).powf(1.0 / (1.0 + a));
    let cap = sieve.limit() as f64;
    let p_max = wanted.min(cap).max(pk as f64);
    let primes = sieve.range(pk as f64 + 1.0, p_max);
    // small terms first
    let mut s = CompensatedSum::default();
    for &p in primes.iter().rev() {
        s.add(ComplexValue::new(-(-(p as f64).powf(a)).ln_1p(), 0.0));
    }
    let s = s.value().re;
    let tail = 2.0 * p_max.powf(1.0 + a) / (-1.0 - a);
    let value = s.exp_m1();
    let rounding = 8.0 * EPS * s * s.exp() + 2.0 * EPS * value.abs();
    let spread = s.exp() * tail.exp_m1();
    Ok(CertifiedReal::new(value, spread + rounding))
}

/// `L_1(a) = -1 + ζ(-a)(1 - 2^a)`.
pub fn l1_closed_form(a: f64, tol: f64) -> Result<CertifiedReal> {
    let z = zeta_real(-a, tol)?;
    let f = 1.0 - 2f64.powf(a);
    let value = -1.0 + z.value * f;
    Ok(CertifiedReal::new(
        value,
        z.error_bound * f + 4.0 * EPS * (z.value * f + 1.0),
    ))
}

fn delta_from(pk: u64, a: f64, l: f64) -> f64 {
    let x = (pk as f64).powf(a);
    let x2 = x * x;
    (x - x2 - l * (x + x2 + 2.0)) / (1.0 + x)
}

/// `δ_k(a)`, the separation between `σ_c(S_k)` and `σ_c(V_k)` implied by `L_k`.
pub fn delta_k(k: usize, a: f64, sieve: &Sieve) -> Result<f64> {
    let l = l_k(k, a, sieve)?;
    Ok(delta_from(kth_prime(k, sieve)?, a, l.value))
}

fn eq1_truth(pk: u64, a: f64, l: CertifiedReal) -> Truth {
    let x = (pk as f64).powf(a);
    let x2 = x * x;
    let w = x + x2 + 2.0;
    let pad = 8.0 * EPS * (l.value.abs() * w + x + x2);
    let g = |l: f64| l * w + x2 - x;
    if g(l.hi()) + pad < 0.0 {
        Truth::True
    } else if g(l.lo()) - pad >= 0.0 {
        Truth::False
    } else {
        Truth::Indeterminate
    }
}

/// Whether `L_k(a)(p_k^a + p_k^{2a} + 2) + p_k^{2a} < p_k^a`, evaluated over the
/// whole enclosure of `L_k`.
pub fn eq1_holds(k: usize, a: f64, sieve: &Sieve) -> Result<Truth> {
    let l = l_k(k, a, sieve)?;
    Ok(eq1_truth(kth_prime(k, sieve)?, a, l))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eq2Report {
    pub a: f64,
    pub zeta: CertifiedReal,
    /// `(1 + 2^a)/(1 - 2^{a-1} - 2^{3a-1})`
    pub rhs: f64,
    pub holds: Truth,
    /// For `a <= -5`, whether `ζ(-a) ≤ 1 + 2^a + 2^{a+1}/(-a-1)` already forces
    /// the inequality.
    pub elementary_bound_holds: Option<bool>,
}

/// `ζ(-a) < (1 + 2^a)/(1 - 2^{a-1} - 2^{3a-1})`, the `k = 1` case of
/// [`eq1_holds`] with `L_1` written through `ζ`.
pub fn eq2_holds(a: f64) -> Result<Eq2Report> {
    if !(a < -1.01) {
        return domain(format!("need a < -1.01, got {a}"));
    }
    let z = best_zeta(-a)?;
    let t = 2f64.powf(a);
    let den = 1.0 - t / 2.0 - t * t * t / 2.0;
    let rhs = (1.0 + t) / den;
    let pad = 8.0 * EPS * rhs;
    let holds = if z.hi() < rhs - pad {
        Truth::True
    } else if z.lo() >= rhs + pad {
        Truth::False
    } else {
        Truth::Indeterminate
    };
    let elementary_bound_holds = (a <= -5.0).then(|| {
        let zeta_bound = 1.0 + t + 2.0 * t / (-(a + 1.0));
        let step1 = z.hi() <= zeta_bound;
        let step2 = zeta_bound * (1.0 - t / 2.0) <= 1.0 + t;
        step1 && step2
    });
    Ok(Eq2Report {
        a,
        zeta: z,
        rhs,
        holds,
        elementary_bound_holds,
    })
}

fn best_zeta(x: f64) -> Result<CertifiedReal> {
    let mut last = None;
    for tol in [1e-13, 1e-11, 1e-9] {
        match zeta_real(x, tol) {
            Err(Error::Precondition(m)) => last = Some(Error::Precondition(m)),
            other => return other,
        }
    }
    Err(last.unwrap())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauEstimate {
    pub k: usize,
    /// Largest `a` reached from below with [`eq1_holds`] true on every grid point
    /// and along the bisection; `None` if it fails at the bottom of the grid.
    pub estimate: Option<f64>,
    pub tol: f64,
    pub grid_step: f64,
    /// `(a, eq1_holds(k, a))` on the scan grid.
    pub grid: Vec<(f64, Truth)>,
    /// Grid points above the estimate where the inequality holds again.
    pub holds_above_estimate: Vec<f64>,
    pub caveat: String,
}

/// Scans `a = -40, -39.95, …, -1.05` for the first failure of [`eq1_holds`] and
/// bisects the crossing to `tol`; an indeterminate outcome counts as a failure.
pub fn tau_k_estimate(k: usize, tol: f64, sieve: &Sieve) -> Result<TauEstimate> {
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let pk = kth_prime(k, sieve)?;
    let holds = |a: f64| -> Result<bool> { Ok(eq1_truth(pk, a, l_k(k, a, sieve)?).is_true()) };
    let mut grid = Vec::new();
    let mut i = 0;
    loop {
        let a = TAU_GRID_LO + TAU_GRID_STEP * i as f64;
        if a >= -1.0 - 1e-9 {
            break;
        }
        grid.push((a, eq1_truth(pk, a, l_k(k, a, sieve)?)));
        i += 1;
    }
    let first_fail = grid.iter().position(|(_, t)| !t.is_true());
    let estimate = match first_fail {
        Some(0) => None,
        Some(j) => Some(bisect(grid[j - 1].0, grid[j].0, tol, &holds)?),
        None => Some(bisect(grid[grid.len() - 1].0, -1.0, tol, &holds)?),
    };
    let holds_above_estimate = match first_fail {
        Some(j) => grid[j..]
            .iter()
            .filter(|(_, t)| t.is_true())
            .map(|&(a, _)| a)
            .collect(),
        None => Vec::new(),
    };
    Ok(TauEstimate {
        k,
        estimate,
        tol,
        grid_step: TAU_GRID_STEP,
        grid,
        holds_above_estimate,
        caveat: "estimate only: monotonicity of the inequality in a is not established".into(),
    })
}

fn bisect(mut lo: f64, mut hi: f64, tol: f64, holds: &dyn Fn(f64) -> Result<bool>) -> Result<f64> {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if holds(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub k: usize,
    pub a: f64,
    pub p_k: u64,
    pub l_k: CertifiedReal,
    pub delta_k: f64,
    pub eq1_holds: Truth,
    /// Minimum distance between `σ_c(m)`, `m ∈ S_k`, and `σ_c(n)`, `n ∈ V_k`,
    /// over `m, n ≤ sample_limit`.
    pub empirical_gap: f64,
    pub sample_limit: u64,
    /// `empirical_gap > delta_k`; only implied by theory when `eq1_holds` is true.
    pub gap_exceeds_delta: bool,
}

/// Samples `σ_c(S_k)` and `σ_c(V_k)` for `n ≤ n_max` and measures their distance.
pub fn empirical_separation(
    c: ComplexExponent,
    k: usize,
    n_max: u64,
    sieve: &Sieve,
) -> Result<SeparationReport> {
    let l = l_k(k, c.a, sieve)?;
    let pk = kth_prime(k, sieve)?;
    let (s_pts, v_pts) = partition(c, n_max, |spf| spf == pk, |spf| spf > pk)?;
    let gap = min_distance(&s_pts, &v_pts);
    let delta = delta_from(pk, c.a, l.value);
    Ok(SeparationReport {
        k,
        a: c.a,
        p_k: pk,
        l_k: l,
        delta_k: delta,
        eq1_holds: eq1_truth(pk, c.a, l),
        empirical_gap: gap,
        sample_limit: n_max,
        gap_exceeds_delta: gap > delta,
    })
}

/// Distance between `σ_c(V_k)` and `σ_c(S_1 ∪ … ∪ S_k)` over `n ≤ n_max`; no
/// positive lower bound is known for this gap.
pub fn empirical_union_gap(c: ComplexExponent, k: usize, n_max: u64, sieve: &Sieve) -> Result<f64> {
    let pk = kth_prime(k, sieve)?;
    let (s_pts, v_pts) = partition(c, n_max, |spf| spf <= pk, |spf| spf > pk)?;
    Ok(min_distance(&s_pts, &v_pts))
}

type Points = Vec<[f64; 2]>;

/// Splits `2..=n_max` by smallest prime factor; `1` always joins the second set.
fn partition(
    c: ComplexExponent,
    n_max: u64,
    first: impl Fn(u64) -> bool,
    second: impl Fn(u64) -> bool,
) -> Result<(Points, Points)> {
    if c.a >= -1.0 {
        return domain(format!("separation needs a < -1, got a = {}", c.a));
    }
    if n_max > SEPARATION_CAP {
        return Err(Error::Resource(format!(
            "separation samples are limited to n_max <= {SEPARATION_CAP}"
        )));
    }
    let n = n_max as usize;
    let values = sigma_table(n, c);
    let spf = spf_table(n);
    let mut a_pts = Vec::new();
    let mut b_pts = Vec::new();
    if n >= 1 {
        b_pts.push([1.0, 0.0]);
    }
    for m in 2..=n {
        let p = spf[m] as u64;
        let z = values[m];
        if first(p) {
            a_pts.push([z.re, z.im]);
        } else if second(p) {
            b_pts.push([z.re, z.im]);
        }
    }
    Ok((a_pts, b_pts))
}

fn min_distance(from: &[[f64; 2]], to: &[[f64; 2]]) -> f64 {
    if from.is_empty() || to.is_empty() {
        return f64::INFINITY;
    }
    let tree = KdTree::new(to.to_vec());
    let mut best = f64::INFINITY;
    for q in from {
        best = best.min(tree.nearest_sq(*q, best * best).sqrt());
    }
    best
}

/// Static 2-d tree stored as an implicit median-split array, with the bounding
/// box of each subtree kept at the index of its root.
struct KdTree {
    pts: Vec<[f64; 2]>,
    boxes: Vec<[f64; 4]>,
}

impl KdTree {
    fn new(mut pts: Vec<[f64; 2]>) -> Self {
        let mut boxes = vec![[0.0; 4]; pts.len()];
        Self::build(&mut pts, &mut boxes, 0);
        KdTree { pts, boxes }
    }

    fn build(pts: &mut [[f64; 2]], boxes: &mut [[f64; 4]], axis: usize) {
        if pts.is_empty() {
            return;
        }
        let mut bb = [
            f64::INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::NEG_INFINITY,
        ];
        for p in pts.iter() {
            bb = [
                bb[0].min(p[0]),
                bb[1].min(p[1]),
                bb[2].max(p[0]),
                bb[3].max(p[1]),
            ];
        }
        let mid = pts.len() / 2;
        boxes[mid] = bb;
        if pts.len() == 1 {
            return;
        }
        pts.select_nth_unstable_by(mid, |x, y| x[axis].total_cmp(&y[axis]));
        let (left, right) = pts.split_at_mut(mid);
        let (bl, br) = boxes.split_at_mut(mid);
        Self::build(left, bl, axis ^ 1);
        Self::build(&mut right[1..], &mut br[1..], axis ^ 1);
    }

    /// Squared distance to the nearest point, or `bound` if none is closer.
    fn nearest_sq(&self, q: [f64; 2], bound: f64) -> f64 {
        let mut best = bound;
        Self::search(&self.pts, &self.boxes, 0, q, &mut best);
        best
    }

    fn search(pts: &[[f64; 2]], boxes: &[[f64; 4]], axis: usize, q: [f64; 2], best: &mut f64) {
        if pts.is_empty() {
            return;
        }
        let mid = pts.len() / 2;
        let bb = boxes[mid];
        let dx = (bb[0] - q[0]).max(q[0] - bb[2]).max(0.0);
        let dy = (bb[1] - q[1]).max(q[1] - bb[3]).max(0.0);
        if dx * dx + dy * dy >= *best {
            return;
        }
        let p = pts[mid];
        let d = (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2);
        if d < *best {
            *best = d;
        }
        let (left, right) = (0..mid, mid + 1..pts.len());
        let (near, far) = if q[axis] < p[axis] {
            (left, right)
        } else {
            (right, left)
        };
        Self::search(&pts[near.clone()], &boxes[near], axis ^ 1, q, best);
        Self::search(&pts[far.clone()], &boxes[far], axis ^ 1, q, best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use std::sync::OnceLock;

    fn sieve() -> &'static Sieve {
        static S: OnceLock<Sieve> = OnceLock::new();
        S.get_or_init(|| Sieve::new(10_000_000).unwrap())
    }

    #[test]
    fn l1_matches_closed_form() {
        for a in [-2.5, -3.02, -4.0, -5.0, -10.0] {
            let e = l_k(1, a, sieve()).unwrap();
            let z = l1_closed_form(a, 1e-13).unwrap();
            assert!(e.error_bound <= L_K_TARGET, "{a}: {}", e.error_bound);
            assert!(e.overlaps(&z), "{a}: {e} vs {z}");
        }
        let l = l_k(1, -4.0, sieve()).unwrap();
        assert!((l.value - 0.014_678_032).abs() < 1e-9);
    }

    #[test]
    fn l2_matches_coprime_sum() {
        let mut s = 0.0;
        for v in (5..=1_000_000u64).filter(|v| v % 2 != 0 && v % 3 != 0) {
            s += (v as f64).powi(-4);
        }
        // integers coprime to 6 above 10^6 contribute less than ∫ t^{-4}/3
        let tail = 1e-18 / 3.0 / 3.0;
        let l = l_k(2, -4.0, sieve()).unwrap();
        assert!((l.value - s).abs() <= l.error_bound + tail + 1e-15);
    }

    #[test]
    fn l1_decreases_with_a() {
        let v = |a| l_k(1, a, sieve()).unwrap().value;
        assert!(v(-10.0) < v(-5.0) && v(-5.0) < v(-3.0));
        assert!(l_k(1, -1.0, sieve()).is_err());
        assert!(l_k(0, -2.0, sieve()).is_err());
    }

    #[test]
    fn delta_examples() {
        let d = delta_k(1, -4.0, sieve()).unwrap();
        let l = 0.014_678_031_57_f64;
        let x = 1.0 / 16.0;
        let expect = (x - x * x - l * (x + x * x + 2.0)) / (1.0 + x);
        assert!(d > 0.0 && (d - expect).abs() < 2e-6);
        let d2 = delta_k(1, -2.0, sieve()).unwrap();
        assert_eq!(d2 > 0.0, eq1_holds(1, -2.0, sieve()).unwrap().is_true());
        // with L = 0 the formula reduces to (x - x²)/(1 + x)
        assert!(
            (delta_from(3, -2.0, 0.0) - (1.0 / 9.0 - 1.0 / 81.0) / (1.0 + 1.0 / 9.0)).abs() < 1e-16
        );
    }

    #[test]
    fn eq1_examples() {
        assert_eq!(eq1_holds(1, -4.0, sieve()).unwrap(), Truth::True);
        assert_eq!(eq1_holds(1, -1.5, sieve()).unwrap(), Truth::False);
        assert_eq!(
            eq1_holds(1, -3.02, sieve()).unwrap(),
            eq2_holds(-3.02).unwrap().holds
        );
    }

    #[test]
    fn eq2_examples() {
        let r = eq2_holds(-5.0).unwrap();
        assert_eq!(r.holds, Truth::True);
        assert_eq!(r.elementary_bound_holds, Some(true));
        assert_eq!(eq2_holds(-3.1).unwrap().holds, Truth::True);
        let r = eq2_holds(-1.5).unwrap();
        assert_eq!(r.holds, Truth::False);
        assert!((r.rhs - 1.689_563).abs() < 1e-6);
        assert_eq!(r.elementary_bound_holds, None);
        assert!(eq2_holds(-1.0).is_err());
        assert_eq!(eq2_holds(-12.0).unwrap().elementary_bound_holds, Some(true));
    }

    #[test]
    fn eq1_and_eq2_agree_for_k1() {
        for i in 0..60 {
            let a = -1.2 - 0.15 * i as f64;
            let t1 = eq1_holds(1, a, sieve()).unwrap();
            let t2 = eq2_holds(a).unwrap().holds;
            if t1 != Truth::Indeterminate && t2 != Truth::Indeterminate {
                assert_eq!(t1, t2, "a = {a}");
            }
        }
    }

    #[test]
    fn tau_estimates() {
        let t = tau_k_estimate(1, 1e-6, sieve()).unwrap();
        let e = t.estimate.unwrap();
        assert!((-3.02..-1.0).contains(&e), "{e}");
        assert!(eq2_holds(e - 1e-3).unwrap().holds.is_true());
        assert!(!eq2_holds(e + 1e-3).unwrap().holds.is_true());
        let coarse = tau_k_estimate(1, 1e-3, sieve()).unwrap().estimate.unwrap();
        assert!((coarse - e).abs() <= 1e-3);
        let t2 = tau_k_estimate(2, 1e-4, sieve()).unwrap();
        assert!(t2.estimate.unwrap() <= -1.0);
        assert_eq!(t2.grid.len(), 780);
        assert!(!t2.caveat.is_empty());
    }

    #[test]
    fn kd_tree_matches_brute_force() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a: Vec<[f64; 2]> = (0..300).map(|_| [rng.gen(), rng.gen()]).collect();
            let b: Vec<[f64; 2]> = (0..250)
                .map(|_| [rng.gen::<f64>() + 0.3, rng.gen()])
                .collect();
            let mut brute = f64::INFINITY;
            for p in &a {
                for q in &b {
                    brute = brute.min(((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt());
                }
            }
            assert_eq!(min_distance(&a, &b), brute);
        }
        assert_eq!(min_distance(&[], &[[0.0, 0.0]]), f64::INFINITY);
    }

    #[test]
    fn separation_examples() {
        let c = ComplexExponent::new(-4.0, 0.0).unwrap();
        let r = empirical_separation(c, 1, 100_000, sieve()).unwrap();
        assert_eq!(r.eq1_holds, Truth::True);
        assert!(r.delta_k > 0.0 && r.gap_exceeds_delta);
        let c = ComplexExponent::new(-4.0, 1.0).unwrap();
        let r2 = empirical_separation(c, 1, 100_000, sieve()).unwrap();
        assert!(r2.empirical_gap > r.delta_k && r2.eq1_holds.is_true());
        let c = ComplexExponent::new(-1.5, 0.0).unwrap();
        let r3 = empirical_separation(c, 1, 20_000, sieve()).unwrap();
        assert_eq!(r3.eq1_holds, Truth::False);
        assert!(empirical_separation(c, 1, SEPARATION_CAP + 1, sieve()).is_err());
    }

    #[test]
    fn union_gap_is_finite() {
        let c = ComplexExponent::new(-3.0, 0.5).unwrap();
        let g = empirical_union_gap(c, 2, 10_000, sieve()).unwrap();
        assert!(g.is_finite() && g >= 0.0);
    }
}
