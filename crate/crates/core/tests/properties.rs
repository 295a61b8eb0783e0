use std::f64::consts::PI;
use std::sync::OnceLock;

use cdivisor_core::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn sieve() -> &'static Sieve {
    static S: OnceLock<Sieve> = OnceLock::new();
    S.get_or_init(|| Sieve::new(3_000_000).unwrap())
}

fn exponent(
    a: std::ops::Range<f64>,
    b: std::ops::Range<f64>,
) -> impl Strategy<Value = ComplexExponent> {
    (a, b).prop_map(|(a, b)| ComplexExponent::new(a, b).unwrap())
}

fn gcd(mut x: u64, mut y: u64) -> u64 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

fn close(x: Complex64, y: Complex64, rel: f64) -> bool {
    (x - y).norm() <= rel * x.norm().max(y.norm()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn multiplicative(m in 1u64..20_000, n in 1u64..20_000, c in exponent(-3.0..3.0, -4.0..4.0)) {
        prop_assume!(gcd(m, n) == 1);
        let lhs = sigma(m * n, c).unwrap();
        let rhs = sigma(m, c).unwrap() * sigma(n, c).unwrap();
        prop_assert!(close(lhs, rhs, 1e-10), "{lhs} vs {rhs}");
    }

    #[test]
    fn conjugate_exponent_conjugates_value(n in 1u64..1_000_000, c in exponent(-3.0..3.0, -6.0..6.0)) {
        prop_assert_eq!(sigma(n, c.conj()).unwrap(), sigma(n, c).unwrap().conj());
    }

    #[test]
    fn modulus_at_most_real_divisor_sum(n in 1u64..200_000, c in exponent(-3.0..2.0, -6.0..6.0)) {
        let z = sigma(n, c).unwrap().norm();
        let real = sigma(n, ComplexExponent::real(c.a).unwrap()).unwrap().re;
        prop_assert!(z <= real * (1.0 + 1e-12));
    }

    #[test]
    fn fast_path_matches_divisor_enumeration(n in 1u64..100_000, c in exponent(-3.0..3.0, -3.0..3.0)) {
        let fast = sigma(n, c).unwrap();
        let direct = sigma_direct(n, c).unwrap();
        prop_assert!(close(fast, direct, 1e-9));
    }

    #[test]
    fn bounded_below_zeta(n in 1u64..1_000_000, a in -4.0f64..-1.05, b in -5.0f64..5.0) {
        let c = ComplexExponent::new(a, b).unwrap();
        let z = zeta_real(-a, 1e-9).unwrap();
        prop_assert!(sigma(n, c).unwrap().norm() < z.hi());
    }

    #[test]
    fn positive_a_lower_bound(n in 1u64..200_000, a in 0.2f64..3.0, b in -3.0f64..3.0) {
        let c = ComplexExponent::new(a, b).unwrap();
        let lb = lower_bound_positive_a(c).unwrap();
        prop_assert!(sigma(n, c).unwrap().norm() >= lb * (1.0 - 1e-12));
    }

    #[test]
    fn factorization_multiplies_back(n in 1u64..1_000_000_000_000) {
        let f = factorize(n).unwrap();
        let mut prod = 1u64;
        for &(p, e) in f.factors() {
            prop_assert!(is_prime(p));
            prod *= p.pow(e);
        }
        prop_assert_eq!(prod, n);
    }

    #[test]
    fn wrapped_angles_are_principal(t in -1e6f64..1e6) {
        let w = wrap_angle(t);
        prop_assert!(w > -PI && w <= PI);
        let k = ((t - w) / (2.0 * PI)).round();
        prop_assert!((t - w - 2.0 * PI * k).abs() < 1e-9 * t.abs().max(1.0));
    }

    #[test]
    fn zeta_reflects_under_conjugation(re in 1.1f64..8.0, im in -20.0f64..20.0) {
        let s = Complex64::new(re, im);
        let z = zeta(s, 1e-10).unwrap();
        let w = zeta(s.conj(), 1e-10).unwrap();
        prop_assert!((z.value.conj() - w.value).norm() <= z.error_bound + w.error_bound);
    }

    #[test]
    fn partial_sum_is_cumulative(x in 1u64..3000, c in exponent(-3.0..1.0, -3.0..3.0)) {
        let step = partial_sum(c, x).unwrap() - partial_sum(c, x - 1).unwrap();
        prop_assert!(close(step, sigma(x, c).unwrap(), 1e-8) || (step - sigma(x, c).unwrap()).norm() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prime_with_arg_is_first_in_window(b in 1.0f64..4.0, phi in -3.1f64..3.1, eps in 0.1f64..0.5, min_prime in 1u64..500) {
        let p = prime_with_arg(b, phi, eps, min_prime, sieve()).unwrap();
        prop_assert!(p >= min_prime);
        prop_assert!(wrap_angle(b * (p as f64).ln() - phi).abs() < eps);
        let earlier = sieve()
            .iter()
            .take_while(|&q| q < p)
            .filter(|&q| q >= min_prime)
            .find(|&q| wrap_angle(b * (q as f64).ln() - phi).abs() < eps);
        prop_assert_eq!(earlier, None);
    }

    #[test]
    fn band_primes_have_band_arguments(b in 1.5f64..4.0, k in 1u64..4) {
        let fam = BandFamily::new(BandKind::G, b, DEFAULT_BETA, k).unwrap();
        for p in primes_in_band(sieve(), &fam).unwrap() {
            prop_assert!(wrap_angle(b * (p as f64).ln()).abs() <= DEFAULT_BETA + 1e-12);
        }
    }

    #[test]
    fn approximations_meet_their_contract(r in 0.5f64..5.0, t in -3.1f64..3.1, min_prime in 2u64..200) {
        let c = ComplexExponent::new(-0.5, 1.0).unwrap();
        let req = ApproxRequest {
            c,
            target: Complex64::from_polar(r, t),
            eps: 0.05,
            min_prime,
            budget: WitnessBudget::default(),
        };
        let res = approx_target(&req, sieve()).unwrap();
        prop_assert!(res.n.is_squarefree());
        prop_assert!(res.n.primes().all(|p| p > min_prime));
        prop_assert_eq!(res.value, sigma_of_multiset(&res.n, c));
        if res.converged() {
            prop_assert!((res.value - req.target).norm() < req.eps);
        } else {
            prop_assert!(res.note.is_some());
        }
    }

    #[test]
    fn scatter_round_trips(a in -3.0f64..1.0, b in -3.0f64..3.0, n_max in 1u64..2000) {
        let c = ComplexExponent::new(a, b).unwrap();
        let mut buf = Vec::new();
        let rows = write_scatter(&mut buf, c, n_max).unwrap();
        let parsed = read_scatter(&buf[..]).unwrap();
        prop_assert_eq!(parsed.len() as u64, rows);
        prop_assert_eq!(rows, n_max + u64::from(a < -1.0));
        let table = sigma_table(n_max as usize, c);
        for row in parsed.iter().filter(|r| r.n > 0) {
            prop_assert_eq!(row.value, table[row.n as usize]);
        }
    }

    #[test]
    fn certified_comparisons_respect_enclosure(v in -10.0f64..10.0, e in 0.0f64..1.0, x in -12.0f64..12.0) {
        let r = CertifiedReal::new(v, e);
        match r.lt(x) {
            Truth::True => prop_assert!(r.hi() < x),
            Truth::False => prop_assert!(r.lo() >= x),
            Truth::Indeterminate => prop_assert!(r.lo() < x && x <= r.hi()),
        }
    }

    #[test]
    fn separation_gap_exceeds_delta_when_guaranteed(a in -9.0f64..-3.2, b in -2.0f64..2.0, k in 1usize..4) {
        let c = ComplexExponent::new(a, b).unwrap();
        let r = empirical_separation(c, k, 20_000, sieve()).unwrap();
        if r.eq1_holds.is_true() {
            prop_assert!(r.delta_k > 0.0);
            prop_assert!(r.empirical_gap > r.delta_k, "{r:?}");
        }
    }

    #[test]
    fn eq1_agrees_with_eq2_for_first_prime(a in -12.0f64..-1.05) {
        let t1 = eq1_holds(1, a, sieve()).unwrap();
        let t2 = eq2_holds(a).unwrap().holds;
        if t1 != Truth::Indeterminate && t2 != Truth::Indeterminate {
            prop_assert_eq!(t1, t2);
        }
    }
}
