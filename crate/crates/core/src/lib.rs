//! Complex divisor functions `σ_c(n) = Σ_{d|n} d^c`.
//!
//! Evaluation and certified zeta values live in [`sigma`] and [`zeta`]; prime sieving
//! and the argument bands in [`sieve`] and [`bands`]; the topological verdicts on the
//! range of `σ_c` in [`classify`]; constructive approximation in [`approx`]; mean
//! values, separation gaps and grid-certified inequalities in [`closure`]; CSV point
//! clouds in [`scatter`].
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod bands;
pub mod certified;
pub mod classify;
pub mod closure;
pub mod error;
pub mod exponent;
pub mod factor;
pub mod scatter;
pub mod sieve;
pub mod sigma;
pub mod zeta;

pub use approx::{
    adjust_modulus, approx_arg, approx_target, ApproxRequest, ApproxResult, ApproxStatus,
};
pub use bands::{
    arg_of_power, band_interval, band_partial_sum, band_primes_up_to, log_abs_one_plus_power,
    mertens_window_check, prime_with_arg, primes_in_band, wrap_angle, BandFamily, BandKind,
    MertensWindow, DEFAULT_BETA,
};
pub use certified::{CertifiedReal, Truth};
pub use classify::{
    classify, isolated_neighbor, lower_bound_positive_a, small_modulus_enumerate,
    unbounded_witness, zero_witness, Classification, IsolatedNeighbor, WitnessBudget,
    ZeroMembership,
};
pub use closure::{
    delta_k, empirical_centroid, empirical_separation, eq1_holds, eq2_difference,
    eq2_difference_slope_bound, eq2_holds, l_k, mean_value_report, partial_sum, tau_k_estimate,
    verify_negative, Eq2Report, MeanValueReport, NegativityCheck, SeparationReport, TauEstimate,
    VerifiedNegativityReport,
};
pub use error::{Error, Result};
pub use exponent::{ComplexExponent, ComplexValue, ExactExponent};
pub use factor::{factorize, is_prime, Factorization, PrimeMultiset};
pub use scatter::{read_scatter, write_scatter, ScatterRow};
pub use sieve::{nth_prime, primes_up_to, Sieve};
pub use sigma::{
    complex_power, sigma, sigma_direct, sigma_of_multiset, sigma_prime_power, sigma_table,
};
pub use zeta::{zeta, zeta_direct, zeta_real, ZetaValue};
