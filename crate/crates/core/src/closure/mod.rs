//! Closure of the range for `a < -1`: Cesàro means against `ζ(1 - c)`, the
//! separation of `σ_c(S_k)` from `σ_c(V_k)`, and grid certification of the
//! inequality behind the `k = 1` separation.
//!
//! Here `V_k` is the set of integers free of the first `k` primes (it contains 1)
//! and `S_k` the set of integers whose least prime factor is `p_k`.

mod mean;
mod negativity;
mod separation;

pub use mean::{
    empirical_centroid, mean_value_report, partial_sum, MeanValueReport, PARTIAL_SUM_CAP,
};
pub use negativity::{
    eq2_difference, eq2_difference_slope_bound, verify_negative, NegativityCheck,
    VerifiedNegativityReport,
};
pub use separation::{
    delta_k, empirical_separation, empirical_union_gap, eq1_holds, eq2_holds, l1_closed_form, l_k,
    tau_k_estimate, Eq2Report, SeparationReport, TauEstimate, L_K_TARGET, SEPARATION_CAP,
};
