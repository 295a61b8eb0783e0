use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The prime sieve does not reach far enough for the requested search.
    #[error("sieve coverage exhausted: {what} (requires primes up to {required})")]
    Coverage { what: String, required: f64 },

    /// A constructive search ran out of its allowed primes before meeting its goal.
    #[error("budget exhausted after {primes_used} primes: {what} (achieved {achieved})")]
    Budget {
        what: String,
        primes_used: usize,
        achieved: f64,
    },

    /// A size or memory cap was exceeded.
    #[error("resource limit: {0}")]
    Resource(String),

    /// A series converges too slowly near its abscissa of convergence.
    #[error("zeta({re}+{im}i) not evaluable: real part must exceed {min_re}; direct summation would need {required_terms:e} terms")]
    Convergence {
        re: f64,
        im: f64,
        min_re: f64,
        required_terms: f64,
    },

    /// Exact and floating descriptions of an exponent disagree.
    #[error("inconsistent exponent: {0}")]
    Consistency(String),

    /// The exact exponent admits no integer with a vanishing divisor sum.
    #[error("no zero in range: {0}")]
    NoZero(String),

    /// A factor 1 + p^c vanishes to working precision, so its logarithm is -infinity.
    #[error("factor 1 + {p}^c vanishes (log modulus is -infinity)")]
    VanishingFactor { p: u64 },

    /// A strict inequality could not be decided because certified errors straddle it.
    #[error("indeterminate inequality: {0}")]
    Indeterminate(String),

    /// Input fails a stated precondition of a numerical procedure.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Reading or writing a data file failed, or its contents are malformed.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
