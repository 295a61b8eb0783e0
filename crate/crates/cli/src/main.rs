//! `cdivisor`: evaluate complex divisor functions, classify their ranges and
//! emit reports as JSON or point clouds as CSV.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use cdivisor_core::{ComplexExponent, Error};
use clap::{Parser, Subcommand, ValueEnum};

/// Exit status for each failure class.
pub const EXIT_DOMAIN: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;
pub const EXIT_INDETERMINATE: u8 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "cdivisor",
    version,
    about = "Complex divisor functions σ_c(n) = Σ_{d|n} d^c"
)]
pub struct Cli {
    /// Primes are sieved up to this bound for searches that need them.
    #[arg(
        long,
        global = true,
        env = "CDIVISOR_SIEVE_LIMIT",
        default_value_t = 10_000_000
    )]
    pub sieve_limit: u64,

    /// Output format for `sigma` (default json) and `scatter` (default csv).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// σ_c(n).
    Sigma {
        #[arg(long, allow_hyphen_values = true)]
        c: ComplexExponent,
        #[arg(long)]
        n: u64,
    },
    /// Topological classification of the range of σ_c.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        c: Option<ComplexExponent>,
        /// Exact exponent c = i(ℓ/m)π/log p; gives `c` when it is omitted.
        #[arg(long, requires_all = ["ell", "m"])]
        p: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        ell: Option<i64>,
        #[arg(long)]
        m: Option<u64>,
    },
    /// Writes σ_c(1..=nmax) as CSV, with a ζ(1 - c) marker row when a < -1.
    Scatter {
        #[arg(long, allow_hyphen_values = true)]
        c: ComplexExponent,
        #[arg(long)]
        nmax: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Squarefree N with |σ_c(N) - target| < eps, all primes above min-prime.
    Approx {
        #[arg(long, allow_hyphen_values = true)]
        c: ComplexExponent,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, default_value_t = 2)]
        min_prime: u64,
    },
    /// Σ_{n≤x} σ_c(n) against xζ(1 - c).
    Meansum {
        #[arg(long, allow_hyphen_values = true)]
        c: ComplexExponent,
        #[arg(long)]
        x: u64,
    },
    /// Sampled distance between σ_c(S_k) and σ_c(V_k) against δ_k.
    Separation {
        #[arg(long, allow_hyphen_values = true)]
        c: ComplexExponent,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 100_000)]
        nmax: u64,
    },
    /// Certifies F < 0 on (3.02, 5) with the two built-in grids.
    VerifyNegativity,
    /// L_k(a), δ_k(a) and the separation inequality.
    Lk {
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
    },
    /// ζ(-a) < (1 + 2^a)/(1 - 2^{a-1} - 2^{3a-1}).
    Eq2 {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
    },
    /// Estimated threshold below which the separation inequality holds.
    Tau {
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// N = p^{2m-1} with σ_c(N) = 0 for c = i(ℓ/m)π/log p.
    ZeroWitness {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        ell: i64,
        #[arg(long)]
        m: u64,
    },
    /// Squarefree N with |σ_c(N)| > M.
    Unbounded {
        #[arg(long, allow_hyphen_values = true)]
        c: ComplexExponent,
        #[arg(long = "M")]
        big_m: f64,
    },
    /// All n with |σ_c(n)| < D, for a > 0.
    SmallBall {
        #[arg(long, allow_hyphen_values = true)]
        c: ComplexExponent,
        #[arg(long = "D")]
        d: f64,
    },
    /// Smallest prime q > n with q^a·|σ_c(n)| < eps, so σ_c(qn) lies within eps of σ_c(n).
    IsolatedNeighbor {
        #[arg(long, allow_hyphen_values = true)]
        c: ComplexExponent,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        eps: f64,
    },
}

/// A command's complete output and its exit status.
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::Coverage { .. } | Error::Budget { .. } | Error::Resource(_) => EXIT_BUDGET,
        Error::Indeterminate(_) => EXIT_INDETERMINATE,
        Error::Domain(_)
        | Error::Convergence { .. }
        | Error::Consistency(_)
        | Error::NoZero(_)
        | Error::VanishingFactor { .. }
        | Error::Precondition(_) => EXIT_DOMAIN,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn exit_codes_follow_error_classes() {
        assert_eq!(exit_code(&Error::Domain("x".into())), 2);
        assert_eq!(exit_code(&Error::Precondition("x".into())), 2);
        assert_eq!(exit_code(&Error::Io("x".into())), 3);
        assert_eq!(exit_code(&Error::Resource("x".into())), 4);
        let coverage = Error::Coverage {
            what: "x".into(),
            required: 1.0,
        };
        assert_eq!(exit_code(&coverage), 4);
        assert_eq!(exit_code(&Error::Indeterminate("x".into())), 5);
    }

    #[test]
    fn flags_parse() {
        let cli =
            Cli::try_parse_from(["cdivisor", "small-ball", "--c", "-1+2i", "--D", "4"]).unwrap();
        assert!(matches!(cli.command, Command::SmallBall { d, .. } if d == 4.0));
        assert!(Cli::try_parse_from(["cdivisor", "sigma", "--c", "1+1", "--n", "2"]).is_err());
        Cli::command().debug_assert();
    }
}
