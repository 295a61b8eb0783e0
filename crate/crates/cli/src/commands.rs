use std::fs::File;
use std::io::{BufWriter, Write};

use cdivisor_core::closure::{l1_closed_form, L_K_TARGET};
use cdivisor_core::exponent::split_complex;
use cdivisor_core::scatter::SCATTER_CAP;
use cdivisor_core::*;
use num_complex::Complex64;
use serde::Serialize;

use crate::{Cli, Command, Format, Outcome, EXIT_BUDGET, EXIT_INDETERMINATE};

pub const MIN_SIEVE_LIMIT: u64 = 1_000;

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn ok(stdout: String) -> Result<Outcome> {
    Ok(Outcome { stdout, code: 0 })
}

fn sieve(cli: &Cli) -> Result<Sieve> {
    if cli.sieve_limit < MIN_SIEVE_LIMIT {
        return Err(Error::Domain(format!(
            "sieve limit must be at least {MIN_SIEVE_LIMIT}, got {}",
            cli.sieve_limit
        )));
    }
    Sieve::new(cli.sieve_limit)
}

fn truth_code(t: Truth) -> u8 {
    if t == Truth::Indeterminate {
        EXIT_INDETERMINATE
    } else {
        0
    }
}

#[derive(Serialize)]
struct SigmaOut {
    c: ComplexExponent,
    n: u64,
    value: ComplexValue,
}

#[derive(Serialize)]
struct ClassifyOut {
    #[serde(flatten)]
    classification: Classification,
    /// The zero witness written as a factorization, when there is one.
    zero_witness: Option<String>,
}

#[derive(Serialize)]
struct ApproxOut {
    c: ComplexExponent,
    target: ComplexValue,
    eps: f64,
    min_prime: u64,
    /// The primes of the squarefree N, ascending.
    n: Vec<u64>,
    value: ComplexValue,
    abs_error: f64,
    primes_used: usize,
    largest_prime: Option<u64>,
    status: ApproxStatus,
    note: Option<String>,
}

#[derive(Serialize)]
struct MeanOut {
    #[serde(flatten)]
    report: MeanValueReport,
    cesaro_mean: ComplexValue,
}

#[derive(Serialize)]
struct NegativityOut {
    lower: VerifiedNegativityReport,
    upper: VerifiedNegativityReport,
    verdict: bool,
}

#[derive(Serialize)]
struct LkOut {
    k: usize,
    a: f64,
    p_k: u64,
    l_k: CertifiedReal,
    /// `-1 + ζ(-a)(1 - 2^a)`, only for `k = 1`.
    closed_form: Option<CertifiedReal>,
    delta_k: f64,
    eq1_holds: Truth,
}

#[derive(Serialize)]
struct ZeroOut {
    c: ComplexExponent,
    n: String,
    factors: PrimeMultiset,
    n_value: Option<u64>,
    value: ComplexValue,
    modulus: f64,
}

#[derive(Serialize)]
struct UnboundedOut {
    c: ComplexExponent,
    #[serde(rename = "M")]
    m: f64,
    n: Vec<u64>,
    value: ComplexValue,
    modulus: f64,
}

#[derive(Serialize)]
struct SmallBallOut {
    c: ComplexExponent,
    #[serde(rename = "D")]
    d: f64,
    lower_bound: f64,
    n: Vec<u64>,
}

#[derive(Serialize)]
struct NeighborOut {
    c: ComplexExponent,
    n: u64,
    eps: f64,
    q: u64,
    distance: f64,
}

#[derive(Serialize)]
struct ScatterSummary<'a> {
    path: &'a str,
    rows: u64,
    marker: bool,
}

#[derive(Serialize)]
struct ScatterJson {
    c: ComplexExponent,
    /// `[n, re, im]`; `n = 0` is the `ζ(1 - c)` marker.
    rows: Vec<(u64, f64, f64)>,
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Sigma { c, n } => {
            let value = sigma(*n, *c)?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => ok(json(&SigmaOut {
                    c: *c,
                    n: *n,
                    value,
                })?),
                Format::Csv => ok(format!(
                    "n,re,im\n{n},{:.16e},{:.16e}\n",
                    value.re, value.im
                )),
            }
        }
        Command::Classify { c, p, ell, m } => {
            let exact = match (p, ell, m) {
                (Some(p), Some(ell), Some(m)) => Some(ExactExponent::new(*p, *ell, *m)?),
                _ => None,
            };
            let c = match (c, &exact) {
                (Some(c), _) => *c,
                (None, Some(e)) => e.to_exponent(),
                (None, None) => return Err(Error::Domain("give --c or --p/--ell/--m".into())),
            };
            let classification = classify(c, exact.as_ref())?;
            let zero_witness = match &classification.contains_zero {
                ZeroMembership::Yes { witness } => Some(witness.to_string()),
                _ => None,
            };
            ok(json(&ClassifyOut {
                classification,
                zero_witness,
            })?)
        }
        Command::Scatter { c, nmax, out } => {
            scatter(cli.format.unwrap_or(Format::Csv), *c, *nmax, out.as_deref())
        }
        Command::Approx {
            c,
            target,
            eps,
            min_prime,
        } => {
            let (re, im) = split_complex(target)?;
            let target = Complex64::new(re, im);
            let s = sieve(cli)?;
            let req = ApproxRequest {
                c: *c,
                target,
                eps: *eps,
                min_prime: *min_prime,
                budget: WitnessBudget {
                    sieve_limit: cli.sieve_limit,
                    ..WitnessBudget::default()
                },
            };
            let r = approx_target(&req, &s)?;
            let code = if r.converged() { 0 } else { EXIT_BUDGET };
            let stdout = json(&ApproxOut {
                c: *c,
                target,
                eps: *eps,
                min_prime: *min_prime,
                n: r.n.primes().collect(),
                value: r.value,
                abs_error: r.abs_error,
                primes_used: r.primes_used,
                largest_prime: r.largest_prime,
                status: r.status,
                note: r.note,
            })?;
            Ok(Outcome { stdout, code })
        }
        Command::Meansum { c, x } => {
            let report = mean_value_report(*c, *x)?;
            let cesaro_mean = report.partial_sum / *x as f64;
            ok(json(&MeanOut {
                report,
                cesaro_mean,
            })?)
        }
        Command::Separation { c, k, nmax } => {
            let r = empirical_separation(*c, *k, *nmax, &sieve(cli)?)?;
            Ok(Outcome {
                stdout: json(&r)?,
                code: truth_code(r.eq1_holds),
            })
        }
        Command::VerifyNegativity => {
            let lower = verify_negative(&NegativityCheck::lower_interval())?;
            let upper = verify_negative(&NegativityCheck::upper_interval())?;
            let verdict = lower.verdict && upper.verdict;
            Ok(Outcome {
                stdout: json(&NegativityOut {
                    lower,
                    upper,
                    verdict,
                })?,
                code: if verdict { 0 } else { EXIT_INDETERMINATE },
            })
        }
        Command::Lk { k, a } => {
            let s = sieve(cli)?;
            let l = l_k(*k, *a, &s)?;
            let closed_form = if *k == 1 && *a < -1.01 {
                Some(l1_closed_form(*a, L_K_TARGET / 10.0)?)
            } else {
                None
            };
            let eq1 = eq1_holds(*k, *a, &s)?;
            let out = LkOut {
                k: *k,
                a: *a,
                p_k: s.nth(*k).unwrap_or_default(),
                l_k: l,
                closed_form,
                delta_k: delta_k(*k, *a, &s)?,
                eq1_holds: eq1,
            };
            Ok(Outcome {
                stdout: json(&out)?,
                code: truth_code(eq1),
            })
        }
        Command::Eq2 { a } => {
            let r = eq2_holds(*a)?;
            Ok(Outcome {
                stdout: json(&r)?,
                code: truth_code(r.holds),
            })
        }
        Command::Tau { k, tol } => ok(json(&tau_k_estimate(*k, *tol, &sieve(cli)?)?)?),
        Command::ZeroWitness { p, ell, m } => {
            let ex = ExactExponent::new(*p, *ell, *m)?;
            let w = zero_witness(&ex)?;
            let c = ex.to_exponent();
            let value = sigma_of_multiset(&w, c);
            ok(json(&ZeroOut {
                c,
                n: w.to_string(),
                n_value: w.to_u64(),
                factors: w,
                value,
                modulus: value.norm(),
            })?)
        }
        Command::Unbounded { c, big_m } => {
            let budget = WitnessBudget {
                sieve_limit: cli.sieve_limit,
                ..WitnessBudget::default()
            };
            let w = unbounded_witness(*c, *big_m, &budget, &sieve(cli)?)?;
            let value = sigma_of_multiset(&w, *c);
            ok(json(&UnboundedOut {
                c: *c,
                m: *big_m,
                n: w.primes().collect(),
                value,
                modulus: value.norm(),
            })?)
        }
        Command::SmallBall { c, d } => ok(json(&SmallBallOut {
            c: *c,
            d: *d,
            lower_bound: lower_bound_positive_a(*c)?,
            n: small_modulus_enumerate(*c, *d)?,
        })?),
        Command::IsolatedNeighbor { c, n, eps } => {
            let r = isolated_neighbor(*n, *c, *eps, &sieve(cli)?)?;
            ok(json(&NeighborOut {
                c: *c,
                n: *n,
                eps: *eps,
                q: r.q,
                distance: r.distance,
            })?)
        }
    }
}

fn scatter(
    format: Format,
    c: ComplexExponent,
    n_max: u64,
    out: Option<&std::path::Path>,
) -> Result<Outcome> {
    if n_max > SCATTER_CAP {
        return Err(Error::Resource(format!(
            "scatter output is limited to --nmax <= {SCATTER_CAP}"
        )));
    }
    let mut sink: Box<dyn Write> = match out {
        Some(path) => {
            Box::new(BufWriter::new(File::create(path).map_err(|e| {
                Error::Io(format!("cannot create {}: {e}", path.display()))
            })?))
        }
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    };
    let rows = match format {
        Format::Csv => write_scatter(&mut sink, c, n_max)?,
        Format::Json => {
            let table = sigma_table(n_max as usize, c);
            let mut rows: Vec<(u64, f64, f64)> = table
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, z)| (n as u64, z.re, z.im))
                .collect();
            if c.a < -1.0 {
                let z = zeta(Complex64::new(1.0, 0.0) - c.as_complex(), 1e-12)?.value;
                rows.push((0, z.re, z.im));
            }
            let count = rows.len() as u64;
            sink.write_all(json(&ScatterJson { c, rows })?.as_bytes())?;
            count
        }
    };
    sink.flush()?;
    drop(sink);
    match out {
        Some(path) => ok(json(&ScatterSummary {
            path: &path.display().to_string(),
            rows,
            marker: c.a < -1.0,
        })?),
        None => ok(String::new()),
    }
}
