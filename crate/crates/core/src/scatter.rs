//! Point clouds `{σ_c(n) : n ≤ n_max}` as CSV.
//!
//! The format is a header `n,re,im` followed by one row per `n` in ascending
//! order. When `a < -1` a final row with `n = 0` holds `ζ(1 - c)`, the limit of
//! the Cesàro means. Floats carry 17 significant digits so rows round-trip
//! exactly.

use std::io::{BufRead, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exponent::{ComplexExponent, ComplexValue};
use crate::sigma::sigma_table;
use crate::zeta::zeta;

/// Largest `n_max` accepted by [`write_scatter`].
pub const SCATTER_CAP: u64 = 10_000_000;

pub const HEADER: &str = "n,re,im";

const CHUNK: usize = 1 << 14;

/// A parsed CSV row; `n = 0` is the marker row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterRow {
    pub n: u64,
    pub value: ComplexValue,
}

fn fmt_row(out: &mut String, n: usize, z: Complex64) {
    use std::fmt::Write as _;
    let _ = writeln!(out, "{n},{:.16e},{:.16e}", z.re, z.im);
}

/// Writes the scatter file for `c`; returns the number of rows written,
/// marker included.
pub fn write_scatter<W: Write>(mut w: W, c: ComplexExponent, n_max: u64) -> Result<u64> {
    if n_max > SCATTER_CAP {
        return Err(Error::Resource(format!(
            "scatter output is limited to n_max <= {SCATTER_CAP}"
        )));
    }
    let marker = if c.a < -1.0 {
        Some(zeta(Complex64::new(1.0, 0.0) - c.as_complex(), 1e-12)?.value)
    } else {
        None
    };
    let values = sigma_table(n_max as usize, c);
    writeln!(w, "{HEADER}")?;
    let body = &values[1.min(values.len())..];
    let blocks: Vec<String> = body
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(i, chunk)| {
            let mut s = String::with_capacity(chunk.len() * 52);
            for (j, z) in chunk.iter().enumerate() {
                fmt_row(&mut s, 1 + i * CHUNK + j, *z);
            }
            s
        })
        .collect();
    for b in &blocks {
        w.write_all(b.as_bytes())?;
    }
    let mut rows = n_max;
    if let Some(z) = marker {
        let mut s = String::new();
        fmt_row(&mut s, 0, z);
        w.write_all(s.as_bytes())?;
        rows += 1;
    }
    w.flush()?;
    Ok(rows)
}

/// Parses a file produced by [`write_scatter`].
pub fn read_scatter<R: BufRead>(r: R) -> Result<Vec<ScatterRow>> {
    let mut lines = r.lines();
    if lines.next().transpose()?.as_deref() != Some(HEADER) {
        return Err(Error::Io(format!("missing header `{HEADER}`")));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let bad = || Error::Io(format!("malformed row {}: `{line}`", i + 2));
        let mut parts = line.split(',');
        let (Some(n), Some(re), Some(im), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        rows.push(ScatterRow {
            n: n.parse().map_err(|_| bad())?,
            value: Complex64::new(
                re.parse().map_err(|_| bad())?,
                im.parse().map_err(|_| bad())?,
            ),
        });
    }
    Ok(rows)
}
