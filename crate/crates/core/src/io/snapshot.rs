//! Text snapshots of a coefficient field.
//!
//! ```text
//! CCH1
//! <M> <L1> <L2> <t>
//! <a_{1,1}> ... <a_{1,M}>
//! ...
//! <a_{M,1}> ... <a_{M,M}>
//! ```
//!
//! Reals are written with 17 significant digits, which round-trips every
//! finite `f64` exactly.

use std::fs;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::spectral::{GridSpec, SpectralField};

pub const MAGIC: &str = "CCH1";

pub fn format_snapshot(u: &SpectralField, t: f64) -> String {
    let (lx, ly) = u.grid().lengths();
    let m = u.grid().modes();
    let mut s = format!("{MAGIC}\n{m} {lx:.16e} {ly:.16e} {t:.16e}\n");
    for row in u.coeffs().rows() {
        let line: Vec<String> = row.iter().map(|a| format!("{a:.16e}")).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

/// Parses snapshot text, returning the field and its time stamp.
pub fn parse_snapshot(text: &str) -> Result<(SpectralField, f64)> {
    let mut lines = text.lines();
    match lines.next() {
        Some(l) if l.trim() == MAGIC => {}
        other => {
            return Err(Error::Snapshot(format!(
                "bad magic: expected `{MAGIC}`, found `{}`",
                other.unwrap_or("")
            )))
        }
    }
    let header = lines
        .next()
        .ok_or_else(|| Error::Snapshot("shape mismatch: missing header".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 {
        return Err(Error::Snapshot(format!(
            "header needs `M L1 L2 t`, found `{header}`"
        )));
    }
    let num = |s: &str| -> Result<f64> {
        s.parse()
            .map_err(|_| Error::Snapshot(format!("cannot parse `{s}`")))
    };
    let m: usize = fields[0]
        .parse()
        .map_err(|_| Error::Snapshot(format!("bad mode count `{}`", fields[0])))?;
    let (lx, ly, t) = (num(fields[1])?, num(fields[2])?, num(fields[3])?);
    let grid = GridSpec::new(m, lx, ly).map_err(|e| Error::Snapshot(e.to_string()))?;

    let mut values = Vec::with_capacity(m * m);
    let mut rows = 0;
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<&str> = line.split_whitespace().collect();
        if row.len() != m || rows == m {
            return Err(Error::Snapshot(format!(
                "shape mismatch: row {} has {} values, expected {m} rows of {m}",
                rows + 1,
                row.len()
            )));
        }
        for v in row {
            values.push(num(v)?);
        }
        rows += 1;
    }
    if rows != m {
        return Err(Error::Snapshot(format!(
            "shape mismatch: found {rows} coefficient rows, expected {m}"
        )));
    }
    let coeffs = Array2::from_shape_vec((m, m), values).expect("shape checked");
    Ok((SpectralField::new(grid, coeffs)?, t))
}

pub fn write_snapshot(u: &SpectralField, t: f64, path: &Path) -> Result<()> {
    fs::write(path, format_snapshot(u, t))?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<(SpectralField, f64)> {
    parse_snapshot(&fs::read_to_string(path)?)
}
