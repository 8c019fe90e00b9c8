//! Parsers for command-line values.

use std::f64::consts::PI;

use crate::compton::Polarization;
use crate::error::{Error, Result};
use crate::linalg::Complex64;

/// Radians, either a plain number or a multiple/fraction of pi such as
/// `pi/4`, `-3pi/2`, `3*pi/2` or `0.5pi`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let t: String = s.trim().to_lowercase().replace('π', "pi").split_whitespace().collect();
    let bad = || Error::Parse(format!("invalid angle '{s}'"));
    let value = match t.find("pi") {
        Some(idx) => {
            let coef = t[..idx].trim_end_matches('*');
            let coef = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            let rest = &t[idx + 2..];
            let denom = match rest.strip_prefix('/') {
                None if rest.is_empty() => 1.0,
                None => return Err(bad()),
                Some(d) => d.parse::<f64>().map_err(|_| bad())?,
            };
            coef * PI / denom
        }
        None => t.parse::<f64>().map_err(|_| bad())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// Finite real numbers separated by commas or semicolons.
pub fn parse_numbers(s: &str) -> Result<Vec<f64>> {
    s.split([',', ';'])
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse(format!("invalid number '{}' in '{s}'", part.trim())))
        })
        .collect()
}

/// `lo,hi`
pub fn parse_range(s: &str) -> Result<(f64, f64)> {
    match parse_numbers(s)?.as_slice() {
        &[lo, hi] => Ok((lo, hi)),
        _ => Err(Error::Parse(format!("expected 'lo,hi', got '{s}'"))),
    }
}

/// Three complex components as `re,im` pairs: `r1,i1,r2,i2,r3,i3`.
pub fn parse_complex_triple(s: &str) -> Result<Polarization> {
    match parse_numbers(s)?.as_slice() {
        &[r1, i1, r2, i2, r3, i3] => Ok([
            Complex64::new(r1, i1),
            Complex64::new(r2, i2),
            Complex64::new(r3, i3),
        ]),
        _ => Err(Error::Parse(format!("expected six numbers 're,im' x 3, got '{s}'"))),
    }
}
