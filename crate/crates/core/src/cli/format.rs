//! CSV tables and grayscale heatmaps.
//!
//! Numbers use Rust's shortest round-trip representation, so every value
//! parses back to the identical `f64` and output is independent of locale.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sweep::{LocusPoint, ProbabilityPoint, SweepRecord, SweepTile};

/// Shortest representation that parses back bit-exactly.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub const SWEEP_HEADER: &str = "x,y,contrast,alpha,phi,prob_A,prob_B,status";

pub fn write_sweep_csv(tile: &SweepTile, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for r in &tile.records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            num(r.x),
            num(r.y),
            num(r.contrast),
            num(r.alpha),
            num(r.phi),
            num(r.prob_a),
            num(r.prob_b),
            r.status
        )?;
    }
    w.flush()
}

pub fn write_locus_csv(points: &[LocusPoint], mut w: impl Write) -> io::Result<()> {
    writeln!(w, "q3,inv_theta,alpha,phi,contrast,at_boundary")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            num(p.q3),
            num(p.inv_theta),
            num(p.alpha),
            num(p.phi),
            num(p.contrast),
            p.at_boundary
        )?;
    }
    w.flush()
}

pub fn write_probabilities_csv(points: &[ProbabilityPoint], mut w: impl Write) -> io::Result<()> {
    writeln!(w, "q3,inv_theta,prob_A,prob_B,contrast,alpha,phi,status")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            num(p.q3),
            num(p.inv_theta),
            num(p.prob_a),
            num(p.prob_b),
            num(p.contrast),
            num(p.alpha),
            num(p.phi),
            p.status
        )?;
    }
    w.flush()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeatmapColumn {
    Contrast,
    Alpha,
    Phi,
    ProbA,
    ProbB,
}

impl HeatmapColumn {
    pub fn name(self) -> &'static str {
        match self {
            HeatmapColumn::Contrast => "contrast",
            HeatmapColumn::Alpha => "alpha",
            HeatmapColumn::Phi => "phi",
            HeatmapColumn::ProbA => "prob_A",
            HeatmapColumn::ProbB => "prob_B",
        }
    }

    pub fn value(self, r: &SweepRecord) -> f64 {
        match self {
            HeatmapColumn::Contrast => r.contrast,
            HeatmapColumn::Alpha => r.alpha,
            HeatmapColumn::Phi => r.phi,
            HeatmapColumn::ProbA => r.prob_a,
            HeatmapColumn::ProbB => r.prob_b,
        }
    }
}

impl fmt::Display for HeatmapColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HeatmapColumn {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().as_str() {
            "contrast" => Ok(HeatmapColumn::Contrast),
            "alpha" => Ok(HeatmapColumn::Alpha),
            "phi" => Ok(HeatmapColumn::Phi),
            "prob_a" => Ok(HeatmapColumn::ProbA),
            "prob_b" => Ok(HeatmapColumn::ProbB),
            _ => Err(Error::Parse(format!("unknown heatmap column '{s}'"))),
        }
    }
}

/// Gray levels of one column plus the mapped range they span.
#[derive(Clone, Debug, PartialEq)]
pub struct Heatmap {
    pub width: usize,
    pub height: usize,
    /// Row-major, top row is the largest `y`.
    pub pixels: Vec<u8>,
    pub column: HeatmapColumn,
    pub log_scale: bool,
    pub min: f64,
    pub max: f64,
}

impl Heatmap {
    /// Linear or `log10` mapping onto `0..=255`. Missing values, and
    /// non-positive values on a log scale, are drawn black.
    pub fn from_tile(tile: &SweepTile, column: HeatmapColumn, log_scale: bool) -> Self {
        let mapped: Vec<f64> = tile
            .records
            .iter()
            .map(|r| {
                let v = column.value(r);
                if log_scale {
                    if v > 0.0 {
                        v.log10()
                    } else {
                        f64::NAN
                    }
                } else {
                    v
                }
            })
            .collect();
        let (min, max) = mapped
            .iter()
            .filter(|v| v.is_finite())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let (nx, ny) = (tile.spec.nx, tile.spec.ny);
        let mut pixels = Vec::with_capacity(nx * ny);
        for iy in (0..ny).rev() {
            for ix in 0..nx {
                let v = mapped[iy * nx + ix];
                let level = if !v.is_finite() || !(max > min) {
                    0.0
                } else {
                    255.0 * (v - min) / (max - min)
                };
                pixels.push(level.round().clamp(0.0, 255.0) as u8);
            }
        }
        Heatmap { width: nx, height: ny, pixels, column, log_scale, min, max }
    }

    /// Binary graymap (P5).
    pub fn write_pgm(&self, mut w: impl Write) -> io::Result<()> {
        write!(w, "P5\n{} {}\n255\n", self.width, self.height)?;
        w.write_all(&self.pixels)?;
        w.flush()
    }

    /// Sidecar describing how gray levels map back to values.
    pub fn write_range(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(w, "column={}", self.column)?;
        writeln!(w, "scale={}", if self.log_scale { "log10" } else { "linear" })?;
        writeln!(w, "min={}", num(self.min))?;
        writeln!(w, "max={}", num(self.max))?;
        w.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contrast::NewtonStatus;
    use crate::sweep::{Axis, GridSpec, PointStatus, SweepBase};

    fn tile() -> SweepTile {
        let spec = GridSpec::new((Axis::Q2, Axis::Q3), (0.0, 1.0), (0.0, 1.0), (2, 2), SweepBase::default()).unwrap();
        let records = (0..4)
            .map(|i| SweepRecord {
                x: (i % 2) as f64,
                y: (i / 2) as f64,
                contrast: [1e-4, 1e-2, 1.0, 0.0][i],
                alpha: 0.5,
                phi: 0.0,
                prob_a: 0.1,
                prob_b: 0.2,
                status: PointStatus::Optimizer(NewtonStatus::ConvergedGradient),
            })
            .collect();
        SweepTile { spec, records }
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0, -2.5e-17, 1e300, 5.491930012345678, f64::MIN_POSITIVE] {
            assert_eq!(num(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(num(1.0), "1.0");
    }

    #[test]
    fn sweep_csv_layout() {
        let mut buf = Vec::new();
        write_sweep_csv(&tile(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], SWEEP_HEADER);
        assert_eq!(lines[1], "0.0,0.0,0.0001,0.5,0.0,0.1,0.2,converged_gradient");
    }

    #[test]
    fn log_heatmap() {
        let h = Heatmap::from_tile(&tile(), HeatmapColumn::Contrast, true);
        assert_eq!((h.min, h.max), (-4.0, 0.0));
        // top row is y = 1: contrast 1.0 then 0.0 (black)
        assert_eq!(h.pixels, vec![255, 0, 0, 128]);
        let mut buf = Vec::new();
        h.write_pgm(&mut buf).unwrap();
        assert!(buf.starts_with(b"P5\n2 2\n255\n"));
        assert_eq!(buf.len(), 11 + 4);
        let mut side = Vec::new();
        h.write_range(&mut side).unwrap();
        assert_eq!(String::from_utf8(side).unwrap(), "column=contrast\nscale=log10\nmin=-4.0\nmax=0.0\n");
    }

    #[test]
    fn flat_heatmap_is_black() {
        let h = Heatmap::from_tile(&tile(), HeatmapColumn::Alpha, false);
        assert!(h.pixels.iter().all(|&p| p == 0));
    }

    #[test]
    fn column_names() {
        assert_eq!("prob_A".parse::<HeatmapColumn>().unwrap(), HeatmapColumn::ProbA);
        assert!("x".parse::<HeatmapColumn>().is_err());
    }
}
