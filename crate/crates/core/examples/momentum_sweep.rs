//! Contrast map over transverse momenta around the origin, written as CSV and
//! a log-scaled PGM heatmap.
//!
//! cargo run --release --example momentum_sweep -- [out_dir] [points]

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use kapitza_spin::cli::format::{write_sweep_csv, Heatmap, HeatmapColumn};
use kapitza_spin::sweep::{run_sweep, Axis, GridSpec, PolarizationSpec, SweepBase};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "sweep-out".into()));
    let n: usize = args.next().map_or(61, |a| a.parse().expect("points"));
    std::fs::create_dir_all(&out)?;

    let base = SweepBase { polarization: PolarizationSpec::Elliptic { theta: 1.0 / 50.0 }, ..SweepBase::default() };
    let spec = GridSpec::new((Axis::Q2, Axis::Q3), (-0.05, 0.05), (-0.05, 0.05), (n, n), base)?;
    let tile = run_sweep(&spec, None)?;

    write_sweep_csv(&tile, BufWriter::new(File::create(out.join("sweep.csv"))?))?;
    let heat = Heatmap::from_tile(&tile, HeatmapColumn::Contrast, true);
    heat.write_pgm(BufWriter::new(File::create(out.join("contrast.pgm"))?))?;
    heat.write_range(File::create(out.join("contrast.txt"))?)?;

    let center = tile.nearest(0.0, 0.0);
    let max_b = tile.records.iter().map(|r| r.prob_b).fold(0.0, f64::max);
    println!("{} points, {} failed", tile.records.len(), tile.failures());
    println!("centre: contrast {:.3e}, prob_B {:.4e} (tile max {:.4e})", center.contrast, center.prob_b, max_b);
    println!("log10 contrast range [{:.2}, {:.2}], files in {}", heat.min, heat.max, out.display());
    Ok(())
}
