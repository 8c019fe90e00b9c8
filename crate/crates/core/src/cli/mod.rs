//! Command-line driver: single points, sweeps, locus fits and Taylor checks.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 optimizer or fit failure,
//! 4 I/O failure.

pub mod format;
pub mod parse;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::compton::{elliptic_polarization, spin_matrix, PolarizationPair};
use crate::contrast::{minimize_contrast, NewtonStatus};
use crate::error::{Error, Result};
use crate::kinematics::ScatterConfig;
use crate::linalg::{Complex64, ONE, ZERO};
use crate::sweep::{
    fit_locus, locus_probabilities, locus_q3_samples, minimum_locus, run_sweep, Axis, GridSpec, LocusOptions,
    PolarizationSpec, SweepBase, DEFAULT_Q_L,
};
use crate::taylor::convergence_ladder;

use format::{num, write_locus_csv, write_probabilities_csv, write_sweep_csv, Heatmap, HeatmapColumn};
use parse::{parse_angle, parse_complex_triple, parse_range};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_ARGS: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "kapitza-spin", version, about = "Spin-dependent electron diffraction in bichromatic standing waves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub globals: GlobalArgs,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Laser photon momentum q_L
    #[arg(long = "ql", global = true, default_value_t = DEFAULT_Q_L, allow_hyphen_values = true)]
    pub q_l: f64,
    #[arg(long, global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    pub q2: f64,
    #[arg(long, global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    pub q3: f64,
    /// Ellipticity angle of the left beam, e.g. 0.02 or pi/4
    #[arg(long, global = true, default_value = "pi/4", allow_hyphen_values = true)]
    pub theta: String,
    /// Left beam amplitude as re,im pairs for e1,e2,e3; overrides --theta
    #[arg(long = "pol-l", global = true, allow_hyphen_values = true)]
    pub pol_l: Option<String>,
    /// Right beam amplitude as re,im pairs; default e3
    #[arg(long = "pol-r", global = true, allow_hyphen_values = true)]
    pub pol_r: Option<String>,
    /// Output directory
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Worker threads; default uses all available cores
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Sweep column to render as a PGM heatmap
    #[arg(long = "heatmap-column", global = true)]
    pub heatmap_column: Option<String>,
    /// Map heatmap values through log10
    #[arg(long = "log-scale", global = true)]
    pub log_scale: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimised contrast at one configuration
    Point,
    /// Contrast over a two-dimensional parameter grid
    Sweep(SweepArgs),
    /// Minimum-contrast ellipticity versus q3 and its two-branch fit
    LocusFit(LocusArgs),
    /// Convergence of the small-momentum expansion
    TaylorCheck(TaylorArgs),
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Axis pair: q2,q3 or q3,theta or q3,inv_theta
    #[arg(long, default_value = "q2,q3")]
    pub axes: String,
    #[arg(long = "x-range", default_value = "-0.05,0.05", allow_hyphen_values = true)]
    pub x_range: String,
    #[arg(long = "y-range", default_value = "0.95,1.05", allow_hyphen_values = true)]
    pub y_range: String,
    #[arg(long, default_value_t = 201)]
    pub nx: usize,
    #[arg(long, default_value_t = 201)]
    pub ny: usize,
}

#[derive(Debug, Args)]
pub struct LocusArgs {
    #[arg(long = "q3-points", default_value_t = 201)]
    pub q3_points: usize,
    /// Coarse 1/theta samples per q3
    #[arg(long = "theta-points", default_value_t = 400)]
    pub theta_points: usize,
}

#[derive(Debug, Args)]
pub struct TaylorArgs {
    /// Common starting value of q_L, q2 and q3
    #[arg(long, default_value_t = 1e-2, allow_hyphen_values = true)]
    pub start: f64,
    #[arg(long, default_value_t = 4)]
    pub halvings: usize,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) => EXIT_IO,
            Error::FitNotConverged { .. } => EXIT_NOT_CONVERGED,
            _ => EXIT_BAD_ARGS,
        };
        Failure { code, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_BAD_ARGS;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let result = match &cli.command {
        Command::Point => cmd_point(&cli.globals, out),
        Command::Sweep(a) => cmd_sweep(&cli.globals, a, out),
        Command::LocusFit(a) => cmd_locus_fit(&cli.globals, a, out, err),
        Command::TaylorCheck(a) => cmd_taylor_check(&cli.globals, a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn polarization(g: &GlobalArgs) -> Result<PolarizationSpec> {
    let theta = parse_angle(&g.theta)?;
    if g.pol_l.is_none() && g.pol_r.is_none() {
        return Ok(PolarizationSpec::Elliptic { theta });
    }
    let a_l = match &g.pol_l {
        Some(s) => parse_complex_triple(s)?,
        None => *elliptic_polarization(theta).left(),
    };
    let a_r = match &g.pol_r {
        Some(s) => parse_complex_triple(s)?,
        None => [ZERO, ZERO, ONE],
    };
    Ok(PolarizationSpec::Explicit(PolarizationPair::new(a_l, a_r)?))
}

fn resolve(spec: PolarizationSpec) -> PolarizationPair {
    match spec {
        PolarizationSpec::Elliptic { theta } => elliptic_polarization(theta),
        PolarizationSpec::Explicit(p) => p,
    }
}

fn fmt_complex(z: Complex64) -> String {
    format!("{},{}", num(z.re), num(z.im))
}

fn w(out: &mut dyn Write, line: std::fmt::Arguments<'_>) -> std::result::Result<(), Failure> {
    out.write_fmt(line)
        .and_then(|_| out.write_all(b"\n"))
        .map_err(|e| io_failure(Path::new("<stdout>"), e))
}

fn cmd_point(g: &GlobalArgs, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let cfg = ScatterConfig::new(g.q_l, g.q2, g.q3)?;
    let pol = resolve(polarization(g)?);
    let m = spin_matrix(&cfg, &pol)?;
    w(out, format_args!("q_l={}", num(cfg.q_l())))?;
    w(out, format_args!("q2={}", num(cfg.q2())))?;
    w(out, format_args!("q3={}", num(cfg.q3())))?;
    for r in 0..2 {
        for c in 0..2 {
            w(out, format_args!("m{}{}={}", r + 1, c + 1, fmt_complex(m[(r, c)])))?;
        }
    }
    let r = minimize_contrast(&m)?;
    w(out, format_args!("contrast={}", num(r.value)))?;
    w(out, format_args!("alpha={}", num(r.alpha)))?;
    w(out, format_args!("phi={}", num(r.phi)))?;
    w(out, format_args!("prob_A={}", num(r.prob_a)))?;
    w(out, format_args!("prob_B={}", num(r.prob_b)))?;
    w(out, format_args!("iterations={}", r.iterations))?;
    w(out, format_args!("status={}", r.status))?;
    Ok(if r.status == NewtonStatus::StoppedMaxIterations { EXIT_NOT_CONVERGED } else { EXIT_OK })
}

fn create(dir: &Path, name: &str) -> std::result::Result<(PathBuf, BufWriter<File>), Failure> {
    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| io_failure(&path, e))?;
    Ok((path, BufWriter::new(file)))
}

fn cmd_sweep(g: &GlobalArgs, a: &SweepArgs, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let axes: Vec<Axis> = a.axes.split(',').map(str::parse).collect::<Result<_>>()?;
    let &[x_axis, y_axis] = axes.as_slice() else {
        return Err(Error::Parse(format!("expected two axes, got '{}'", a.axes)).into());
    };
    let base = SweepBase { q_l: g.q_l, q2: g.q2, q3: g.q3, polarization: polarization(g)? };
    let spec = GridSpec::new(
        (x_axis, y_axis),
        parse_range(&a.x_range)?,
        parse_range(&a.y_range)?,
        (a.nx, a.ny),
        base,
    )?;
    let column = g.heatmap_column.as_deref().map(str::parse::<HeatmapColumn>).transpose()?;
    let tile = run_sweep(&spec, g.workers)?;

    let (path, mut file) = create(&g.out, "sweep.csv")?;
    write_sweep_csv(&tile, &mut file).map_err(|e| io_failure(&path, e))?;
    w(out, format_args!("csv={}", path.display()))?;
    if let Some(column) = column {
        let heat = Heatmap::from_tile(&tile, column, g.log_scale);
        let (path, mut file) = create(&g.out, &format!("heatmap_{column}.pgm"))?;
        heat.write_pgm(&mut file).map_err(|e| io_failure(&path, e))?;
        w(out, format_args!("heatmap={}", path.display()))?;
        let (path, mut file) = create(&g.out, &format!("heatmap_{column}.txt"))?;
        heat.write_range(&mut file).map_err(|e| io_failure(&path, e))?;
    }
    w(out, format_args!("points={}", tile.records.len()))?;
    w(out, format_args!("failed={}", tile.failures()))?;
    if let Some(best) = tile.min_contrast() {
        w(out, format_args!("min_contrast={}", num(best.contrast)))?;
        w(out, format_args!("min_contrast_x={}", num(best.x)))?;
        w(out, format_args!("min_contrast_y={}", num(best.y)))?;
    }
    Ok(EXIT_OK)
}

fn cmd_locus_fit(
    g: &GlobalArgs,
    a: &LocusArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::result::Result<i32, Failure> {
    if a.q3_points < 2 {
        return Err(Error::InvalidGrid("need at least 2 q3 points".into()).into());
    }
    let opts = LocusOptions { q_l: g.q_l, coarse_points: a.theta_points, ..LocusOptions::default() };
    let q3s = locus_q3_samples(a.q3_points);
    let locus = minimum_locus(&q3s, &opts, g.workers)?;
    let (path, mut file) = create(&g.out, "locus.csv")?;
    write_locus_csv(&locus, &mut file).map_err(|e| io_failure(&path, e))?;
    w(out, format_args!("locus_csv={}", path.display()))?;

    let failures: Vec<f64> = locus.iter().filter(|p| p.at_boundary).map(|p| p.q3).collect();
    for q3 in &failures {
        let _ = writeln!(err, "warning: minimum not bracketed at q3={}", num(*q3));
    }
    w(out, format_args!("locus_points={}", locus.len()))?;
    w(out, format_args!("bracket_failures={}", failures.len()))?;
    let success_ok = (locus.len() - failures.len()) as f64 >= 0.95 * locus.len() as f64;

    let data: Vec<(f64, f64)> = locus.iter().filter(|p| !p.at_boundary).map(|p| (p.q3, p.inv_theta)).collect();
    let fits = match fit_locus(&data) {
        Ok(f) => f,
        Err(Error::InsufficientData(msg)) => {
            w(out, format_args!("fit=skipped ({msg})"))?;
            return Ok(if success_ok { EXIT_OK } else { EXIT_NOT_CONVERGED });
        }
        Err(e) => return Err(e.into()),
    };
    let (left, right) = fits;
    let report = format!("q_l={}\n{left}\n{right}\n", num(g.q_l));
    let (path, mut file) = create(&g.out, "fit_report.txt")?;
    file.write_all(report.as_bytes())
        .and_then(|_| file.flush())
        .map_err(|e| io_failure(&path, e))?;
    out.write_all(report.as_bytes()).map_err(|e| io_failure(Path::new("<stdout>"), e))?;

    let probs = locus_probabilities(&q3s, &left, &right, g.q_l, g.workers)?;
    let (path, mut file) = create(&g.out, "probabilities.csv")?;
    write_probabilities_csv(&probs, &mut file).map_err(|e| io_failure(&path, e))?;
    w(out, format_args!("probabilities_csv={}", path.display()))?;
    let worst = probs.iter().map(|p| p.prob_a / p.prob_b).fold(0.0, f64::max);
    w(out, format_args!("max_prob_ratio={}", num(worst)))?;
    Ok(if success_ok { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

fn cmd_taylor_check(
    g: &GlobalArgs,
    a: &TaylorArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::result::Result<i32, Failure> {
    let pol = resolve(polarization(g)?);
    let report = convergence_ladder(a.start, a.halvings, &pol)?;
    for (k, r) in report.rungs.iter().enumerate() {
        w(out, format_args!("rung{k}.scale={}", num(r.scale)))?;
        w(out, format_args!("rung{k}.error={}", num(r.error)))?;
        if r.out_of_domain {
            w(out, format_args!("rung{k}.warning=out_of_domain"))?;
            let _ = writeln!(err, "warning: scale {} is outside the expansion domain", num(r.scale));
        }
    }
    match report.order {
        Some(o) => w(out, format_args!("order={}", num(o)))?,
        None => w(out, format_args!("order=undefined"))?,
    }
    Ok(EXIT_OK)
}
