//! Parameter scans over electron momenta and beam ellipticity.
//!
//! A [`GridSpec`] names two axes and the fixed values of everything else;
//! [`run_sweep`] evaluates the minimised contrast at every grid point in
//! parallel and returns the records in row-major `(y, x)` order. Each point
//! is independent, so the output does not depend on the number of workers.

mod fit;
mod locus;

pub use fit::{evaluate_fit, fit_branch, fit_locus, BranchFit, FitBranch, FitModel, BRANCH_SPLIT};
pub use locus::{
    golden_section_min, locus_probabilities, locus_q3_samples, minimum_locus, LocusOptions, LocusPoint,
    ProbabilityPoint,
};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::compton::{elliptic_polarization, spin_matrix, PolarizationPair};
use crate::contrast::{minimize_contrast, NewtonStatus};
use crate::error::{Error, Result};
use crate::kinematics::ScatterConfig;

/// Default laser momentum `q_L`.
pub const DEFAULT_Q_L: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    Q2,
    Q3,
    Theta,
    InvTheta,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Q2 => "q2",
            Axis::Q3 => "q3",
            Axis::Theta => "theta",
            Axis::InvTheta => "inv_theta",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "q2" => Ok(Axis::Q2),
            "q3" => Ok(Axis::Q3),
            "theta" => Ok(Axis::Theta),
            "inv_theta" | "1/theta" => Ok(Axis::InvTheta),
            other => Err(Error::Parse(format!("unknown axis '{other}'"))),
        }
    }
}

/// Beam polarization held fixed during a sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PolarizationSpec {
    /// `A_l = (0, cos theta, i sin theta)`, `A_r = e3`.
    Elliptic { theta: f64 },
    Explicit(PolarizationPair),
}

impl PolarizationSpec {
    fn resolve(&self) -> PolarizationPair {
        match *self {
            PolarizationSpec::Elliptic { theta } => elliptic_polarization(theta),
            PolarizationSpec::Explicit(pair) => pair,
        }
    }
}

/// Values of the parameters that are not swept.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepBase {
    pub q_l: f64,
    pub q2: f64,
    pub q3: f64,
    pub polarization: PolarizationSpec,
}

impl Default for SweepBase {
    fn default() -> Self {
        SweepBase {
            q_l: DEFAULT_Q_L,
            q2: 0.0,
            q3: 0.0,
            polarization: PolarizationSpec::Elliptic { theta: std::f64::consts::FRAC_PI_4 },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub x_axis: Axis,
    pub y_axis: Axis,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    pub fixed: SweepBase,
}

impl GridSpec {
    pub fn new(
        (x_axis, y_axis): (Axis, Axis),
        x_range: (f64, f64),
        y_range: (f64, f64),
        (nx, ny): (usize, usize),
        fixed: SweepBase,
    ) -> Result<Self> {
        let spec = GridSpec { x_axis, y_axis, x_range, y_range, nx, ny, fixed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let supported = matches!(
            (self.x_axis, self.y_axis),
            (Axis::Q2, Axis::Q3) | (Axis::Q3, Axis::Theta) | (Axis::Q3, Axis::InvTheta)
        );
        if !supported {
            return Err(Error::InvalidGrid(format!(
                "unsupported axis pair ({}, {}); use (q2, q3), (q3, theta) or (q3, inv_theta)",
                self.x_axis, self.y_axis
            )));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2x2 points, got {}x{}", self.nx, self.ny)));
        }
        for (name, (lo, hi)) in [("x", self.x_range), ("y", self.y_range)] {
            if !(lo.is_finite() && hi.is_finite()) || lo == hi {
                return Err(Error::InvalidGrid(format!("degenerate {name} range [{lo}, {hi}]")));
            }
        }
        if self.y_axis == Axis::InvTheta {
            let (lo, hi) = self.y_range;
            if lo.min(hi) <= 0.0 && lo.max(hi) >= 0.0 {
                return Err(Error::InvalidGrid("1/theta range must not contain zero".into()));
            }
        }
        let theta_axis = matches!(self.y_axis, Axis::Theta | Axis::InvTheta);
        if theta_axis && matches!(self.fixed.polarization, PolarizationSpec::Explicit(_)) {
            return Err(Error::InvalidGrid("theta axes require the elliptic polarization family".into()));
        }
        ScatterConfig::new(self.fixed.q_l, self.fixed.q2, self.fixed.q3)?;
        Ok(())
    }

    pub fn x_values(&self) -> Vec<f64> {
        linspace(self.x_range, self.nx)
    }

    pub fn y_values(&self) -> Vec<f64> {
        linspace(self.y_range, self.ny)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Configuration and polarization at one grid point.
    pub fn point(&self, x: f64, y: f64) -> Result<(ScatterConfig, PolarizationPair)> {
        let mut base = self.fixed;
        for (axis, value) in [(self.x_axis, x), (self.y_axis, y)] {
            match axis {
                Axis::Q2 => base.q2 = value,
                Axis::Q3 => base.q3 = value,
                Axis::Theta => base.polarization = PolarizationSpec::Elliptic { theta: value },
                Axis::InvTheta => base.polarization = PolarizationSpec::Elliptic { theta: 1.0 / value },
            }
        }
        let cfg = ScatterConfig::new(base.q_l, base.q2, base.q3)?;
        Ok((cfg, base.polarization.resolve()))
    }
}

/// `n` equally spaced points including both endpoints.
pub fn linspace((lo, hi): (f64, f64), n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

/// Outcome label of one grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointStatus {
    Optimizer(NewtonStatus),
    Failed,
}

impl PointStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PointStatus::Optimizer(s) => s.as_str(),
            PointStatus::Failed => "failed",
        }
    }
}

impl fmt::Display for PointStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRecord {
    pub x: f64,
    pub y: f64,
    pub contrast: f64,
    pub alpha: f64,
    pub phi: f64,
    pub prob_a: f64,
    pub prob_b: f64,
    pub status: PointStatus,
}

impl SweepRecord {
    fn failed(x: f64, y: f64) -> Self {
        SweepRecord {
            x,
            y,
            contrast: f64::NAN,
            alpha: f64::NAN,
            phi: f64::NAN,
            prob_a: f64::NAN,
            prob_b: f64::NAN,
            status: PointStatus::Failed,
        }
    }
}

/// One record per grid point, row-major with `y` outer.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTile {
    pub spec: GridSpec,
    pub records: Vec<SweepRecord>,
}

impl SweepTile {
    pub fn record(&self, ix: usize, iy: usize) -> &SweepRecord {
        &self.records[iy * self.spec.nx + ix]
    }

    /// Record at the grid point closest to `(x, y)`.
    pub fn nearest(&self, x: f64, y: f64) -> &SweepRecord {
        let ix = nearest_index(&self.spec.x_values(), x);
        let iy = nearest_index(&self.spec.y_values(), y);
        self.record(ix, iy)
    }

    pub fn min_contrast(&self) -> Option<&SweepRecord> {
        self.records
            .iter()
            .filter(|r| r.contrast.is_finite())
            .min_by(|a, b| a.contrast.total_cmp(&b.contrast))
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.status == PointStatus::Failed).count()
    }
}

fn nearest_index(values: &[f64], target: f64) -> usize {
    values
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

fn evaluate_point(spec: &GridSpec, x: f64, y: f64) -> SweepRecord {
    let outcome = spec
        .point(x, y)
        .and_then(|(cfg, pol)| spin_matrix(&cfg, &pol))
        .and_then(|m| minimize_contrast(&m));
    match outcome {
        Ok(r) => SweepRecord {
            x,
            y,
            contrast: r.value,
            alpha: r.alpha,
            phi: r.phi,
            prob_a: r.prob_a,
            prob_b: r.prob_b,
            status: PointStatus::Optimizer(r.status),
        },
        Err(_) => SweepRecord::failed(x, y),
    }
}

/// Evaluates the grid. `workers = None` uses rayon's global pool.
pub fn run_sweep(spec: &GridSpec, workers: Option<usize>) -> Result<SweepTile> {
    spec.validate()?;
    let xs = spec.x_values();
    let ys = spec.y_values();
    let eval = || -> Vec<SweepRecord> {
        (0..spec.len())
            .into_par_iter()
            .map(|i| evaluate_point(spec, xs[i % spec.nx], ys[i / spec.nx]))
            .collect()
    };
    let records = with_workers(workers, eval)?;
    Ok(SweepTile { spec: *spec, records })
}

/// Runs `f` on a dedicated pool with the requested number of threads.
pub(crate) fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidGrid(format!("cannot build worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> GridSpec {
        GridSpec::new(
            (Axis::Q2, Axis::Q3),
            (-0.05, 0.05),
            (0.95, 1.05),
            (3, 3),
            SweepBase::default(),
        )
        .unwrap()
    }

    #[test]
    fn axis_parsing() {
        assert_eq!("q2".parse::<Axis>().unwrap(), Axis::Q2);
        assert_eq!("1/theta".parse::<Axis>().unwrap(), Axis::InvTheta);
        assert!("q1".parse::<Axis>().is_err());
    }

    #[test]
    fn linspace_hits_endpoints() {
        let v = linspace((0.95, 1.05), 11);
        assert_eq!(v[0], 0.95);
        assert_eq!(v[10], 1.05);
        assert!((v[5] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn grid_validation() {
        let base = SweepBase::default();
        assert!(GridSpec::new((Axis::Q3, Axis::Q2), (0.0, 1.0), (0.0, 1.0), (2, 2), base).is_err());
        assert!(GridSpec::new((Axis::Q2, Axis::Q3), (0.0, 1.0), (0.0, 1.0), (1, 2), base).is_err());
        assert!(GridSpec::new((Axis::Q2, Axis::Q3), (1.0, 1.0), (0.0, 1.0), (2, 2), base).is_err());
        assert!(GridSpec::new((Axis::Q3, Axis::InvTheta), (0.0, 1.0), (-1.0, 1.0), (2, 2), base).is_err());
        let explicit = SweepBase {
            polarization: PolarizationSpec::Explicit(elliptic_polarization(0.1)),
            ..base
        };
        assert!(GridSpec::new((Axis::Q3, Axis::Theta), (0.0, 1.0), (0.1, 1.0), (2, 2), explicit).is_err());
        assert!(GridSpec::new((Axis::Q2, Axis::Q3), (0.0, 1.0), (0.0, 1.0), (2, 2), explicit).is_ok());
        let bad_ql = SweepBase { q_l: 0.0, ..base };
        assert!(GridSpec::new((Axis::Q2, Axis::Q3), (0.0, 1.0), (0.0, 1.0), (2, 2), bad_ql).is_err());
    }

    #[test]
    fn row_major_order() {
        let tile = run_sweep(&small_spec(), Some(2)).unwrap();
        assert_eq!(tile.records.len(), 9);
        let xs = tile.spec.x_values();
        let ys = tile.spec.y_values();
        for (i, r) in tile.records.iter().enumerate() {
            assert_eq!(r.x, xs[i % 3]);
            assert_eq!(r.y, ys[i / 3]);
            assert!((0.0..=1.0).contains(&r.contrast));
        }
        assert_eq!(tile.nearest(0.0, 1.0).x, 0.0);
        assert_eq!(tile.nearest(0.0, 1.0).y, 1.0);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let one = run_sweep(&small_spec(), Some(1)).unwrap();
        let many = run_sweep(&small_spec(), Some(4)).unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn theta_axes_set_polarization() {
        let spec = GridSpec::new(
            (Axis::Q3, Axis::InvTheta),
            (0.0, 1.0),
            (2.0, 50.0),
            (2, 2),
            SweepBase::default(),
        )
        .unwrap();
        let (cfg, pol) = spec.point(1.0, 2.0).unwrap();
        assert_eq!(cfg.q3(), 1.0);
        assert_eq!(pol, elliptic_polarization(0.5));
    }
}
