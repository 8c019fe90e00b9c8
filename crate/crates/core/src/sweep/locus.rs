//! Ellipticity of minimum contrast as a function of `q3`.

use rayon::prelude::*;

use super::fit::{evaluate_fit, BranchFit, BRANCH_SPLIT};
use super::{linspace, with_workers, DEFAULT_Q_L};
use crate::compton::{compton_tensor, elliptic_polarization, ComptonTensor};
use crate::contrast::{minimize_contrast, NewtonStatus};
use crate::error::{Error, Result};
use crate::kinematics::ScatterConfig;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocusOptions {
    pub q_l: f64,
    /// Search interval for `1 / theta`.
    pub inv_theta_range: (f64, f64),
    /// Points of the coarse scan before the golden-section refinement.
    pub coarse_points: usize,
    /// Final bracket width in `1 / theta`.
    pub tolerance: f64,
}

impl Default for LocusOptions {
    fn default() -> Self {
        LocusOptions {
            q_l: DEFAULT_Q_L,
            inv_theta_range: (1.0, 100.0),
            coarse_points: 400,
            tolerance: 1e-4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocusPoint {
    pub q3: f64,
    pub inv_theta: f64,
    pub contrast: f64,
    pub alpha: f64,
    pub phi: f64,
    /// The coarse minimum sat on an end of the search interval, so the true
    /// minimum may lie outside it.
    pub at_boundary: bool,
}

/// Default `q3` samples on `[0, 1]`: for `n >= 62` the branch `(0.9, 1]`
/// gets `max(30, n / 10)` points of its own so that both fit branches are
/// adequately sampled; otherwise the samples are uniform.
pub fn locus_q3_samples(n: usize) -> Vec<f64> {
    if n < 62 {
        return linspace((0.0, 1.0), n);
    }
    let right = (n / 10).max(30);
    let mut out = linspace((0.0, BRANCH_SPLIT), n - right);
    let width = 1.0 - BRANCH_SPLIT;
    out.extend((1..=right).map(|k| if k == right { 1.0 } else { BRANCH_SPLIT + width * k as f64 / right as f64 }));
    out
}

/// Minimises a unimodal function on `[lo, hi]` down to a bracket of width
/// `tol`; returns the best abscissa and value seen.
pub fn golden_section_min(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

fn contrast_for(tensor: &ComptonTensor, inv_theta: f64) -> f64 {
    let pol = elliptic_polarization(1.0 / inv_theta);
    minimize_contrast(&tensor.contract(pol.left(), pol.right()))
        .map(|r| r.value)
        .unwrap_or(f64::INFINITY)
}

fn locus_at(q3: f64, opts: &LocusOptions) -> Result<LocusPoint> {
    let tensor = compton_tensor(&ScatterConfig::new(opts.q_l, 0.0, q3)?)?;
    let grid = linspace(opts.inv_theta_range, opts.coarse_points);
    let (best, _) = grid
        .iter()
        .enumerate()
        .map(|(i, &t)| (i, contrast_for(&tensor, t)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::InvalidGrid("empty 1/theta grid".into()))?;
    let last = grid.len() - 1;
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(last)];
    let (inv_theta, _) = golden_section_min(|t| contrast_for(&tensor, t), lo, hi, opts.tolerance);
    let pol = elliptic_polarization(1.0 / inv_theta);
    let r = minimize_contrast(&tensor.contract(pol.left(), pol.right()))?;
    Ok(LocusPoint {
        q3,
        inv_theta,
        contrast: r.value,
        alpha: r.alpha,
        phi: r.phi,
        at_boundary: best == 0 || best == last,
    })
}

/// `1 / theta` of minimum contrast at each `q3`, with `q2 = 0`.
pub fn minimum_locus(q3_values: &[f64], opts: &LocusOptions, workers: Option<usize>) -> Result<Vec<LocusPoint>> {
    let (lo, hi) = opts.inv_theta_range;
    if opts.coarse_points < 3 || !(lo > 0.0 && hi > lo) || !(opts.tolerance > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "bad locus search: {} points on [{lo}, {hi}], tolerance {}",
            opts.coarse_points, opts.tolerance
        )));
    }
    with_workers(workers, || q3_values.par_iter().map(|&q3| locus_at(q3, opts)).collect())?
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbabilityPoint {
    pub q3: f64,
    pub inv_theta: f64,
    pub contrast: f64,
    pub alpha: f64,
    pub phi: f64,
    pub prob_a: f64,
    pub prob_b: f64,
    pub status: NewtonStatus,
}

/// Diffraction probabilities along the fitted locus, using the left branch
/// below the split and the right branch from it on.
pub fn locus_probabilities(
    q3_values: &[f64],
    left: &BranchFit,
    right: &BranchFit,
    q_l: f64,
    workers: Option<usize>,
) -> Result<Vec<ProbabilityPoint>> {
    let point = |q3: f64| -> Result<ProbabilityPoint> {
        let model = if q3 < BRANCH_SPLIT { &left.model } else { &right.model };
        let inv_theta = evaluate_fit(model, q3)?;
        let pol = elliptic_polarization(1.0 / inv_theta);
        let m = compton_tensor(&ScatterConfig::new(q_l, 0.0, q3)?)?.contract(pol.left(), pol.right());
        let r = minimize_contrast(&m)?;
        Ok(ProbabilityPoint {
            q3,
            inv_theta,
            contrast: r.value,
            alpha: r.alpha,
            phi: r.phi,
            prob_a: r.prob_a,
            prob_b: r.prob_b,
            status: r.status,
        })
    };
    with_workers(workers, || q3_values.par_iter().map(|&q| point(q)).collect())?
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, fx) = golden_section_min(|x| (x - 1.3).powi(2) + 2.0, 0.0, 5.0, 1e-8);
        // flat bottom limits a smooth minimum to about sqrt(eps)
        assert!((x - 1.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-15);
        let (x, _) = golden_section_min(|x| (x - 1.3).abs(), 0.0, 5.0, 1e-10);
        assert!((x - 1.3).abs() < 1e-10);
        let (x, _) = golden_section_min(|x| x, 0.0, 1.0, 1e-6);
        assert!(x < 1e-6);
    }

    #[test]
    fn default_samples_cover_both_branches() {
        let q = locus_q3_samples(201);
        assert_eq!(q.len(), 201);
        assert_eq!(q[0], 0.0);
        assert_eq!(*q.last().unwrap(), 1.0);
        assert!(q.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(q.iter().filter(|&&x| x >= BRANCH_SPLIT).count(), 31);
        assert_eq!(q.iter().filter(|&&x| x <= BRANCH_SPLIT).count(), 171);
        assert_eq!(locus_q3_samples(3), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn locus_endpoints() {
        let pts = minimum_locus(&[0.0, 1.0], &LocusOptions::default(), Some(2)).unwrap();
        assert!((pts[0].inv_theta - 50.0).abs() < 0.1, "{}", pts[0].inv_theta);
        assert!((pts[1].inv_theta - 4.0 / std::f64::consts::PI).abs() < 0.01, "{}", pts[1].inv_theta);
        assert!(pts.iter().all(|p| p.contrast < 1e-6 && !p.at_boundary));
    }

    #[test]
    fn rejects_bad_options() {
        let opts = LocusOptions { inv_theta_range: (0.0, 10.0), ..LocusOptions::default() };
        assert!(minimum_locus(&[0.5], &opts, None).is_err());
        let opts = LocusOptions { coarse_points: 2, ..LocusOptions::default() };
        assert!(minimum_locus(&[0.5], &opts, None).is_err());
    }
}
