//! Two-branch fit of the minimum-contrast locus,
//! `1/theta = p1 + p2 sqrt((q3 - c)^2 + p3)` with `c = 0` on the left branch
//! and `c = 1` on the right one.

use std::fmt;

use crate::error::{Error, Result};

/// `q3` at which the two branches meet. The point itself belongs to both.
pub const BRANCH_SPLIT: f64 = 0.9;

const MIN_POINTS: usize = 30;
const MAX_ITERATIONS: usize = 200;
const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FitBranch {
    Left,
    Right,
}

impl FitBranch {
    pub fn center(self) -> f64 {
        match self {
            FitBranch::Left => 0.0,
            FitBranch::Right => 1.0,
        }
    }

    pub fn domain(self) -> (f64, f64) {
        match self {
            FitBranch::Left => (0.0, BRANCH_SPLIT),
            FitBranch::Right => (BRANCH_SPLIT, 1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FitBranch::Left => "left",
            FitBranch::Right => "right",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitModel {
    pub branch: FitBranch,
    pub params: [f64; 3],
    pub domain: (f64, f64),
}

impl FitModel {
    fn value(&self, q3: f64) -> f64 {
        model(self.branch.center(), &self.params, q3)
    }
}

fn model(center: f64, p: &[f64; 3], q: f64) -> f64 {
    p[0] + p[1] * ((q - center).powi(2) + p[2]).sqrt()
}

/// Fitted `1 / theta` at `q3`; fails outside the branch domain.
pub fn evaluate_fit(model: &FitModel, q3: f64) -> Result<f64> {
    let (lo, hi) = model.domain;
    if !(q3 >= lo - DOMAIN_SLACK && q3 <= hi + DOMAIN_SLACK) {
        return Err(Error::OutOfDomain { q3, lo, hi });
    }
    Ok(model.value(q3))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchFit {
    pub model: FitModel,
    pub iterations: usize,
    pub points: usize,
    pub rms_residual: f64,
    /// `max - min` of the fitted data.
    pub data_range: f64,
}

impl BranchFit {
    pub fn relative_rms(&self) -> f64 {
        self.rms_residual / self.data_range
    }
}

impl fmt::Display for BranchFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.model.branch;
        let (tag, edge) = match b {
            FitBranch::Left => ('a', 0.0),
            FitBranch::Right => ('b', 1.0),
        };
        let n = b.name();
        for (k, p) in self.model.params.iter().enumerate() {
            writeln!(f, "{n}.{tag}{}={p:?}", k + 1)?;
        }
        writeln!(f, "{n}.domain_lo={:?}", self.model.domain.0)?;
        writeln!(f, "{n}.domain_hi={:?}", self.model.domain.1)?;
        writeln!(f, "{n}.points={}", self.points)?;
        writeln!(f, "{n}.iterations={}", self.iterations)?;
        writeln!(f, "{n}.rms_residual={:?}", self.rms_residual)?;
        writeln!(f, "{n}.relative_rms={:?}", self.relative_rms())?;
        write!(f, "{n}.eval_at_{}={:?}", edge as u8, self.model.value(edge))
    }
}

/// Fits both branches to `(q3, 1/theta)` samples.
pub fn fit_locus(points: &[(f64, f64)]) -> Result<(BranchFit, BranchFit)> {
    Ok((fit_branch(FitBranch::Left, points)?, fit_branch(FitBranch::Right, points)?))
}

/// Levenberg-Marquardt fit of one branch to the samples inside its domain.
pub fn fit_branch(branch: FitBranch, points: &[(f64, f64)]) -> Result<BranchFit> {
    let (lo, hi) = branch.domain();
    let data: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(q, y)| q >= lo - DOMAIN_SLACK && q <= hi + DOMAIN_SLACK && y.is_finite())
        .collect();
    if data.len() < MIN_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} branch has {} points on [{lo}, {hi}], need {MIN_POINTS}",
            branch.name(),
            data.len()
        )));
    }
    let c = branch.center();
    let (params, iterations) = levenberg_marquardt(c, &data, initial_guess(c, &data))?;
    let ssr = sum_sq(c, &params, &data);
    let (ymin, ymax) = data
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &(_, y)| (a.min(y), b.max(y)));
    Ok(BranchFit {
        model: FitModel { branch, params, domain: (lo, hi) },
        iterations,
        points: data.len(),
        rms_residual: (ssr / data.len() as f64).sqrt(),
        data_range: ymax - ymin,
    })
}

fn sum_sq(c: f64, p: &[f64; 3], data: &[(f64, f64)]) -> f64 {
    data.iter().map(|&(q, y)| (model(c, p, q) - y).powi(2)).sum()
}

/// Scans `p3` on a log grid; for each value `p1, p2` follow from linear
/// least squares, and the best triple seeds the nonlinear fit.
fn initial_guess(c: f64, data: &[(f64, f64)]) -> [f64; 3] {
    let n = data.len() as f64;
    let mut best = ([data[0].1, 0.0, 1.0], f64::INFINITY);
    for k in 0..=200 {
        let p3 = 10f64.powf(-10.0 + 12.0 * k as f64 / 200.0);
        let g: Vec<f64> = data.iter().map(|&(q, _)| ((q - c).powi(2) + p3).sqrt()).collect();
        let mg = g.iter().sum::<f64>() / n;
        let my = data.iter().map(|d| d.1).sum::<f64>() / n;
        let sgg: f64 = g.iter().map(|x| (x - mg).powi(2)).sum();
        let sgy: f64 = g.iter().zip(data).map(|(x, d)| (x - mg) * (d.1 - my)).sum();
        let p2 = if sgg > 0.0 { sgy / sgg } else { 0.0 };
        let p = [my - p2 * mg, p2, p3];
        let ssr = sum_sq(c, &p, data);
        if ssr < best.1 {
            best = (p, ssr);
        }
    }
    best.0
}

fn residuals(c: f64, p: &[f64; 3], data: &[(f64, f64)]) -> Vec<f64> {
    data.iter().map(|&(q, y)| model(c, p, q) - y).collect()
}

/// Central differences with a relative step of `1e-6`.
fn jacobian(c: f64, p: &[f64; 3], data: &[(f64, f64)]) -> Vec<[f64; 3]> {
    let mut jac = vec![[0.0; 3]; data.len()];
    for j in 0..3 {
        let h = 1e-6 * p[j].abs().max(1e-12);
        let (mut plus, mut minus) = (*p, *p);
        plus[j] += h;
        minus[j] -= h;
        for (row, &(q, _)) in jac.iter_mut().zip(data) {
            row[j] = (model(c, &plus, q) - model(c, &minus, q)) / (2.0 * h);
        }
    }
    jac
}

fn levenberg_marquardt(c: f64, data: &[(f64, f64)], mut p: [f64; 3]) -> Result<([f64; 3], usize)> {
    let mut cost = sum_sq(c, &p, data);
    let mut lambda = 1e-3;
    for iteration in 1..=MAX_ITERATIONS {
        let r = residuals(c, &p, data);
        let jac = jacobian(c, &p, data);
        let mut a = [[0.0; 3]; 3];
        let mut g = [0.0; 3];
        for (row, ri) in jac.iter().zip(&r) {
            for i in 0..3 {
                g[i] += row[i] * ri;
                for k in 0..3 {
                    a[i][k] += row[i] * row[k];
                }
            }
        }
        let mut accepted = None;
        while lambda < 1e20 {
            let mut damped = a;
            for (i, d) in damped.iter_mut().enumerate() {
                d[i] += lambda * a[i][i].max(1e-300);
            }
            if let Some(step) = solve3(damped, g.map(|x| -x)) {
                let trial = [p[0] + step[0], p[1] + step[1], p[2] + step[2]];
                if trial[2] > 0.0 {
                    let trial_cost = sum_sq(c, &trial, data);
                    if trial_cost < cost {
                        accepted = Some((trial, trial_cost, step));
                        break;
                    }
                }
            }
            lambda *= 4.0;
        }
        let Some((trial, trial_cost, step)) = accepted else {
            // no damping reduces the cost: p is a minimum to working precision
            return Ok((p, iteration));
        };
        let small = step.iter().zip(&trial).all(|(s, x)| s.abs() <= 1e-13 * (x.abs() + 1e-13));
        let stalled = cost - trial_cost <= 1e-15 * cost;
        p = trial;
        cost = trial_cost;
        lambda = (lambda / 3.0).max(1e-12);
        if small || stalled || cost == 0.0 {
            return Ok((p, iteration));
        }
    }
    Err(Error::FitNotConverged { iterations: MAX_ITERATIONS, residual_norm: cost.sqrt() })
}

/// Gaussian elimination with partial pivoting.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if !(a[pivot][col].abs() > 0.0) {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}
