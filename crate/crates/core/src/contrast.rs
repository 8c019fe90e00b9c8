//! Contrast of a spin-propagation matrix and its minimisation over the Bloch
//! sphere.
//!
//! For an orthogonal spinor pair `(psi_A, psi_B)` parameterised by the Bloch
//! angles `(alpha, phi)`, the ratio
//!
//! ```text
//! C'(alpha, phi) = |M psi_A|^2 / |M psi_B|^2
//! ```
//!
//! measures how differently the two initial spin states are diffracted. The
//! contrast `C(M)` is its minimum; zero means `M` has a kernel, one means the
//! diffraction is independent of the initial spin.
//!
//! The minimiser first scans a fixed `126 x 63` grid over the canonical
//! domain `alpha in [0, 2 pi]`, `phi in [0, pi]`, then polishes the best grid
//! point with Newton's method using closed-form gradient and Hessian. Seeds
//! close to a pole of the Bloch chart are polished in a chart with permuted
//! axes, since `phi` degenerates at the poles.
//!
//! # Derivatives
//!
//! Write `G = M^dagger M`, `h = tr(G) / 2`, `d = (G11 - G22) / 2` and
//! `R(phi) = Re(G12 e^{i phi})`. Then
//!
//! ```text
//! |M psi_A|^2 = h + w,   |M psi_B|^2 = h - w,   w = d cos(alpha) + R(phi) sin(alpha)
//! ```
//!
//! so `C' = f(w) = (h + w) / (h - w)` with `f' = 2h / (h - w)^2` and
//! `f'' = 4h / (h - w)^3`. The partial derivatives of `w` are elementary
//! trigonometric expressions, and the chain rule gives the rest.

use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::compton::SpinPropagationMatrix;
use crate::error::{Error, Result};
use crate::linalg::{Complex64, Spinor};

/// Smallest admissible `|M psi_B|^2`.
pub const MIN_DENOMINATOR: f64 = 1e-300;

/// Seeds with `|cos(alpha)|` above this are iterated in the rotated chart.
const POLE_COS: f64 = 0.866;

/// Bloch angles of the spinor pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochPair {
    pub alpha: f64,
    pub phi: f64,
}

impl BlochPair {
    pub const fn new(alpha: f64, phi: f64) -> Self {
        BlochPair { alpha, phi }
    }
}

/// `psi_A = (cos(a/2), sin(a/2) e^{i phi})`, `psi_B = (sin(a/2) e^{-i phi}, -cos(a/2))`.
///
/// `psi_A` has spin expectation along `n = (sin a cos phi, sin a sin phi, cos a)`
/// and `psi_B` along `-n`.
pub fn bloch_spinors(pair: BlochPair) -> (Spinor, Spinor) {
    let (s, c) = (pair.alpha / 2.0).sin_cos();
    let phase = Complex64::from_polar(1.0, pair.phi);
    let psi_a = Spinor::new(c.into(), phase * s);
    let psi_b = Spinor::new(phase.conj() * s, (-c).into());
    (psi_a, psi_b)
}

/// `C'(M)` at the given angles, not minimised.
pub fn contrast_at(m: &SpinPropagationMatrix, pair: BlochPair) -> Result<f64> {
    let (psi_a, psi_b) = bloch_spinors(pair);
    let num = m.apply(&psi_a).norm_sqr();
    let den = m.apply(&psi_b).norm_sqr();
    if !(den >= MIN_DENOMINATOR) {
        return Err(Error::DegenerateDenominator(den));
    }
    Ok(num / den)
}

/// Value, gradient and Hessian of `C'` with respect to `(alpha, phi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContrastDerivatives {
    pub value: f64,
    pub gradient: [f64; 2],
    pub hessian: [[f64; 2]; 2],
}

pub fn contrast_derivatives(m: &SpinPropagationMatrix, pair: BlochPair) -> Result<ContrastDerivatives> {
    let form = QuadraticForm::new(m)?;
    form.derivatives(pair)
}

/// Maps any angle pair onto `alpha in [0, 2 pi]`, `phi in [0, pi]`.
///
/// Uses the `4 pi` period in `alpha` (with the `2 pi` shift only flipping the
/// overall sign of both spinors) and the identification
/// `(alpha, phi + pi) ~ (2 pi - alpha, phi)`.
pub fn canonicalize(pair: BlochPair) -> BlochPair {
    let mut alpha = wrap(pair.alpha, 2.0 * TAU);
    if alpha > TAU {
        alpha -= TAU;
    }
    let mut phi = wrap(pair.phi, TAU);
    if phi > PI {
        phi -= PI;
        alpha = TAU - alpha;
    }
    // normalise -0.0
    BlochPair::new(alpha + 0.0, phi + 0.0)
}

fn wrap(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    // rem_euclid may round up to the period itself for tiny negative input
    if r >= period {
        0.0
    } else {
        r
    }
}

/// Why the Newton iteration stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NewtonStatus {
    ConvergedGradient,
    StoppedSingularHessian,
    StoppedMaxIterations,
}

impl NewtonStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            NewtonStatus::ConvergedGradient => "converged_gradient",
            NewtonStatus::StoppedSingularHessian => "stopped_singular_hessian",
            NewtonStatus::StoppedMaxIterations => "stopped_max_iterations",
        }
    }
}

impl fmt::Display for NewtonStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One Newton iterate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonState {
    pub alpha: f64,
    pub phi: f64,
    pub gradient: [f64; 2],
    pub hessian: [[f64; 2]; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonOptions {
    pub alpha_points: usize,
    pub phi_points: usize,
    pub gradient_tolerance: f64,
    pub det_tolerance: f64,
    pub max_iterations: usize,
    pub record_trace: bool,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            alpha_points: 126,
            phi_points: 63,
            gradient_tolerance: 1e-15,
            det_tolerance: 1e-20,
            max_iterations: 80,
            record_trace: false,
        }
    }
}

/// Minimised contrast and where it was found.
#[derive(Clone, Debug, PartialEq)]
pub struct ContrastResult {
    /// `prob_a / prob_b` at the returned angles.
    pub value: f64,
    pub alpha: f64,
    pub phi: f64,
    /// Newton steps taken after the grid scan.
    pub iterations: usize,
    pub status: NewtonStatus,
    /// `|M psi_A|^2`
    pub prob_a: f64,
    /// `|M psi_B|^2`
    pub prob_b: f64,
    /// Grid seed the iteration started from.
    pub seed: BlochPair,
    /// Every Newton iterate, when requested in the options.
    pub trace: Vec<NewtonState>,
}

impl ContrastResult {
    pub fn angles(&self) -> BlochPair {
        BlochPair::new(self.alpha, self.phi)
    }
}

pub fn minimize_contrast(m: &SpinPropagationMatrix) -> Result<ContrastResult> {
    minimize_contrast_with(m, &NewtonOptions::default())
}

pub fn minimize_contrast_with(m: &SpinPropagationMatrix, opts: &NewtonOptions) -> Result<ContrastResult> {
    let form = QuadraticForm::new(m)?;
    let (seed, seed_value) = form.grid_argmin(opts.alpha_points, opts.phi_points);

    // Near a pole phi is a poor coordinate (the phi rows of g and H scale
    // with sin(alpha)), so iterate in the chart with cyclically permuted axes
    // where the seed sits on the equator side.
    let rotate = seed.alpha.cos().abs() > POLE_COS;
    let (work, start) = if rotate {
        (form.rotated(), from_bloch(rotate_forward(to_bloch(seed))))
    } else {
        (form, seed)
    };
    let back = |p: BlochPair| if rotate { canonicalize(from_bloch(rotate_back(to_bloch(p)))) } else { p };

    let mut best = (start, seed_value);
    let mut current = start;
    let mut trace = Vec::new();
    let mut iterations = 0;
    let status = loop {
        let Ok(der) = work.derivatives(current) else {
            // psi_B in the kernel: C' blows up here, keep the best point so far
            break NewtonStatus::StoppedSingularHessian;
        };
        if der.value < best.1 {
            best = (current, der.value);
        }
        if opts.record_trace {
            let at = back(current);
            trace.push(NewtonState {
                alpha: at.alpha,
                phi: at.phi,
                gradient: der.gradient,
                hessian: der.hessian,
            });
        }
        let [ga, gp] = der.gradient;
        if ga.hypot(gp) < opts.gradient_tolerance {
            break NewtonStatus::ConvergedGradient;
        }
        if iterations >= opts.max_iterations {
            break NewtonStatus::StoppedMaxIterations;
        }
        let [[haa, hap], [hpa, hpp]] = der.hessian;
        let det = haa * hpp - hap * hpa;
        if det < opts.det_tolerance {
            break NewtonStatus::StoppedSingularHessian;
        }
        let step_alpha = (hpp * ga - hap * gp) / det;
        let step_phi = (haa * gp - hpa * ga) / det;
        current = canonicalize(BlochPair::new(current.alpha - step_alpha, current.phi - step_phi));
        iterations += 1;
    };
    // the seed itself is best when no iterate improved on it
    if best.0 == start {
        best.0 = seed;
    } else {
        best.0 = back(best.0);
    }

    let angles = best.0;
    let (psi_a, psi_b) = bloch_spinors(angles);
    let prob_a = m.apply(&psi_a).norm_sqr();
    let prob_b = m.apply(&psi_b).norm_sqr();
    let value = if prob_b > 0.0 { prob_a / prob_b } else { best.1 };
    Ok(ContrastResult {
        value,
        alpha: angles.alpha,
        phi: angles.phi,
        iterations,
        status,
        prob_a,
        prob_b,
        seed,
        trace,
    })
}

/// `M^dagger M` of the max-norm-scaled matrix, reduced to the four real
/// numbers the contrast depends on.
#[derive(Clone, Copy, Debug)]
struct QuadraticForm {
    h: f64,
    d: f64,
    x: f64,
    y: f64,
}

impl QuadraticForm {
    fn new(m: &SpinPropagationMatrix) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::InvalidConfig("spin-propagation matrix is not finite".into()));
        }
        let scale = m.max_abs();
        if !(scale > MIN_DENOMINATOR) {
            return Err(Error::ZeroMatrix);
        }
        let n = m.scale(Complex64::from(1.0 / scale));
        let g11 = n[(0, 0)].norm_sqr() + n[(1, 0)].norm_sqr();
        let g22 = n[(0, 1)].norm_sqr() + n[(1, 1)].norm_sqr();
        let g12 = n[(0, 0)].conj() * n[(0, 1)] + n[(1, 0)].conj() * n[(1, 1)];
        Ok(QuadraticForm {
            h: 0.5 * (g11 + g22),
            d: 0.5 * (g11 - g22),
            x: g12.re,
            y: g12.im,
        })
    }

    /// The same form in the chart with axes `(y, z, x)`.
    ///
    /// `w = V . n` with `V = (x, -y, d)`; permuting `n` and `V` together
    /// leaves `w` unchanged.
    fn rotated(&self) -> Self {
        QuadraticForm { h: self.h, d: self.x, x: -self.y, y: -self.d }
    }

    fn grid_argmin(&self, alpha_points: usize, phi_points: usize) -> (BlochPair, f64) {
        let alphas = angle_table(alpha_points, TAU);
        let phis = angle_table(phi_points, PI);
        let mut best = (BlochPair::new(0.0, 0.0), f64::INFINITY);
        for &(alpha, sa, ca) in alphas.iter() {
            for &(phi, sp, cp) in phis.iter() {
                let w = self.d * ca + (self.x * cp - self.y * sp) * sa;
                let value = (self.h + w) / (self.h - w);
                if value < best.1 {
                    best = (BlochPair::new(alpha, phi), value);
                }
            }
        }
        if best.1.is_infinite() {
            // only reachable if every grid point has psi_B in the kernel
            best.0 = BlochPair::new(0.0, 0.0);
        }
        best
    }

    fn derivatives(&self, pair: BlochPair) -> Result<ContrastDerivatives> {
        let (sa, ca) = pair.alpha.sin_cos();
        let (sp, cp) = pair.phi.sin_cos();
        let r = self.x * cp - self.y * sp;
        let r_phi = -self.x * sp - self.y * cp;

        let w = self.d * ca + r * sa;
        let w_a = -self.d * sa + r * ca;
        let w_p = r_phi * sa;
        let w_aa = -w;
        let w_pp = -r * sa;
        let w_ap = r_phi * ca;

        let den = self.h - w;
        if !(den >= MIN_DENOMINATOR) {
            return Err(Error::DegenerateDenominator(den));
        }
        let f1 = 2.0 * self.h / (den * den);
        let f2 = 2.0 * f1 / den;

        Ok(ContrastDerivatives {
            value: (self.h + w) / den,
            gradient: [f1 * w_a, f1 * w_p],
            hessian: [
                [f2 * w_a * w_a + f1 * w_aa, f2 * w_a * w_p + f1 * w_ap],
                [f2 * w_a * w_p + f1 * w_ap, f2 * w_p * w_p + f1 * w_pp],
            ],
        })
    }
}

/// Bloch vector `(sin a cos p, sin a sin p, cos a)`.
fn to_bloch(p: BlochPair) -> [f64; 3] {
    let (sa, ca) = p.alpha.sin_cos();
    let (sp, cp) = p.phi.sin_cos();
    [sa * cp, sa * sp, ca]
}

fn from_bloch([x, y, z]: [f64; 3]) -> BlochPair {
    BlochPair::new(x.hypot(y).atan2(z), y.atan2(x))
}

fn rotate_forward([x, y, z]: [f64; 3]) -> [f64; 3] {
    [y, z, x]
}

fn rotate_back([x, y, z]: [f64; 3]) -> [f64; 3] {
    [z, x, y]
}

/// `(angle, sin, cos)` at `n` equally spaced points on `[0, span)`.
fn angle_table(n: usize, span: f64) -> Vec<(f64, f64, f64)> {
    (0..n)
        .map(|i| {
            let a = span * i as f64 / n as f64;
            let (s, c) = a.sin_cos();
            (a, s, c)
        })
        .collect()
}
