//! Second-order small-momentum expansion of the Compton tensor around
//! `q_L = q2 = q3 = 0`, used as an independent check of the full tensor.

use crate::compton::{compton_tensor, PolarizationPair, SpinPropagationMatrix};
use crate::dirac::sigma;
use crate::error::Result;
use crate::kinematics::ScatterConfig;
use crate::linalg::{Complex64, SpinMatrix, I, ONE};

/// Above this magnitude of any momentum the expansion is flagged as outside
/// its domain of validity.
pub const DOMAIN_LIMIT: f64 = 0.1;

/// Spatial blocks `M^{ij}` for `i, j` in `{2, 3}` of the expanded tensor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TaylorTensor {
    /// `blocks[i - 2][j - 2]`
    pub blocks: [[SpinMatrix; 2]; 2],
    pub out_of_domain: bool,
}

impl TaylorTensor {
    /// Block for Lorentz indices `i, j` in `{2, 3}`.
    pub fn block(&self, i: usize, j: usize) -> &SpinMatrix {
        &self.blocks[i - 2][j - 2]
    }

    /// Same contraction as the full tensor; `e1` components are zero by
    /// construction of [`PolarizationPair`].
    pub fn contract(&self, pol: &PolarizationPair) -> SpinPropagationMatrix {
        let (a_l, a_r) = (pol.left(), pol.right());
        let mut m = SpinMatrix::zero();
        for i in 0..2 {
            for j in 0..2 {
                m = m + self.blocks[i][j].scale(a_l[i + 1].conj() * a_r[j + 1]);
            }
        }
        m
    }
}

pub fn taylor_tensor(q_l: f64, q2: f64, q3: f64) -> TaylorTensor {
    let id = SpinMatrix::identity();
    let (s1, s2, s3) = (sigma(1), sigma(2), sigma(3));
    let r = |x: f64| Complex64::from(x);
    let im = |x: f64| I * x;

    let m22 = id.scale(r(1.0 - 2.0 * q2 * q2 + 0.5 * q_l * q_l))
        + s2.scale(im(-0.5 * q3 * q_l))
        + s3.scale(im(-1.5 * q2 * q_l));
    let m23 = id.scale(r(-2.0 * q2 * q3))
        + s1.scale(im(-q_l))
        + s2.scale(im(q2 * q_l))
        + s3.scale(im(-q3 * q_l));
    let m32 = id.scale(r(-2.0 * q2 * q3))
        + s1.scale(im(q_l))
        + s2.scale(im(q2 * q_l))
        + s3.scale(im(-q3 * q_l));
    let m33 = id.scale(r(1.0 - 2.0 * q3 * q3 + 0.5 * q_l * q_l))
        + s2.scale(im(1.5 * q3 * q_l))
        + s3.scale(im(0.5 * q2 * q_l));

    let out_of_domain = [q_l, q2, q3].iter().any(|q| q.abs() > DOMAIN_LIMIT);
    TaylorTensor { blocks: [[m22, m23], [m32, m33]], out_of_domain }
}

/// Leading-order spin matrix at `q2 = q3 = 0` with `sin(theta) = q_L`:
/// `-i q_L (1 + sigma_1)`.
pub fn low_momentum_matrix(q_l: f64) -> SpinPropagationMatrix {
    SpinMatrix([[ONE, ONE], [ONE, ONE]]).scale(-I * q_l)
}

/// Largest entrywise deviation between the full and the expanded spin
/// matrices.
pub fn taylor_error(cfg: &ScatterConfig, pol: &PolarizationPair) -> Result<f64> {
    let full = compton_tensor(cfg)?.contract(pol.left(), pol.right());
    let approx = taylor_tensor(cfg.q_l(), cfg.q2(), cfg.q3()).contract(pol);
    Ok(full.max_abs_diff(&approx))
}

/// One rung of a convergence ladder.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LadderRung {
    /// Common value of `q_L`, `q2` and `q3`.
    pub scale: f64,
    pub error: f64,
    pub out_of_domain: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub rungs: Vec<LadderRung>,
    /// Least-squares slope of `ln(error)` against `ln(scale)` over the rungs
    /// with non-zero scale and error; `None` with fewer than two such rungs.
    pub order: Option<f64>,
}

/// Errors along `q_L = q2 = q3 = start / 2^k`, `k = 0..=halvings`.
///
/// A zero scale is the expansion point itself, where both tensors reduce to
/// the zeroth-order blocks and the error is zero by construction.
pub fn convergence_ladder(start: f64, halvings: usize, pol: &PolarizationPair) -> Result<ConvergenceReport> {
    let mut rungs = Vec::with_capacity(halvings + 1);
    for k in 0..=halvings {
        let q = start / 2f64.powi(k as i32);
        let error = if q == 0.0 {
            0.0
        } else {
            taylor_error(&ScatterConfig::new(q.abs(), q, q)?, pol)?
        };
        rungs.push(LadderRung {
            scale: q,
            error,
            out_of_domain: q.abs() > DOMAIN_LIMIT,
        });
    }
    let points: Vec<(f64, f64)> = rungs
        .iter()
        .filter(|r| r.scale != 0.0 && r.error > 0.0)
        .map(|r| (r.scale.abs().ln(), r.error.ln()))
        .collect();
    Ok(ConvergenceReport { order: slope(&points), rungs })
}

fn slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compton::elliptic_polarization;
    use crate::contrast::{minimize_contrast, BlochPair, contrast_at};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn expansion_at_photon_only() {
        let t = taylor_tensor(0.02, 0.0, 0.0);
        let expected = sigma(1).scale(I * -0.02);
        assert!(t.block(2, 3).max_abs_diff(&expected) < 1e-18);
        let expected = SpinMatrix::identity().scale(Complex64::from(1.0002));
        assert!(t.block(2, 2).max_abs_diff(&expected) < 1e-15);
        assert!(!t.out_of_domain);
    }

    #[test]
    fn expansion_at_origin() {
        let t = taylor_tensor(0.0, 0.0, 0.0);
        assert_eq!(*t.block(2, 2), SpinMatrix::identity());
        assert_eq!(*t.block(3, 3), SpinMatrix::identity());
        assert!(t.block(2, 3).max_abs() == 0.0 && t.block(3, 2).max_abs() == 0.0);
    }

    #[test]
    fn out_of_domain_flag() {
        assert!(taylor_tensor(0.2, 0.0, 0.0).out_of_domain);
        assert!(taylor_tensor(0.02, -0.2, 0.0).out_of_domain);
    }

    #[test]
    fn low_momentum_matrix_values() {
        let m = low_momentum_matrix(0.02);
        assert_eq!(m[(0, 1)], Complex64::new(0.0, -0.02));
        let m1 = low_momentum_matrix(1.0);
        assert_eq!(m1, SpinMatrix([[-I, -I], [-I, -I]]));
        // annihilates psi_A at (3 pi / 2, 0)
        assert!(contrast_at(&m, BlochPair::new(3.0 * FRAC_PI_2, 0.0)).unwrap() <= 1e-28);
        let r = minimize_contrast(&m).unwrap();
        assert!((r.alpha - 3.0 * FRAC_PI_2).abs() < 1e-12 && r.phi == 0.0);
    }

    #[test]
    fn error_bound_at_laser_only_point() {
        let cfg = ScatterConfig::new(0.02, 0.0, 0.0).unwrap();
        let err = taylor_error(&cfg, &elliptic_polarization(0.02f64.asin())).unwrap();
        assert!(err <= 5.0 * 0.02f64.powi(3), "{err}");
    }

    #[test]
    fn doubling_scales_error_by_eight() {
        let pol = elliptic_polarization(0.7);
        let e1 = taylor_error(&ScatterConfig::new(1e-3, 1e-3, 1e-3).unwrap(), &pol).unwrap();
        let e2 = taylor_error(&ScatterConfig::new(2e-3, 2e-3, 2e-3).unwrap(), &pol).unwrap();
        let ratio = e2 / e1;
        assert!((ratio - 8.0).abs() < 1.5, "{ratio}");
    }

    #[test]
    fn zero_scale_ladder_is_exact() {
        let rep = convergence_ladder(0.0, 2, &elliptic_polarization(0.3)).unwrap();
        assert!(rep.rungs.iter().all(|r| r.error == 0.0));
        assert_eq!(rep.order, None);
        let rep = convergence_ladder(0.2, 0, &elliptic_polarization(0.3)).unwrap();
        assert!(rep.rungs[0].out_of_domain);
    }
}
