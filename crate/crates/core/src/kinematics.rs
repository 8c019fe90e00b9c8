//! Two-photon Bragg kinematics in units of the electron mass.
//!
//! The standing wave runs along `e1`. The electron enters with momentum
//! `(-q_L, q2, q3)` and leaves with `(+q_L, q2, q3)` after absorbing a photon
//! `k = (q_L, q_L, 0, 0)` from the right-moving beam and emitting
//! `k' = (q_L, -q_L, 0, 0)` into the left-moving one. Both electron states
//! have the same energy, so the process is elastic.

use std::ops::{Add, Index, Neg, Sub};

use crate::error::{Error, Result};

/// Real four-vector `(t, x, y, z)` with metric `diag(1, -1, -1, -1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        FourVector([t, x, y, z])
    }

    pub fn time(&self) -> f64 {
        self.0[0]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    /// Minkowski square `p.p`.
    pub fn square(&self) -> f64 {
        minkowski_dot(self, self)
    }
}

impl Index<usize> for FourVector {
    type Output = f64;
    fn index(&self, mu: usize) -> &f64 {
        &self.0[mu]
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, rhs: FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, rhs: FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector(self.0.map(|x| -x))
    }
}

/// `a^0 b^0 - a^1 b^1 - a^2 b^2 - a^3 b^3`
pub fn minkowski_dot(a: &FourVector, b: &FourVector) -> f64 {
    a.0[0] * b.0[0] - a.0[1] * b.0[1] - a.0[2] * b.0[2] - a.0[3] * b.0[3]
}

/// Relativistic energy `sqrt(1 + qx^2 + q2^2 + q3^2)` for `m = 1`.
pub fn energy(q2: f64, q3: f64, qx: f64) -> f64 {
    (1.0 + qx * qx + q2 * q2 + q3 * q3).sqrt()
}

/// Dimensionless scattering parameters: photon momentum `q_L = k_L / m` and
/// transverse electron momenta `q2 = p2 / m`, `q3 = p3 / m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScatterConfig {
    q_l: f64,
    q2: f64,
    q3: f64,
}

impl ScatterConfig {
    pub fn new(q_l: f64, q2: f64, q3: f64) -> Result<Self> {
        if !(q_l.is_finite() && q2.is_finite() && q3.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "non-finite momenta (q_L={q_l}, q2={q2}, q3={q3})"
            )));
        }
        if q_l <= 0.0 {
            return Err(Error::InvalidConfig(format!("q_L must be positive, got {q_l}")));
        }
        Ok(ScatterConfig { q_l, q2, q3 })
    }

    pub fn q_l(&self) -> f64 {
        self.q_l
    }

    pub fn q2(&self) -> f64 {
        self.q2
    }

    pub fn q3(&self) -> f64 {
        self.q3
    }

    pub fn with_q2(self, q2: f64) -> Result<Self> {
        Self::new(self.q_l, q2, self.q3)
    }

    pub fn with_q3(self, q3: f64) -> Result<Self> {
        Self::new(self.q_l, self.q2, q3)
    }
}

/// Four-momenta of the electron and both photons for one configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KinematicSet {
    pub p_i: FourVector,
    pub p_f: FourVector,
    pub k: FourVector,
    pub k_prime: FourVector,
}

pub fn build_kinematics(cfg: &ScatterConfig) -> KinematicSet {
    let ScatterConfig { q_l, q2, q3 } = *cfg;
    let e = energy(q2, q3, q_l);
    KinematicSet {
        p_i: FourVector::new(e, -q_l, q2, q3),
        p_f: FourVector::new(e, q_l, q2, q3),
        k: FourVector::new(q_l, q_l, 0.0, 0.0),
        k_prime: FourVector::new(q_l, -q_l, 0.0, 0.0),
    }
}
