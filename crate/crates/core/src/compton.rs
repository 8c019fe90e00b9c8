//! Compton tensor for one-photon absorption plus one-photon emission, and its
//! contraction with the two beam polarizations into the 2x2 spin-propagation
//! matrix.

use crate::dirac::{bispinor_u, dirac_adjoint, gammas, slash, Branch, Spin};
use crate::error::{Error, Result};
use crate::kinematics::{build_kinematics, minkowski_dot, ScatterConfig};
use crate::linalg::{Complex64, DiracMatrix, SpinMatrix, I, ZERO};

/// Complex spatial polarization amplitude `(e1, e2, e3)`.
pub type Polarization = [Complex64; 3];

/// Spin-propagation matrix: rows are final spin, columns initial spin, so
/// that `c_f = M c_i`.
pub type SpinPropagationMatrix = SpinMatrix;

/// Amplitudes of the left- and right-propagating beams.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationPair {
    a_l: Polarization,
    a_r: Polarization,
}

impl PolarizationPair {
    /// Both beams travel along `e1`, so their first component must vanish.
    pub fn new(a_l: Polarization, a_r: Polarization) -> Result<Self> {
        if a_l[0] != ZERO || a_r[0] != ZERO {
            return Err(Error::InvalidPolarization(
                "component along the beam axis e1 must be zero".into(),
            ));
        }
        let finite = a_l
            .iter()
            .chain(a_r.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return Err(Error::InvalidPolarization("non-finite amplitude".into()));
        }
        if a_l.iter().chain(a_r.iter()).all(|z| *z == ZERO) {
            return Err(Error::InvalidPolarization("both amplitudes are zero".into()));
        }
        Ok(PolarizationPair { a_l, a_r })
    }

    pub fn left(&self) -> &Polarization {
        &self.a_l
    }

    pub fn right(&self) -> &Polarization {
        &self.a_r
    }
}

/// `A_l = (0, cos theta, i sin theta)`, `A_r = e3`.
pub fn elliptic_polarization(theta: f64) -> PolarizationPair {
    let a_l = [ZERO, Complex64::from(theta.cos()), I * theta.sin()];
    let a_r = [ZERO, ZERO, Complex64::from(1.0)];
    PolarizationPair::new(a_l, a_r).expect("elliptic family is a valid polarization")
}

/// All sixteen Lorentz components `M^{s's; mu nu}`, each stored as a 2x2
/// spin block with rows indexed by the final spin `s` and columns by the
/// initial spin `s'`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComptonTensor {
    pub entries: [[SpinMatrix; 4]; 4],
}

impl ComptonTensor {
    pub fn block(&self, mu: usize, nu: usize) -> &SpinMatrix {
        &self.entries[mu][nu]
    }

    /// `sum_{i,j} conj(a_l^i) a_r^j M^{ij}` over spatial indices.
    ///
    /// Covariant spatial components carry a minus sign each, which cancel in
    /// the product; temporal components never enter.
    pub fn contract(&self, a_l: &Polarization, a_r: &Polarization) -> SpinMatrix {
        let mut m = SpinMatrix::zero();
        for i in 0..3 {
            for j in 0..3 {
                let w = a_l[i].conj() * a_r[j];
                if w != ZERO {
                    m = m + self.entries[i + 1][j + 1].scale(w);
                }
            }
        }
        m
    }
}

pub fn compton_tensor(cfg: &ScatterConfig) -> Result<ComptonTensor> {
    let kin = build_kinematics(cfg);
    let g = gammas();
    let id = DiracMatrix::identity();

    let absorb_first = (slash(&kin.p_i) + slash(&kin.k) + id)
        .scale((1.0 / (2.0 * minkowski_dot(&kin.p_i, &kin.k))).into());
    let emit_first = (slash(&kin.p_i) - slash(&kin.k_prime) + id)
        .scale((1.0 / (2.0 * minkowski_dot(&kin.p_i, &kin.k_prime))).into());

    let mut u_in = [None; 2];
    let mut ubar_out = [None; 2];
    for s in Spin::BOTH {
        u_in[s.index()] = Some(bispinor_u(&kin.p_i, s, Branch::Positive)?);
        ubar_out[s.index()] = Some(dirac_adjoint(&bispinor_u(&kin.p_f, s, Branch::Positive)?));
    }

    let mut entries = [[SpinMatrix::zero(); 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            let vertex = g[mu] * absorb_first * g[nu] - g[nu] * emit_first * g[mu];
            let block = &mut entries[mu][nu];
            for s in Spin::BOTH {
                let row = ubar_out[s.index()].unwrap().mul_matrix(&vertex);
                for s_in in Spin::BOTH {
                    block[(s.index(), s_in.index())] = row.dot(&u_in[s_in.index()].unwrap());
                }
            }
        }
    }
    Ok(ComptonTensor { entries })
}

/// Spin-propagation matrix for one configuration and beam polarization.
pub fn spin_matrix(cfg: &ScatterConfig, pol: &PolarizationPair) -> Result<SpinPropagationMatrix> {
    Ok(compton_tensor(cfg)?.contract(pol.left(), pol.right()))
}
