//! Pauli and Dirac matrices in the Dirac representation, free bispinors and
//! Feynman-slashed momenta.

use crate::error::{Error, Result};
use crate::kinematics::FourVector;
use crate::linalg::{BiSpinor, Complex64, DiracMatrix, RowBiSpinor, SpinMatrix, I, ONE, ZERO};

/// Tolerance on `|p.p - 1|` for a momentum to count as on shell.
pub const ON_SHELL_TOLERANCE: f64 = 1e-10;

/// Spin label of the two-spinor `chi^s`, in the `sigma_3` eigenbasis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Spin {
    /// `chi^1 = (1, 0)`
    Up,
    /// `chi^2 = (0, 1)`
    Down,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];

    /// Zero-based row/column index in spin space.
    pub fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    pub fn chi(self) -> [Complex64; 2] {
        match self {
            Spin::Up => [ONE, ZERO],
            Spin::Down => [ZERO, ONE],
        }
    }
}

/// Positive- or negative-energy bispinor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Positive,
    Negative,
}

/// Pauli matrix `sigma_i` for `i` in `1..=3`.
pub fn pauli(i: usize) -> Result<SpinMatrix> {
    let m = match i {
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, -I], [I, ZERO]],
        3 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => return Err(Error::IndexOutOfRange { what: "Pauli", index: i }),
    };
    Ok(SpinMatrix(m))
}

pub(crate) fn sigma(i: usize) -> SpinMatrix {
    pauli(i).expect("pauli index in 1..=3")
}

/// Dirac matrix `gamma^mu` for `mu` in `0..=3`:
/// `gamma^0 = diag(1, -1)`, `gamma^i = [[0, sigma_i], [-sigma_i, 0]]`.
pub fn gamma(mu: usize) -> Result<DiracMatrix> {
    let id = SpinMatrix::identity();
    let z = SpinMatrix::zero();
    match mu {
        0 => Ok(DiracMatrix::from_blocks(id, z, z, -id)),
        1..=3 => {
            let s = sigma(mu);
            Ok(DiracMatrix::from_blocks(z, s, -s, z))
        }
        _ => Err(Error::IndexOutOfRange { what: "gamma", index: mu }),
    }
}

/// All four gamma matrices, indexed by `mu`.
pub fn gammas() -> [DiracMatrix; 4] {
    std::array::from_fn(|mu| gamma(mu).expect("mu in 0..=3"))
}

/// `gamma^mu p_mu = gamma^0 p^0 - gamma^1 p^1 - gamma^2 p^2 - gamma^3 p^3`.
pub fn slash(p: &FourVector) -> DiracMatrix {
    let g = gammas();
    let mut out = g[0].scale(Complex64::from(p[0]));
    for mu in 1..4 {
        out = out - g[mu].scale(Complex64::from(p[mu]));
    }
    out
}

/// Free bispinor `u^{+/-, s}_p` with normalisation `sqrt((E + 1) / 2)`.
///
/// The positive branch places `chi^s` in the upper components and
/// `(sigma.p) chi^s / (E + 1)` in the lower ones; the negative branch swaps
/// the two blocks.
pub fn bispinor_u(p: &FourVector, s: Spin, branch: Branch) -> Result<BiSpinor> {
    let e = p.time();
    let shell = p.square();
    if !(e > 0.0) || !((shell - 1.0).abs() <= ON_SHELL_TOLERANCE) {
        return Err(Error::OffShell { mass_shell: shell });
    }
    let [px, py, pz] = p.spatial();
    let sigma_p = sigma(1).scale(px.into()) + sigma(2).scale(py.into()) + sigma(3).scale(pz.into());
    let chi = s.chi();
    let small = sigma_p
        .scale(Complex64::from(1.0 / (e + 1.0)))
        .apply(&crate::linalg::Spinor(chi));
    let norm = Complex64::from(((e + 1.0) / 2.0).sqrt());
    let (upper, lower) = match branch {
        Branch::Positive => (chi, small.0),
        Branch::Negative => (small.0, chi),
    };
    Ok(BiSpinor([
        norm * upper[0],
        norm * upper[1],
        norm * lower[0],
        norm * lower[1],
    ]))
}

/// `u-bar = u^dagger gamma^0`.
pub fn dirac_adjoint(u: &BiSpinor) -> RowBiSpinor {
    let c = u.0.map(|z| z.conj());
    RowBiSpinor([c[0], c[1], -c[2], -c[3]])
}
