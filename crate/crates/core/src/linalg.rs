//! Fixed-size complex vectors and matrices.
//!
//! Everything in this crate lives in two or four complex dimensions, so the
//! types here are plain arrays with the handful of operations the physics
//! needs: products, sums, scalar multiples, adjoints and inner products.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

pub use num_complex::Complex64;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Two-component complex spinor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spinor(pub [Complex64; 2]);

impl Spinor {
    pub fn new(up: Complex64, down: Complex64) -> Self {
        Spinor([up, down])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0[0].norm_sqr() + self.0[1].norm_sqr()
    }

    /// Hermitian inner product `<self, other>`, antilinear in `self`.
    pub fn inner(&self, other: &Spinor) -> Complex64 {
        self.0[0].conj() * other.0[0] + self.0[1].conj() * other.0[1]
    }
}

impl Index<usize> for Spinor {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

/// Complex 2x2 matrix acting on spin space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinMatrix(pub [[Complex64; 2]; 2]);

impl SpinMatrix {
    pub const fn zero() -> Self {
        SpinMatrix([[ZERO; 2]; 2])
    }

    pub const fn identity() -> Self {
        SpinMatrix([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn from_rows(rows: [[Complex64; 2]; 2]) -> Self {
        SpinMatrix(rows)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|z| *z *= s);
        out
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        SpinMatrix([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        SpinMatrix([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn apply(&self, v: &Spinor) -> Spinor {
        let m = &self.0;
        Spinor([
            m[0][0] * v.0[0] + m[0][1] * v.0[1],
            m[1][0] * v.0[0] + m[1][1] * v.0[1],
        ])
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &SpinMatrix) -> f64 {
        (*self - *other).max_abs()
    }
}

impl Index<(usize, usize)> for SpinMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.0[r][c]
    }
}

impl IndexMut<(usize, usize)> for SpinMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.0[r][c]
    }
}

impl Add for SpinMatrix {
    type Output = SpinMatrix;
    fn add(mut self, rhs: SpinMatrix) -> SpinMatrix {
        for r in 0..2 {
            for c in 0..2 {
                self.0[r][c] += rhs.0[r][c];
            }
        }
        self
    }
}

impl Sub for SpinMatrix {
    type Output = SpinMatrix;
    fn sub(mut self, rhs: SpinMatrix) -> SpinMatrix {
        for r in 0..2 {
            for c in 0..2 {
                self.0[r][c] -= rhs.0[r][c];
            }
        }
        self
    }
}

impl Neg for SpinMatrix {
    type Output = SpinMatrix;
    fn neg(self) -> SpinMatrix {
        self.scale(-ONE)
    }
}

impl Mul for SpinMatrix {
    type Output = SpinMatrix;
    fn mul(self, rhs: SpinMatrix) -> SpinMatrix {
        let mut out = SpinMatrix::zero();
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] = self.0[r][0] * rhs.0[0][c] + self.0[r][1] * rhs.0[1][c];
            }
        }
        out
    }
}

impl Mul<SpinMatrix> for Complex64 {
    type Output = SpinMatrix;
    fn mul(self, rhs: SpinMatrix) -> SpinMatrix {
        rhs.scale(self)
    }
}

impl Mul<SpinMatrix> for f64 {
    type Output = SpinMatrix;
    fn mul(self, rhs: SpinMatrix) -> SpinMatrix {
        rhs.scale(Complex64::from(self))
    }
}

/// Complex 4x4 matrix acting on Dirac bispinors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiracMatrix(pub [[Complex64; 4]; 4]);

impl DiracMatrix {
    pub const fn zero() -> Self {
        DiracMatrix([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = ONE;
        }
        m
    }

    /// Assembles a 4x4 matrix from 2x2 blocks `[[a, b], [c, d]]`.
    pub fn from_blocks(a: SpinMatrix, b: SpinMatrix, c: SpinMatrix, d: SpinMatrix) -> Self {
        let mut m = Self::zero();
        for r in 0..2 {
            for col in 0..2 {
                m.0[r][col] = a.0[r][col];
                m.0[r][col + 2] = b.0[r][col];
                m.0[r + 2][col] = c.0[r][col];
                m.0[r + 2][col + 2] = d.0[r][col];
            }
        }
        m
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|z| *z *= s);
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &BiSpinor) -> BiSpinor {
        let mut out = [ZERO; 4];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|c| self.0[r][c] * v.0[c]).sum();
        }
        BiSpinor(out)
    }
}

impl Index<(usize, usize)> for DiracMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.0[r][c]
    }
}

impl Add for DiracMatrix {
    type Output = DiracMatrix;
    fn add(mut self, rhs: DiracMatrix) -> DiracMatrix {
        for r in 0..4 {
            for c in 0..4 {
                self.0[r][c] += rhs.0[r][c];
            }
        }
        self
    }
}

impl Sub for DiracMatrix {
    type Output = DiracMatrix;
    fn sub(mut self, rhs: DiracMatrix) -> DiracMatrix {
        for r in 0..4 {
            for c in 0..4 {
                self.0[r][c] -= rhs.0[r][c];
            }
        }
        self
    }
}

impl Mul for DiracMatrix {
    type Output = DiracMatrix;
    fn mul(self, rhs: DiracMatrix) -> DiracMatrix {
        let mut out = DiracMatrix::zero();
        for r in 0..4 {
            for c in 0..4 {
                out.0[r][c] = (0..4).map(|k| self.0[r][k] * rhs.0[k][c]).sum();
            }
        }
        out
    }
}

impl Mul<DiracMatrix> for f64 {
    type Output = DiracMatrix;
    fn mul(self, rhs: DiracMatrix) -> DiracMatrix {
        rhs.scale(Complex64::from(self))
    }
}

/// Four-component Dirac spinor (column).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BiSpinor(pub [Complex64; 4]);

impl BiSpinor {
    /// `u^dagger u`.
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<usize> for BiSpinor {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

/// Row bispinor, as produced by the Dirac adjoint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RowBiSpinor(pub [Complex64; 4]);

impl RowBiSpinor {
    /// Row-times-column contraction, no conjugation.
    pub fn dot(&self, v: &BiSpinor) -> Complex64 {
        self.0.iter().zip(v.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn mul_matrix(&self, m: &DiracMatrix) -> RowBiSpinor {
        let mut out = [ZERO; 4];
        for (c, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|r| self.0[r] * m.0[r][c]).sum();
        }
        RowBiSpinor(out)
    }
}

impl Index<usize> for RowBiSpinor {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}
