//! Dense complex linear algebra for the 2×2 and 4×4 matrices that carry
//! single- and two-qubit Hamiltonians, unitaries and density operators.
//!
//! Storage is a fixed `[Complex; 16]` row-major buffer so matrices are `Copy`
//! and never touch the heap; only the leading `dim²` entries are meaningful.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

pub type Complex = Complex64;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);
const I: Complex = Complex::new(0.0, 1.0);

/// Off-diagonal Frobenius norm, relative to the full norm, at which Jacobi
/// iteration stops.
const JACOBI_REL_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues above `-PSD_CLAMP` are treated as round-off and clamped to zero.
pub const PSD_CLAMP: f64 = 1e-10;

/// Hermiticity tolerance required by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("unsupported matrix dimension {0} (expected 2 or 4)")]
    UnsupportedDim(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("expected {expected} entries, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian (‖A − A†‖_F = {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("kron expects 2×2 factors, got {0}×{0} and {1}×{1}")]
    KronDim(usize, usize),
    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Square complex matrix of dimension 2 or 4, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [Complex; 16],
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 => Ok(()),
        d => Err(LinalgError::UnsupportedDim(d)),
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: [ZERO; 16],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from `dim²` row-major entries, rejecting NaN/Inf.
    pub fn from_row_major(dim: usize, entries: &[Complex]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(LinalgError::BadLength {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let mut m = Self {
            dim,
            data: [ZERO; 16],
        };
        for (k, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(LinalgError::NonFinite {
                    row: k / dim,
                    col: k % dim,
                });
            }
            m.data[k] = *z;
        }
        Ok(m)
    }

    /// 2×2 matrix from rows. Panics on non-finite input; intended for literals.
    pub fn from_rows2(rows: [[Complex; 2]; 2]) -> Self {
        let flat: Vec<Complex> = rows.iter().flatten().copied().collect();
        Self::from_row_major(2, &flat).expect("finite 2×2 literal")
    }

    /// 4×4 matrix from rows. Panics on non-finite input; intended for literals.
    pub fn from_rows4(rows: [[Complex; 4]; 4]) -> Self {
        let flat: Vec<Complex> = rows.iter().flatten().copied().collect();
        Self::from_row_major(4, &flat).expect("finite 4×4 literal")
    }

    pub fn from_real_diag(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(*d, 0.0);
        }
        Ok(m)
    }

    /// Outer product `|a⟩⟨b|`.
    pub fn outer(a: &[Complex], b: &[Complex]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(LinalgError::DimMismatch {
                left: a.len(),
                right: b.len(),
            });
        }
        let mut m = Self::zeros(a.len())?;
        for i in 0..a.len() {
            for j in 0..b.len() {
                m[(i, j)] = a[i] * b[j].conj();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex] {
        &self.data[..self.dim * self.dim]
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.data[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = *self;
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = self.data[j * n + i].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = *self;
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = self.data[j * n + i];
            }
        }
        out
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z = z.conj());
        out
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    // Raw row-major buffer with stride `dim`, for hot loops in this crate.
    pub(crate) fn raw(&self) -> &[Complex; 16] {
        &self.data
    }

    pub(crate) fn raw_mut(&mut self) -> &mut [Complex; 16] {
        &mut self.data
    }

    pub fn scale(&self, s: Complex) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z *= s);
        out
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex::new(s, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(LinalgError::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = Self {
            dim: n,
            data: [ZERO; 16],
        };
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    /// `A·v` for a state vector of matching length.
    pub fn apply(&self, v: &[Complex]) -> Result<Vec<Complex>> {
        if v.len() != self.dim {
            return Err(LinalgError::DimMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        let n = self.dim;
        Ok((0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum())
            .collect())
    }

    /// Commutator `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(self.matmul(other)? - other.matmul(self)?)
    }

    /// ‖A − A†‖_F.
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.adjoint()).frobenius_norm()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let id = Self::identity(self.dim).expect("valid dim");
        (self.mul_unchecked(&self.adjoint()) - id).frobenius_norm() <= tol
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        match hermitian_eig(self) {
            Ok(eig) => eig.values[0] >= -tol,
            Err(_) => false,
        }
    }

    /// `(A + A†)/2`, used to strip round-off anti-Hermitian parts.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale_real(0.5)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}×{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        assert!(i < self.dim && j < self.dim, "index out of range");
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        assert!(i < self.dim && j < self.dim, "index out of range");
        &mut self.data[i * self.dim + j]
    }
}

// The operator impls panic on dimension mismatch; use `matmul` for a checked
// product.
impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        self.mul_unchecked(&rhs)
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for ComplexMatrix {
    fn add_assign(&mut self, rhs: Self) {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a += b;
        }
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(mut self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a -= b;
        }
        self
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> Self {
        self.scale_real(-1.0)
    }
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

/// Kronecker product of two 2×2 matrices:
/// `result[2i+k][2j+l] = a[i][j]·b[k][l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim != 2 || b.dim != 2 {
        return Err(LinalgError::KronDim(a.dim, b.dim));
    }
    let mut out = ComplexMatrix::zeros(4)?;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

pub fn identity2() -> ComplexMatrix {
    ComplexMatrix::identity(2).expect("dim 2")
}

pub fn identity4() -> ComplexMatrix {
    ComplexMatrix::identity(4).expect("dim 4")
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_rows2([[ZERO, ONE], [ONE, ZERO]])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_rows2([[ZERO, -I], [I, ZERO]])
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_rows2([[ONE, ZERO], [ZERO, -ONE]])
}

/// Spectrum and eigenvectors of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    /// `V·diag(f(λ))·V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> Complex) -> ComplexMatrix {
        let n = self.vectors.dim;
        let v = &self.vectors;
        let fl: Vec<Complex> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix {
            dim: n,
            data: [ZERO; 16],
        };
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n).map(|k| v[(i, k)] * fl[k] * v[(j, k)].conj()).sum();
            }
        }
        out
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex> {
        (0..self.vectors.dim)
            .map(|i| self.vectors[(i, k)])
            .collect()
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Each rotation first removes the phase of `a[p][q]` and then applies the
/// real symmetric Jacobi rotation that zeroes it.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEig> {
    let defect = a.hermiticity_defect();
    let scale = a.frobenius_norm();
    if defect > HERMITIAN_TOL * scale.max(1.0) {
        return Err(LinalgError::NotHermitian(defect));
    }
    let n = a.dim;
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n)?;

    let target = JACOBI_REL_TOL * scale;
    let mut sweeps = 0;
    while off_diagonal_norm(&m) > target {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(LinalgError::NoConvergence(sweeps));
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = apq / mag;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // J = diag(1, e^{-iα}) · R(c, s) embedded at (p, q).
                let mut j = ComplexMatrix::identity(n)?;
                j[(p, p)] = Complex::new(c, 0.0);
                j[(p, q)] = Complex::new(s, 0.0);
                j[(q, p)] = phase.conj() * (-s);
                j[(q, q)] = phase.conj() * c;

                m = j.adjoint().mul_unchecked(&m).mul_unchecked(&j);
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                v = v.mul_unchecked(&j);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(x, x)].re.total_cmp(&m[(y, y)].re));
    let values = order.iter().map(|&k| m[(k, k)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n)?;
    for (col, &k) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, k)];
        }
    }
    Ok(HermitianEig { values, vectors })
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eig(a)?.values)
}

/// Hermitian PSD square root. Eigenvalues in `[-1e-10, 0)` are clamped to 0.
pub fn sqrt_psd(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(a)?;
    if let Some(&bad) = eig.values.iter().find(|&&l| l < -PSD_CLAMP) {
        return Err(LinalgError::NotPsd(bad));
    }
    let floor = eigenvalue_floor(&eig.values);
    Ok(eig.reconstruct_with(|l| Complex::new(if l > floor { l.sqrt() } else { 0.0 }, 0.0)))
}

/// Eigenvalues at or below this level are indistinguishable from 0 for a
/// spectrum computed in double precision.
pub fn eigenvalue_floor(values: &[f64]) -> f64 {
    let scale = values.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    8.0 * f64::EPSILON * scale
}

/// `exp(−i·h·t)` for Hermitian `h`, via its eigendecomposition.
pub fn expm_hermitian_scaled(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h)?;
    Ok(eig.reconstruct_with(|l| Complex::from_polar(1.0, -l * t)))
}
