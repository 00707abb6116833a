//! Closed-form gate unitaries from pulse and coupling parameters.
//!
//! Global phases are kept exactly as produced by the time evolution (for
//! example the Hadamard pulse yields `e^{−iπ/2}·H`); they are only stripped in
//! [`equal_up_to_global_phase`].

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{identity2, kron, Complex, ComplexMatrix};

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);
const I: Complex = Complex::new(0.0, 1.0);

/// Tolerance on ‖ψ‖₂ − 1 for a [`PureState`].
pub const NORM_TOL: f64 = 1e-12;
/// Unitarity tolerance enforced by [`apply`].
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GateError {
    #[error("state of length {0} is not a 1- or 2-qubit state")]
    BadStateDim(usize),
    #[error("state norm {0} differs from 1")]
    NotNormalized(f64),
    #[error("operator dimension {op} does not match state dimension {state}")]
    DimMismatch { op: usize, state: usize },
    #[error("operator is not unitary")]
    NotUnitary,
}

/// Normalized state vector of one or two qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex>) -> Result<Self, GateError> {
        if !matches!(amplitudes.len(), 2 | 4) {
            return Err(GateError::BadStateDim(amplitudes.len()));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !((norm - 1.0).abs() <= NORM_TOL) {
            return Err(GateError::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes `amplitudes` first; fails only on a zero or non-finite vector.
    pub fn normalized(amplitudes: Vec<Complex>) -> Result<Self, GateError> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(GateError::NotNormalized(norm));
        }
        Self::new(amplitudes.into_iter().map(|z| z / norm).collect())
    }

    /// Computational basis state `|index⟩` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self, GateError> {
        if !matches!(dim, 2 | 4) || index >= dim {
            return Err(GateError::BadStateDim(dim));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { amplitudes: amps })
    }

    /// `|0⟩ ≡ |p_x⟩`.
    pub fn zero() -> Self {
        Self::basis(2, 0).expect("valid")
    }

    /// `|1⟩ ≡ |p_y⟩`.
    pub fn one() -> Self {
        Self::basis(2, 1).expect("valid")
    }

    /// Clockwise OAM state `|↻⟩ = (|p_x⟩ + |p_y⟩)/√2`.
    pub fn clockwise() -> Self {
        Self::superpose(&Self::zero(), &Self::one(), ONE)
    }

    /// Anticlockwise OAM state `|↺⟩ = (|p_x⟩ − |p_y⟩)/√2`.
    pub fn anticlockwise() -> Self {
        Self::superpose(&Self::zero(), &Self::one(), -ONE)
    }

    // (|a⟩ + c|b⟩)/√2 for orthonormal a, b and unit c.
    fn superpose(a: &Self, b: &Self, c: Complex) -> Self {
        let s = FRAC_1_SQRT_2;
        let amps = a
            .amplitudes
            .iter()
            .zip(&b.amplitudes)
            .map(|(x, y)| (x + c * y) * s)
            .collect();
        Self { amplitudes: amps }
    }

    /// `|a⟩ ⊗ |b⟩` for single-qubit factors; left factor is qubit 1.
    pub fn product(a: &Self, b: &Self) -> Result<Self, GateError> {
        if a.dim() != 2 || b.dim() != 2 {
            return Err(GateError::BadStateDim(a.dim() * b.dim()));
        }
        let amps = a
            .amplitudes
            .iter()
            .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
            .collect();
        Ok(Self { amplitudes: amps })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes).expect("dim 2 or 4")
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GateLabel {
    XPi,
    YPi,
    ZPi,
    Hadamard,
    Cphase,
    Iswap,
    Cnot,
    Custom,
}

impl GateLabel {
    pub const ALL_CANONICAL: [GateLabel; 7] = [
        GateLabel::XPi,
        GateLabel::YPi,
        GateLabel::ZPi,
        GateLabel::Hadamard,
        GateLabel::Cphase,
        GateLabel::Iswap,
        GateLabel::Cnot,
    ];

    /// Textbook matrix for the label, without any global phase.
    pub fn canonical(self) -> Option<ComplexMatrix> {
        let m = match self {
            GateLabel::XPi => ComplexMatrix::from_rows2([[ZERO, ONE], [ONE, ZERO]]),
            GateLabel::YPi => ComplexMatrix::from_rows2([[ZERO, -I], [I, ZERO]]),
            GateLabel::ZPi => ComplexMatrix::from_rows2([[ONE, ZERO], [ZERO, -ONE]]),
            GateLabel::Hadamard => {
                let h = Complex::new(FRAC_1_SQRT_2, 0.0);
                ComplexMatrix::from_rows2([[h, h], [h, -h]])
            }
            GateLabel::Cphase => {
                ComplexMatrix::from_real_diag(&[1.0, 1.0, 1.0, -1.0]).expect("dim 4")
            }
            GateLabel::Iswap => ComplexMatrix::from_rows4([
                [ONE, ZERO, ZERO, ZERO],
                [ZERO, ZERO, -I, ZERO],
                [ZERO, -I, ZERO, ZERO],
                [ZERO, ZERO, ZERO, ONE],
            ]),
            GateLabel::Cnot => ComplexMatrix::from_rows4([
                [ONE, ZERO, ZERO, ZERO],
                [ZERO, ONE, ZERO, ZERO],
                [ZERO, ZERO, ZERO, ONE],
                [ZERO, ZERO, ONE, ZERO],
            ]),
            GateLabel::Custom => return None,
        };
        Some(m)
    }
}

/// Golden matrices produced by the pulse and coupling constructions, phases
/// included.
pub mod golden {
    use super::*;

    /// `[[0, −i], [−i, 0]] = e^{−iπ/2} X_π`.
    pub fn x_pi_pulse() -> ComplexMatrix {
        ComplexMatrix::from_rows2([[ZERO, -I], [-I, ZERO]])
    }

    /// `e^{−iπ/2} [[0, −i], [i, 0]] = e^{−iπ/2} Y_π`.
    pub fn y_pi_pulse() -> ComplexMatrix {
        ComplexMatrix::from_rows2([[ZERO, -I], [I, ZERO]]).scale(-I)
    }

    /// `[[i, 0], [0, −i]] = e^{iπ/2} Z_π`.
    pub fn z_pi_pulse() -> ComplexMatrix {
        ComplexMatrix::from_rows2([[I, ZERO], [ZERO, -I]])
    }

    /// `(−i/√2) [[1, 1], [1, −1]] = e^{−iπ/2} H`.
    pub fn hadamard_pulse() -> ComplexMatrix {
        let h = Complex::new(0.0, -FRAC_1_SQRT_2);
        ComplexMatrix::from_rows2([[h, h], [h, -h]])
    }

    /// `e^{iπ/4}·CPHASE`.
    pub fn cphase_quarter() -> ComplexMatrix {
        ComplexMatrix::from_real_diag(&[1.0, 1.0, 1.0, -1.0])
            .expect("dim 4")
            .scale(Complex::from_polar(1.0, FRAC_PI_4))
    }

    pub fn iswap_quarter() -> ComplexMatrix {
        GateLabel::Iswap.canonical().expect("canonical")
    }

    /// `−[[1,0,0,0],[0,1,0,0],[0,0,0,i],[0,0,i,0]]`.
    pub fn neg_cnot_with_phase() -> ComplexMatrix {
        ComplexMatrix::from_rows4([
            [ONE, ZERO, ZERO, ZERO],
            [ZERO, ONE, ZERO, ZERO],
            [ZERO, ZERO, ZERO, I],
            [ZERO, ZERO, I, ZERO],
        ])
        .scale_real(-1.0)
    }
}

/// `(sin x, cos x)`, exact when `x` is a multiple of π/2 up to round-off, so
/// quarter-turn gates carry exact zeros.
fn sin_cos(x: f64) -> (f64, f64) {
    let k = (x / FRAC_PI_2).round();
    if (x - k * FRAC_PI_2).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
        match (k as i64).rem_euclid(4) {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        }
    } else {
        x.sin_cos()
    }
}

fn phase(x: f64) -> Complex {
    let (s, c) = sin_cos(x);
    Complex::new(c, s)
}

/// Closed-form `exp(−i 𝒫 σ·n̂ τ)` with `n̂ = (sin φ cos θ, sin φ sin θ, cos φ)`.
pub fn pulse_unitary(p_norm: f64, theta: f64, phi: f64, tau: f64) -> ComplexMatrix {
    let angle = p_norm * tau;
    let (s, c) = sin_cos(angle);
    let (sp, cp) = sin_cos(phi);
    let re = Complex::new(c, 0.0);
    ComplexMatrix::from_rows2([
        [re - I * (cp * s), -I * phase(-theta) * (sp * s)],
        [-I * phase(theta) * (sp * s), re + I * (cp * s)],
    ])
}

/// `e^{iJτ}·diag(1, 1, 1, e^{−4iJτ})`.
pub fn cphase_unitary(j_tau: f64) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(4).expect("dim 4");
    u[(3, 3)] = phase(-4.0 * j_tau);
    u.scale(phase(j_tau))
}

/// Identity on `|00⟩, |11⟩`; `cos 2Jτ`, `−i sin 2Jτ` rotation on `|01⟩, |10⟩`.
pub fn iswap_unitary(j_tau: f64) -> ComplexMatrix {
    let (s, c) = sin_cos(2.0 * j_tau);
    let mut u = ComplexMatrix::identity(4).expect("dim 4");
    u[(1, 1)] = Complex::new(c, 0.0);
    u[(2, 2)] = Complex::new(c, 0.0);
    u[(1, 2)] = Complex::new(0.0, -s);
    u[(2, 1)] = Complex::new(0.0, -s);
    u
}

/// `(𝟙 ⊗ H)·CPHASE·(𝟙 ⊗ H)`.
pub fn cnot_composed() -> ComplexMatrix {
    let had = GateLabel::Hadamard.canonical().expect("canonical");
    let ih = kron(&identity2(), &had).expect("2×2 factors");
    ih * GateLabel::Cphase.canonical().expect("canonical") * ih
}

/// Block-diagonal `diag(U₁, U₂)` with `U₁` a `𝒫τ = π` pulse (equal to `−𝟙`
/// for any axis) and `U₂` a `𝒫τ = π/2` pulse at `θ = 0` and polar angle `phi2`.
pub fn cnot_via_pulses(phi2: f64) -> ComplexMatrix {
    let u1 = pulse_unitary(1.0, 0.0, FRAC_PI_2, PI);
    let u2 = pulse_unitary(1.0, 0.0, phi2, FRAC_PI_2);
    let mut out = ComplexMatrix::zeros(4).expect("dim 4");
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = u1[(i, j)];
            out[(i + 2, j + 2)] = u2[(i, j)];
        }
    }
    out
}

/// `|ψ'⟩ = U|ψ⟩`. Rejects non-unitary `u`.
pub fn apply(u: &ComplexMatrix, psi: &PureState) -> Result<PureState, GateError> {
    if u.dim() != psi.dim() {
        return Err(GateError::DimMismatch {
            op: u.dim(),
            state: psi.dim(),
        });
    }
    if !u.is_unitary(UNITARY_TOL) {
        return Err(GateError::NotUnitary);
    }
    let amps = u.apply(psi.amplitudes()).expect("dims checked");
    PureState::normalized(amps)
}

/// True when `‖a − c·b‖_F < tol` for the unit phase `c` fixed by the ratio of
/// `a` to `b` at `b`'s largest-modulus entry.
pub fn equal_up_to_global_phase(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    phase_aligned_deviation(a, b).is_some_and(|d| d < tol)
}

/// Frobenius distance `‖a − c·b‖_F` after aligning the global phase `c`.
/// `None` for mismatched dims or a zero `b`.
pub fn phase_aligned_deviation(a: &ComplexMatrix, b: &ComplexMatrix) -> Option<f64> {
    align_phase(a, b).map(|aligned| (*a - aligned).frobenius_norm())
}

/// Largest entrywise `|a − c·b|` after phase alignment.
pub fn phase_aligned_max_abs(a: &ComplexMatrix, b: &ComplexMatrix) -> Option<f64> {
    align_phase(a, b).map(|aligned| (*a - aligned).max_abs())
}

fn align_phase(a: &ComplexMatrix, b: &ComplexMatrix) -> Option<ComplexMatrix> {
    if a.dim() != b.dim() {
        return None;
    }
    let (k, bk) = b
        .entries()
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))?;
    if bk.norm() == 0.0 {
        return None;
    }
    let ratio = a.entries()[k] / bk;
    let c = if ratio.norm() == 0.0 {
        ONE
    } else {
        ratio / ratio.norm()
    };
    Some(b.scale(c))
}
