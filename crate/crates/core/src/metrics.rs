//! State diagnostics: Bloch vector, purity, Uhlmann fidelity, Von Neumann
//! entropy (base 2) and Wootters concurrence.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{
    eigenvalue_floor, hermitian_eigenvalues, kron, sigma_y, sqrt_psd, ComplexMatrix, LinalgError,
};
use crate::lindblad::DensityOperator;

/// Round-off band around 0 and 1 that is clamped rather than rejected.
pub const CLAMP_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("expected a {expected}-dimensional state, got {got}")]
    WrongDim { expected: usize, got: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("{what} out of range: {value:.3e}")]
    OutOfRange { what: &'static str, value: f64 },
}

pub type Result<T> = std::result::Result<T, MetricsError>;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// `x = 2 Re ρ₀₁`, `y = 2 Im ρ₁₀`, `z = ρ₀₀ − ρ₁₁`.
pub fn bloch_vector(rho: &DensityOperator) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(MetricsError::WrongDim {
            expected: 2,
            got: rho.dim(),
        });
    }
    let m = rho.matrix();
    Ok(BlochVector {
        x: 2.0 * m[(0, 1)].re,
        y: 2.0 * m[(1, 0)].im,
        z: (m[(0, 0)] - m[(1, 1)]).re,
    })
}

/// `Tr ρ²`.
pub fn purity(rho: &DensityOperator) -> f64 {
    let m = rho.matrix();
    (*m * *m).trace().re
}

// Eigenvalues of a Hermitian PSD matrix with round-off set to 0.
fn clamped_spectrum(m: &ComplexMatrix, what: &'static str) -> Result<Vec<f64>> {
    let values = hermitian_eigenvalues(&m.hermitian_part())?;
    let floor = eigenvalue_floor(&values);
    values
        .into_iter()
        .map(|l| {
            if l < -CLAMP_TOL {
                Err(MetricsError::OutOfRange { what, value: l })
            } else if l <= floor {
                Ok(0.0)
            } else {
                Ok(l)
            }
        })
        .collect()
}

fn clamp_unit(value: f64, what: &'static str) -> Result<f64> {
    if !(-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&value) {
        return Err(MetricsError::OutOfRange { what, value });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Uhlmann fidelity `Tr √(√ρ₁ ρ₂ √ρ₁)`.
pub fn fidelity(rho_ideal: &DensityOperator, rho: &DensityOperator) -> Result<f64> {
    if rho_ideal.dim() != rho.dim() {
        return Err(MetricsError::DimMismatch {
            left: rho_ideal.dim(),
            right: rho.dim(),
        });
    }
    let s = sqrt_psd(&rho_ideal.matrix().hermitian_part())?;
    let inner = s * *rho.matrix() * s;
    let f: f64 = clamped_spectrum(&inner, "fidelity spectrum")?
        .iter()
        .map(|l| l.sqrt())
        .sum();
    clamp_unit(f, "fidelity")
}

/// `−Σ λ log₂ λ` over eigenvalues above 1e-14.
pub fn vn_entropy(rho: &DensityOperator) -> Result<f64> {
    let s: f64 = clamped_spectrum(rho.matrix(), "density eigenvalue")?
        .into_iter()
        .filter(|&l| l > 1e-14)
        .map(|l| -l * l.log2())
        .sum();
    Ok(s.max(0.0))
}

/// `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`, conjugation in the computational basis.
pub fn spin_flip(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.dim() != 4 {
        return Err(MetricsError::WrongDim {
            expected: 4,
            got: rho.dim(),
        });
    }
    let yy = kron(&sigma_y(), &sigma_y())?;
    Ok(yy * rho.conj() * yy)
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`, with `λᵢ` the
/// decreasing square roots of the spectrum of `√ρ ρ̃ √ρ`.
pub fn concurrence(rho: &DensityOperator) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(MetricsError::WrongDim {
            expected: 4,
            got: rho.dim(),
        });
    }
    let s = sqrt_psd(&rho.matrix().hermitian_part())?;
    let r = s * spin_flip(rho.matrix())? * s;
    let mut lambdas: Vec<f64> = clamped_spectrum(&r, "spin-flip spectrum")?
        .iter()
        .map(|m| m.sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let c = lambdas[0] - lambdas[1..].iter().sum::<f64>();
    clamp_unit(c.max(0.0), "concurrence")
}
