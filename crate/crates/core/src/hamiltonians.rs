//! Single-trap and coupled-trap Hamiltonians (ħ = 1).
//!
//! Qubit basis: `|0⟩ ≡ |p_x⟩ = (1, 0)ᵀ`, `|1⟩ ≡ |p_y⟩ = (0, 1)ᵀ`. Two-qubit
//! index is `2a + b` with qubit 1 (control) as the left Kronecker factor.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{identity2, kron, sigma_x, sigma_y, sigma_z, Complex, ComplexMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HamiltonianError {
    #[error("drive norm is zero; the rotation axis is undefined")]
    ZeroDrive,
    #[error("non-finite parameter `{0}`")]
    NonFinite(&'static str),
}

/// Trap splitting and auxiliary-laser drive components for one trap.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TrapConfig {
    /// Δε = E_x − E_y; either sign.
    pub delta_eps: f64,
    pub px: f64,
    pub py: f64,
}

impl TrapConfig {
    pub fn new(delta_eps: f64, px: f64, py: f64) -> Self {
        Self { delta_eps, px, py }
    }

    /// Undriven trap with splitting `delta_eps`.
    pub fn undriven(delta_eps: f64) -> Self {
        Self {
            delta_eps,
            px: 0.0,
            py: 0.0,
        }
    }
}

/// Auxiliary-laser pulse: amplitude 𝒫₀, phase θ, trap splitting Δε and
/// duration τ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseParams {
    pub p0: f64,
    pub theta: f64,
    pub delta_eps: f64,
    pub tau: f64,
}

impl PulseParams {
    /// Pulse from the rotation norm 𝒫 and Bloch angles, with
    /// `𝒫₀ = 𝒫 sin φ` and `Δε = 2𝒫 cos φ` so that `φ = arccos(Δε / 2𝒫)`.
    pub fn from_angles(p_norm: f64, theta: f64, phi: f64, tau: f64) -> Self {
        Self {
            p0: p_norm * phi.sin(),
            theta,
            delta_eps: 2.0 * p_norm * phi.cos(),
            tau,
        }
    }

    /// The Hadamard pulse at 𝒫 = 1: θ = 0, φ = π/4, 𝒫τ = π/2.
    pub fn hadamard() -> Self {
        Self::from_angles(
            1.0,
            0.0,
            std::f64::consts::FRAC_PI_4,
            std::f64::consts::FRAC_PI_2,
        )
    }

    /// 𝒫 = √(𝒫₀² + Δε²/4).
    pub fn p_norm(&self) -> f64 {
        self.p0.hypot(self.delta_eps / 2.0)
    }

    /// φ = arccos(Δε / 2𝒫) ∈ [0, π]. NaN when 𝒫 = 0.
    pub fn phi(&self) -> f64 {
        (self.delta_eps / (2.0 * self.p_norm()))
            .clamp(-1.0, 1.0)
            .acos()
    }

    pub fn trap(&self) -> TrapConfig {
        TrapConfig {
            delta_eps: self.delta_eps,
            px: self.p0 * self.theta.cos(),
            py: self.p0 * self.theta.sin(),
        }
    }

    fn validate(&self) -> Result<(), HamiltonianError> {
        for (name, v) in [
            ("p0", self.p0),
            ("theta", self.theta),
            ("delta_eps", self.delta_eps),
            ("tau", self.tau),
        ] {
            if !v.is_finite() {
                return Err(HamiltonianError::NonFinite(name));
            }
        }
        Ok(())
    }
}

/// Inter-trap couplings `J_x, J_y, J_z`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CouplingConfig {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
}

impl CouplingConfig {
    pub fn new(jx: f64, jy: f64, jz: f64) -> Self {
        Self { jx, jy, jz }
    }

    pub fn ising(j12: f64) -> Self {
        Self {
            jx: 0.0,
            jy: 0.0,
            jz: j12,
        }
    }

    pub fn xy(j12: f64) -> Self {
        Self {
            jx: j12,
            jy: j12,
            jz: 0.0,
        }
    }
}

fn real(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// `𝒫_x σ_x + 𝒫_y σ_y + (Δε/2) σ_z`.
pub fn single_qubit_h(cfg: &TrapConfig) -> ComplexMatrix {
    let d = real(cfg.delta_eps / 2.0);
    let off = Complex::new(cfg.px, -cfg.py);
    ComplexMatrix::from_rows2([[d, off], [off.conj(), -d]])
}

/// Unit rotation axis `n̂ = (sin φ cos θ, sin φ sin θ, cos φ)` and norm 𝒫.
pub fn pulse_axis(p: &PulseParams) -> Result<([f64; 3], f64), HamiltonianError> {
    p.validate()?;
    let norm = p.p_norm();
    if norm == 0.0 {
        return Err(HamiltonianError::ZeroDrive);
    }
    let phi = p.phi();
    let (st, ct) = p.theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Ok(([sp * ct, sp * st, cp], norm))
}

/// `𝒫 σ·n̂` for the given pulse.
pub fn pulse_hamiltonian(p: &PulseParams) -> Result<ComplexMatrix, HamiltonianError> {
    let (n, norm) = pulse_axis(p)?;
    Ok(
        (sigma_x().scale_real(n[0]) + sigma_y().scale_real(n[1]) + sigma_z().scale_real(n[2]))
            .scale_real(norm),
    )
}

/// Rewrites `h` in the OAM basis `{|↻⟩, |↺⟩}`, where
/// `|p_x⟩ = (|↻⟩ + |↺⟩)/√2` and `|p_y⟩ = (|↻⟩ − |↺⟩)/√2`.
pub fn to_oam_basis(h: &ComplexMatrix) -> ComplexMatrix {
    let s = real(FRAC_1_SQRT_2);
    let t = ComplexMatrix::from_rows2([[s, s], [s, -s]]);
    t.adjoint() * *h * t
}

/// `Σ_k J_k σ_k ⊗ σ_k`.
pub fn interaction_h(c: &CouplingConfig) -> ComplexMatrix {
    let xx = kron(&sigma_x(), &sigma_x()).expect("2×2 factors");
    let yy = kron(&sigma_y(), &sigma_y()).expect("2×2 factors");
    let zz = kron(&sigma_z(), &sigma_z()).expect("2×2 factors");
    xx.scale_real(c.jx) + yy.scale_real(c.jy) + zz.scale_real(c.jz)
}

/// Two coupled traps: `h₁ ⊗ 𝟙 + 𝟙 ⊗ h₂ + H_int`.
pub fn two_qubit_h(t1: &TrapConfig, t2: &TrapConfig, c: &CouplingConfig) -> ComplexMatrix {
    let id = identity2();
    kron(&single_qubit_h(t1), &id).expect("2×2 factors")
        + kron(&id, &single_qubit_h(t2)).expect("2×2 factors")
        + interaction_h(c)
}

/// Ising coupling with both traps at `Δε = −2J₁₂` and optional residual drive
/// `(𝒫_x, 𝒫_y)` on each trap. With zero drive this is
/// `J₁₂(σ_z⊗σ_z − σ_z⊗𝟙 − 𝟙⊗σ_z)`.
pub fn cphase_hamiltonian(j12: f64, residual_drive: [f64; 2]) -> ComplexMatrix {
    let trap = TrapConfig::new(-2.0 * j12, residual_drive[0], residual_drive[1]);
    two_qubit_h(&trap, &trap, &CouplingConfig::ising(j12))
}

/// XY coupling with zero-eccentricity traps.
pub fn iswap_hamiltonian(j12: f64, residual_drive: [f64; 2]) -> ComplexMatrix {
    let trap = TrapConfig::new(0.0, residual_drive[0], residual_drive[1]);
    two_qubit_h(&trap, &trap, &CouplingConfig::xy(j12))
}
