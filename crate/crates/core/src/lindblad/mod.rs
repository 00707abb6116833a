//! Density-operator dynamics under the Lindblad master equation
//!
//! ```text
//! dρ/dt = −i[H, ρ] + γ_r ℒ[σ₋]ρ + γ_d ℒ[σ_z]ρ,   ℒ[A]ρ = AρA† − ½{A†A, ρ}
//! ```
//!
//! integrated with fixed-step classical RK4. For two qubits each channel acts
//! on both traps with the same rate. [`superop`] holds an independent
//! Liouvillian-exponential propagator used to cross-check the integrator.

pub mod superop;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gates::PureState;
use crate::linalg::{
    hermitian_eigenvalues, identity2, kron, sigma_x, sigma_y, sigma_z, Complex, ComplexMatrix,
    LinalgError,
};

pub use superop::{superoperator_oracle, Liouvillian};

/// Trace and Hermiticity tolerance for [`DensityOperator::new`].
pub const STATE_TOL: f64 = 1e-10;
/// Trace and Hermiticity tolerance re-checked at every trajectory sample.
pub const SAMPLE_TOL: f64 = 1e-9;
/// Most negative eigenvalue tolerated in a density operator.
pub const POSITIVITY_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LindbladError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("Hamiltonian is not Hermitian")]
    NonHermitianHamiltonian,
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("invalid decoherence rates: {0}")]
    BadRates(String),
    #[error("invalid integrator settings: {0}")]
    BadIntegrator(String),
    #[error("not a density operator: {0}")]
    InvalidState(String),
    #[error("{invariant} violated at step {step} (value {value:.3e})")]
    InvariantViolation {
        invariant: &'static str,
        step: usize,
        value: f64,
    },
}

pub type Result<T> = std::result::Result<T, LindbladError>;

/// Hermitian, unit-trace, positive semidefinite operator on one or two qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, STATE_TOL)
    }

    /// Validates with trace/Hermiticity tolerance `tol` and the fixed
    /// positivity tolerance.
    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if let Some((what, value)) = check_state(&matrix, tol)? {
            return Err(LindbladError::InvalidState(format!(
                "{what} (value {value:.3e})"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            matrix: psi.projector(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let m = ComplexMatrix::identity(dim)?.scale_real(1.0 / dim as f64);
        Ok(Self { matrix: m })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `UρU†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        let m = u.matmul(&self.matrix)?.matmul(&u.adjoint())?;
        Self::with_tolerance(m, SAMPLE_TOL)
    }
}

// Returns the first violated invariant with its measured value.
fn check_state(m: &ComplexMatrix, tol: f64) -> Result<Option<(&'static str, f64)>> {
    let herm = m.hermiticity_defect();
    if !(herm <= tol) {
        return Ok(Some(("hermiticity", herm)));
    }
    let trace_err = (m.trace() - Complex::new(1.0, 0.0)).norm();
    if !(trace_err <= tol) {
        return Ok(Some(("trace", trace_err)));
    }
    let min_eig = hermitian_eigenvalues(&m.hermitian_part())?[0];
    if min_eig < -POSITIVITY_TOL {
        return Ok(Some(("positivity", min_eig)));
    }
    Ok(None)
}

/// Spontaneous-relaxation rate `γ_r` and pure-dephasing rate `γ_d`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DecoherenceRates {
    pub gamma_r: f64,
    pub gamma_d: f64,
}

impl DecoherenceRates {
    pub fn new(gamma_r: f64, gamma_d: f64) -> Self {
        Self { gamma_r, gamma_d }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("gamma_r", self.gamma_r), ("gamma_d", self.gamma_d)] {
            if !v.is_finite() || v < 0.0 {
                return Err(LindbladError::BadRates(format!("{name} = {v}")));
            }
        }
        Ok(())
    }
}

/// Normalization of the lowering operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LoweringConvention {
    /// `σ₋ = σ_x − iσ_y`, matrix elements of magnitude 2.
    Paper,
    /// `σ₋ = (σ_x − iσ_y)/2`. Default: this normalization reproduces the
    /// reported relaxation-channel figures.
    #[default]
    Conventional,
}

impl std::str::FromStr for LoweringConvention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(Self::Paper),
            "conventional" => Ok(Self::Conventional),
            other => Err(format!("unknown lowering convention `{other}`")),
        }
    }
}

/// `σ₋ = σ_x − iσ_y = [[0, 0], [2, 0]]`, taking `|0⟩ → 2|1⟩`.
pub fn lowering_operator() -> ComplexMatrix {
    sigma_x() - sigma_y().scale(Complex::new(0.0, 1.0))
}

pub fn lowering_operator_for(convention: LoweringConvention) -> ComplexMatrix {
    match convention {
        LoweringConvention::Paper => lowering_operator(),
        LoweringConvention::Conventional => lowering_operator().scale_real(0.5),
    }
}

/// `ℒ[A]ρ = AρA† − ½{A†A, ρ}`.
pub fn dissipator(a: &ComplexMatrix, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim() != rho.dim() {
        return Err(LindbladError::DimMismatch {
            left: a.dim(),
            right: rho.dim(),
        });
    }
    let ad = a.adjoint();
    let ada = ad * *a;
    Ok(*a * *rho * ad - (ada * *rho + *rho * ada).scale_real(0.5))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateTag {
    Relaxation,
    Dephasing,
}

/// `σ₋⊗𝟙`, `𝟙⊗σ₋` (relaxation) and `σ_z⊗𝟙`, `𝟙⊗σ_z` (dephasing).
pub fn two_qubit_collapse_ops(convention: LoweringConvention) -> Vec<(ComplexMatrix, RateTag)> {
    let id = identity2();
    let lower = lowering_operator_for(convention);
    let k = |a: &ComplexMatrix, b: &ComplexMatrix| kron(a, b).expect("2×2 factors");
    vec![
        (k(&lower, &id), RateTag::Relaxation),
        (k(&id, &lower), RateTag::Relaxation),
        (k(&sigma_z(), &id), RateTag::Dephasing),
        (k(&id, &sigma_z()), RateTag::Dephasing),
    ]
}

/// Collapse operators for a register of dimension 2 or 4.
pub fn collapse_ops(
    dim: usize,
    convention: LoweringConvention,
) -> Result<Vec<(ComplexMatrix, RateTag)>> {
    match dim {
        2 => Ok(vec![
            (lowering_operator_for(convention), RateTag::Relaxation),
            (sigma_z(), RateTag::Dephasing),
        ]),
        4 => Ok(two_qubit_collapse_ops(convention)),
        d => Err(LinalgError::UnsupportedDim(d).into()),
    }
}

/// Fixed-step integration settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorSettings {
    pub dt: f64,
    pub sample_every: usize,
}

impl IntegratorSettings {
    pub const DEFAULT_STEPS: usize = 2000;

    /// `dt = t_final / 2000`, every step sampled.
    pub fn for_duration(t_final: f64) -> Self {
        Self {
            dt: t_final / Self::DEFAULT_STEPS as f64,
            sample_every: 1,
        }
    }
}

/// Time-ordered samples of ρ(t).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityOperator>,
    pub label: String,
}

impl Trajectory {
    pub fn final_state(&self) -> &DensityOperator {
        self.states
            .last()
            .expect("trajectory always holds the initial state")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("non-empty")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Generator of the master equation for a fixed Hamiltonian and rates.
#[derive(Debug, Clone)]
pub struct MasterEquation {
    hamiltonian: ComplexMatrix,
    rates: DecoherenceRates,
    convention: LoweringConvention,
    // (A, γ) for channels with non-zero rate.
    channels: Vec<(ComplexMatrix, f64)>,
    // Sparse forms used by `rhs`: −i·H_eff with H_eff = H − (i/2) Σ γ A†A,
    // and Σ γ A ρ A† split into an
    // elementwise weight for diagonal A and entry lists for the rest.
    minus_i_h_eff: SparseEntries,
    diagonal_weight: Option<[Complex; 16]>,
    jump_terms: Vec<(SparseEntries, f64)>,
}

type SparseEntries = Vec<(usize, usize, Complex)>;

fn nonzeros(m: &ComplexMatrix) -> SparseEntries {
    let n = m.dim();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, m.get(i, j)))
        .filter(|(_, _, z)| *z != Complex::new(0.0, 0.0))
        .collect()
}

fn is_diagonal(m: &ComplexMatrix) -> bool {
    nonzeros(m).iter().all(|(i, j, _)| i == j)
}

impl MasterEquation {
    pub fn new(
        h: ComplexMatrix,
        rates: DecoherenceRates,
        convention: LoweringConvention,
    ) -> Result<Self> {
        rates.validate()?;
        if !h.is_hermitian(crate::linalg::HERMITIAN_TOL * h.frobenius_norm().max(1.0)) {
            return Err(LindbladError::NonHermitianHamiltonian);
        }
        let channels: Vec<(ComplexMatrix, f64)> = collapse_ops(h.dim(), convention)?
            .into_iter()
            .map(|(a, tag)| {
                let g = match tag {
                    RateTag::Relaxation => rates.gamma_r,
                    RateTag::Dephasing => rates.gamma_d,
                };
                (a, g)
            })
            .filter(|(_, g)| *g > 0.0)
            .collect();
        let mut h_eff = h;
        for (a, g) in &channels {
            h_eff = h_eff - (a.adjoint() * *a).scale(Complex::new(0.0, 0.5 * g));
        }
        let n = h.dim();
        let mut diagonal_weight = None;
        let mut jump_terms = Vec::new();
        for (a, g) in &channels {
            if is_diagonal(a) {
                let w = diagonal_weight.get_or_insert([Complex::new(0.0, 0.0); 16]);
                for i in 0..n {
                    for j in 0..n {
                        w[i * n + j] += a.get(i, i) * a.get(j, j).conj() * *g;
                    }
                }
            } else {
                jump_terms.push((nonzeros(a), *g));
            }
        }
        Ok(Self {
            hamiltonian: h,
            rates,
            convention,
            channels,
            minus_i_h_eff: nonzeros(&h_eff.scale(Complex::new(0.0, -1.0))),
            diagonal_weight,
            jump_terms,
        })
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn rates(&self) -> DecoherenceRates {
        self.rates
    }

    pub fn convention(&self) -> LoweringConvention {
        self.convention
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    /// dρ/dt at `rho`.
    ///
    /// `−i(H_eff ρ − ρ H_eff†) + Σ γ A ρ A†`, which equals the Lindblad form
    /// with `H_eff = H − (i/2) Σ γ A†A`.
    pub fn rhs(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let n = rho.dim();
        let r = rho.raw();
        let mut out = ComplexMatrix::zeros(n).expect("dim checked at construction");
        let o = out.raw_mut();
        // (−iH_eff) ρ + ρ (−iH_eff)†, using (−iH_eff)†_{kj} = conj((−iH_eff)_{jk}).
        for &(i, k, h) in &self.minus_i_h_eff {
            let hc = h.conj();
            for j in 0..n {
                o[i * n + j] += h * r[k * n + j];
                o[j * n + i] += r[j * n + k] * hc;
            }
        }
        if let Some(w) = &self.diagonal_weight {
            for idx in 0..n * n {
                o[idx] += w[idx] * r[idx];
            }
        }
        for (entries, g) in &self.jump_terms {
            for &(i, k, a) in entries {
                let ga = a * *g;
                for &(j, l, b) in entries {
                    o[i * n + j] += ga * r[k * n + l] * b.conj();
                }
            }
        }
        out
    }

    fn rk4_step(&self, rho: &ComplexMatrix, dt: f64) -> ComplexMatrix {
        let k1 = self.rhs(rho);
        let k2 = self.rhs(&(*rho + k1.scale_real(dt / 2.0)));
        let k3 = self.rhs(&(*rho + k2.scale_real(dt / 2.0)));
        let k4 = self.rhs(&(*rho + k3.scale_real(dt)));
        *rho + (k1 + k2.scale_real(2.0) + k3.scale_real(2.0) + k4).scale_real(dt / 6.0)
    }

    /// Integrates from `rho0` over `[0, t_final]`.
    ///
    /// The step is shrunk so an integer number of steps lands exactly on
    /// `t_final`. States are recorded every `sample_every` steps, always
    /// including `t = 0` and `t = t_final`, and each recorded state is checked
    /// for trace, Hermiticity and positivity.
    pub fn evolve(
        &self,
        rho0: &DensityOperator,
        t_final: f64,
        settings: IntegratorSettings,
    ) -> Result<Trajectory> {
        if rho0.dim() != self.dim() {
            return Err(LindbladError::DimMismatch {
                left: self.dim(),
                right: rho0.dim(),
            });
        }
        let IntegratorSettings { dt, sample_every } = settings;
        if !(t_final >= 0.0) || !t_final.is_finite() {
            return Err(LindbladError::BadIntegrator(format!("t_final = {t_final}")));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(LindbladError::BadIntegrator(format!("dt = {dt}")));
        }
        if sample_every == 0 {
            return Err(LindbladError::BadIntegrator(
                "sample_every must be ≥ 1".into(),
            ));
        }

        let n_steps = if t_final == 0.0 {
            0
        } else {
            ((t_final / dt) - 1e-9).ceil().max(1.0) as usize
        };
        let h = if n_steps == 0 {
            0.0
        } else {
            t_final / n_steps as f64
        };

        let capacity = n_steps / sample_every + 2;
        let mut times = Vec::with_capacity(capacity);
        let mut states = Vec::with_capacity(capacity);
        times.push(0.0);
        states.push(*rho0);

        let mut rho = *rho0.matrix();
        for step in 1..=n_steps {
            rho = self.rk4_step(&rho, h);
            if step % sample_every == 0 || step == n_steps {
                if let Some((invariant, value)) = check_state(&rho, SAMPLE_TOL)? {
                    return Err(LindbladError::InvariantViolation {
                        invariant,
                        step,
                        value,
                    });
                }
                times.push(if step == n_steps {
                    t_final
                } else {
                    step as f64 * h
                });
                states.push(DensityOperator { matrix: rho });
            }
        }
        Ok(Trajectory {
            times,
            states,
            label: "lindblad-rk4".into(),
        })
    }

    pub fn liouvillian(&self) -> Liouvillian {
        let ops: Vec<(ComplexMatrix, f64)> = self.channels.clone();
        Liouvillian::new(&self.hamiltonian, &ops)
    }
}

/// RK4 evolution with the default lowering convention.
pub fn evolve(
    h: &ComplexMatrix,
    rho0: &DensityOperator,
    rates: DecoherenceRates,
    t_final: f64,
    dt: f64,
    sample_every: usize,
) -> Result<Trajectory> {
    MasterEquation::new(*h, rates, LoweringConvention::default())?.evolve(
        rho0,
        t_final,
        IntegratorSettings { dt, sample_every },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{cphase_unitary, golden, PureState};
    use crate::hamiltonians::{cphase_hamiltonian, pulse_hamiltonian, PulseParams};
    use crate::linalg::identity4;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn lowering_operator_matrix() {
        let s = lowering_operator();
        let expected =
            ComplexMatrix::from_rows2([[c(0.0, 0.0), c(0.0, 0.0)], [c(2.0, 0.0), c(0.0, 0.0)]]);
        assert_eq!(s, expected);
        let down = s.apply(PureState::zero().amplitudes()).unwrap();
        assert_eq!(down, vec![c(0.0, 0.0), c(2.0, 0.0)]);
        let gone = s.apply(PureState::one().amplitudes()).unwrap();
        assert_eq!(gone, vec![c(0.0, 0.0); 2]);
        assert_eq!(
            s.adjoint() * s,
            ComplexMatrix::from_real_diag(&[4.0, 0.0]).unwrap()
        );
        assert_eq!(
            lowering_operator_for(LoweringConvention::Conventional)[(1, 0)],
            c(1.0, 0.0)
        );
    }

    #[test]
    fn dissipator_examples() {
        let pop = ComplexMatrix::from_real_diag(&[1.0, 0.0]).unwrap();
        assert_eq!(
            dissipator(&sigma_z(), &pop).unwrap(),
            ComplexMatrix::zeros(2).unwrap()
        );

        let half = c(0.5, 0.0);
        let coh = ComplexMatrix::from_rows2([[half, half], [half, half]]);
        let d = dissipator(&sigma_z(), &coh).unwrap();
        let expected =
            ComplexMatrix::from_rows2([[c(0.0, 0.0), c(-1.0, 0.0)], [c(-1.0, 0.0), c(0.0, 0.0)]]);
        assert!((d - expected).frobenius_norm() < 1e-15);

        assert!(matches!(
            dissipator(&sigma_z(), &identity4()),
            Err(LindbladError::DimMismatch { left: 2, right: 4 })
        ));
    }

    #[test]
    fn two_qubit_ops_act_on_basis() {
        let ops = two_qubit_collapse_ops(LoweringConvention::Paper);
        assert_eq!(ops.len(), 4);
        // σ₋⊗𝟙 lowers the control: |0b⟩ → 2|1b⟩.
        let out = ops[0]
            .0
            .apply(PureState::basis(4, 1).unwrap().amplitudes())
            .unwrap();
        assert_eq!(out[3], c(2.0, 0.0));
        assert_eq!(out.iter().filter(|z| z.norm() > 0.0).count(), 1);
        // 𝟙⊗σ₋ lowers the target: |a0⟩ → 2|a1⟩.
        let out = ops[1]
            .0
            .apply(PureState::basis(4, 2).unwrap().amplitudes())
            .unwrap();
        assert_eq!(out[3], c(2.0, 0.0));
        let h = cphase_hamiltonian(1.0, [0.0, 0.0]);
        for (op, tag) in &ops[2..] {
            assert_eq!(*tag, RateTag::Dephasing);
            assert!(op.commutator(&h).unwrap().frobenius_norm() < 1e-15);
        }
    }

    #[test]
    fn state_validation() {
        assert!(DensityOperator::new(identity4()).is_err());
        assert!(
            DensityOperator::new(ComplexMatrix::from_real_diag(&[1.5, -0.5]).unwrap()).is_err()
        );
        assert!(DensityOperator::maximally_mixed(4).is_ok());
        let skew =
            ComplexMatrix::from_rows2([[c(1.0, 0.0), c(0.1, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]);
        assert!(DensityOperator::new(skew).is_err());
    }

    #[test]
    fn zero_rate_matches_unitary() {
        let h = pulse_hamiltonian(&PulseParams::hadamard()).unwrap();
        let rho0 = DensityOperator::from_pure(&PureState::zero());
        let traj = evolve(
            &h,
            &rho0,
            DecoherenceRates::default(),
            FRAC_PI_2,
            FRAC_PI_2 / 2000.0,
            100,
        )
        .unwrap();
        let exact = rho0.conjugate_by(&golden::hadamard_pulse()).unwrap();
        assert!((*traj.final_state().matrix() - *exact.matrix()).frobenius_norm() < 1e-8);
        assert_eq!(traj.times.len(), 21);
        assert_eq!(traj.times[0], 0.0);
        assert_eq!(traj.final_time(), FRAC_PI_2);
        assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(traj.states[0], rho0);
    }

    #[test]
    fn zero_rate_two_qubit_matches_cphase() {
        let h = cphase_hamiltonian(1.0, [0.0, 0.0]);
        let psi = PureState::product(&PureState::clockwise(), &PureState::anticlockwise()).unwrap();
        let rho0 = DensityOperator::from_pure(&psi);
        let traj = evolve(
            &h,
            &rho0,
            DecoherenceRates::default(),
            FRAC_PI_4,
            FRAC_PI_4 / 2000.0,
            2000,
        )
        .unwrap();
        let exact = rho0.conjugate_by(&cphase_unitary(FRAC_PI_4)).unwrap();
        assert!((*traj.final_state().matrix() - *exact.matrix()).frobenius_norm() < 1e-8);
        assert_eq!(traj.len(), 2);
    }

    #[test]
    fn dephasing_leaves_diagonal_populations() {
        let h = ComplexMatrix::from_real_diag(&[0.3, -0.3]).unwrap();
        let psi = PureState::normalized(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let rho0 = DensityOperator::from_pure(&psi);
        let traj = evolve(&h, &rho0, DecoherenceRates::new(0.0, 0.35), 2.0, 1e-3, 50).unwrap();
        for s in &traj.states {
            assert!((s.matrix()[(0, 0)] - rho0.matrix()[(0, 0)]).norm() < 1e-12);
            assert!((s.matrix()[(1, 1)] - rho0.matrix()[(1, 1)]).norm() < 1e-12);
        }
        // Coherence decays as e^{−2γt}.
        let coh = traj.final_state().matrix()[(0, 1)].norm();
        let want = rho0.matrix()[(0, 1)].norm() * (-2.0 * 0.35 * 2.0f64).exp();
        assert!((coh - want).abs() < 1e-10);
    }

    #[test]
    fn evolve_rejects_bad_settings() {
        let h = sigma_x();
        let rho0 = DensityOperator::from_pure(&PureState::zero());
        let rates = DecoherenceRates::default();
        assert!(matches!(
            evolve(&h, &rho0, rates, 1.0, 0.0, 1),
            Err(LindbladError::BadIntegrator(_))
        ));
        assert!(matches!(
            evolve(&h, &rho0, rates, -1.0, 0.1, 1),
            Err(LindbladError::BadIntegrator(_))
        ));
        assert!(matches!(
            evolve(&h, &rho0, rates, 1.0, 0.1, 0),
            Err(LindbladError::BadIntegrator(_))
        ));
        assert!(matches!(
            evolve(&h, &rho0, DecoherenceRates::new(-0.1, 0.0), 1.0, 0.1, 1),
            Err(LindbladError::BadRates(_))
        ));
        let bad_h =
            ComplexMatrix::from_rows2([[c(0.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]);
        assert!(matches!(
            evolve(&bad_h, &rho0, rates, 1.0, 0.1, 1),
            Err(LindbladError::NonHermitianHamiltonian)
        ));
        assert!(matches!(
            evolve(&identity4(), &rho0, rates, 1.0, 0.1, 1),
            Err(LindbladError::DimMismatch { .. })
        ));
    }

    #[test]
    fn zero_duration_returns_initial_state() {
        let rho0 = DensityOperator::from_pure(&PureState::one());
        let traj = evolve(
            &sigma_x(),
            &rho0,
            DecoherenceRates::new(0.2, 0.2),
            0.0,
            0.1,
            1,
        )
        .unwrap();
        assert_eq!(traj.times, vec![0.0]);
        assert_eq!(traj.states, vec![rho0]);
    }

    #[test]
    fn unstable_step_reports_invariant_and_step() {
        // dt far beyond RK4's stability region for this generator.
        let h = sigma_x().scale_real(50.0);
        let rho0 = DensityOperator::from_pure(&PureState::zero());
        let err = evolve(&h, &rho0, DecoherenceRates::new(5.0, 5.0), 10.0, 1.0, 1).unwrap_err();
        match err {
            LindbladError::InvariantViolation { step, .. } => assert!(step >= 1),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
