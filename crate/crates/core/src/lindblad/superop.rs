//! Liouvillian superoperator on column-stacked density matrices and its
//! exponential. Shares no code path with the RK4 integrator beyond the
//! collapse operators themselves.
//!
//! With `vec(AXB) = (Bᵀ ⊗ A) vec(X)`:
//!
//! ```text
//! −i[H, ρ]   →  −i(𝟙 ⊗ H − Hᵀ ⊗ 𝟙)
//! AρA†       →  A* ⊗ A
//! −½{A†A, ρ} →  −½(𝟙 ⊗ A†A + (A†A)ᵀ ⊗ 𝟙)
//! ```

use super::{
    DecoherenceRates, DensityOperator, LindbladError, LoweringConvention, MasterEquation, Result,
};
use crate::linalg::{Complex, ComplexMatrix};

/// Dense square matrix of side up to 16.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    n: usize,
    data: Vec<Complex>,
}

fn zero() -> Complex {
    Complex::new(0.0, 0.0)
}

impl Liouvillian {
    fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![zero(); n * n],
        }
    }

    fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex::new(1.0, 0.0);
        }
        m
    }

    /// General Kronecker product `a ⊗ b` of two d×d matrices.
    fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Self {
        let d = a.dim();
        let n = d * d;
        let mut m = Self::zeros(n);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        m.data[(d * i + k) * n + d * j + l] = a.get(i, j) * b.get(k, l);
                    }
                }
            }
        }
        m
    }

    fn axpy(&mut self, s: Complex, other: &Self) {
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += s * y;
        }
    }

    fn matmul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    fn norm_1(&self) -> f64 {
        (0..self.n)
            .map(|j| {
                (0..self.n)
                    .map(|i| self.data[i * self.n + j].norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Builds `L` for Hamiltonian `h` and channels `(A, γ)`.
    pub fn new(h: &ComplexMatrix, channels: &[(ComplexMatrix, f64)]) -> Self {
        let d = h.dim();
        let id = ComplexMatrix::identity(d).expect("dim 2 or 4");
        let mut l = Self::zeros(d * d);
        let minus_i = Complex::new(0.0, -1.0);
        l.axpy(minus_i, &Self::kron(&id, h));
        l.axpy(-minus_i, &Self::kron(&h.transpose(), &id));
        for (a, g) in channels {
            let g = Complex::new(*g, 0.0);
            let ada = a.adjoint() * *a;
            l.axpy(g, &Self::kron(&a.conj(), a));
            l.axpy(g * -0.5, &Self::kron(&id, &ada));
            l.axpy(g * -0.5, &Self::kron(&ada.transpose(), &id));
        }
        l
    }

    pub fn side(&self) -> usize {
        self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex {
        self.data[row * self.n + col]
    }

    pub fn apply(&self, v: &[Complex]) -> Vec<Complex> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum())
            .collect()
    }

    /// `exp(L·t)` by scaling and squaring with a truncated Taylor series.
    pub fn exp_scaled(&self, t: f64) -> Self {
        let n = self.n;
        let mut a = self.clone();
        a.data.iter_mut().for_each(|z| *z *= t);
        let norm = a.norm_1();
        let mut squarings = 0u32;
        if norm > 0.5 {
            squarings = (norm / 0.5).log2().ceil() as u32;
        }
        let scale = 0.5f64.powi(squarings as i32);
        a.data.iter_mut().for_each(|z| *z *= scale);

        let mut result = Self::identity(n);
        let mut term = Self::identity(n);
        for k in 1..=40 {
            term = term.matmul(&a);
            term.data.iter_mut().for_each(|z| *z /= k as f64);
            result.axpy(Complex::new(1.0, 0.0), &term);
            if term.norm_1() < 1e-18 {
                break;
            }
        }
        for _ in 0..squarings {
            result = result.matmul(&result);
        }
        result
    }
}

/// Column-stacking `vec(ρ)`.
pub fn vectorize(m: &ComplexMatrix) -> Vec<Complex> {
    let d = m.dim();
    (0..d)
        .flat_map(|j| (0..d).map(move |i| m.get(i, j)))
        .collect()
}

pub fn devectorize(v: &[Complex], dim: usize) -> std::result::Result<ComplexMatrix, LindbladError> {
    let mut m = ComplexMatrix::zeros(dim)?;
    for j in 0..dim {
        for i in 0..dim {
            m[(i, j)] = v[j * dim + i];
        }
    }
    Ok(m)
}

impl MasterEquation {
    /// `ρ(t) = unvec(exp(L t) vec(ρ₀))`.
    pub fn propagate_exact(&self, rho0: &DensityOperator, t: f64) -> Result<DensityOperator> {
        if rho0.dim() != self.dim() {
            return Err(LindbladError::DimMismatch {
                left: self.dim(),
                right: rho0.dim(),
            });
        }
        if !(t >= 0.0) || !t.is_finite() {
            return Err(LindbladError::BadIntegrator(format!("t = {t}")));
        }
        let v = self
            .liouvillian()
            .exp_scaled(t)
            .apply(&vectorize(rho0.matrix()));
        DensityOperator::with_tolerance(devectorize(&v, rho0.dim())?, super::SAMPLE_TOL)
    }
}

/// Superoperator-exponential propagation with the default lowering
/// convention.
pub fn superoperator_oracle(
    h: &ComplexMatrix,
    rates: DecoherenceRates,
    t: f64,
    rho0: &DensityOperator,
) -> Result<DensityOperator> {
    MasterEquation::new(*h, rates, LoweringConvention::default())?.propagate_exact(rho0, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{golden, PureState};
    use crate::linalg::{expm_hermitian_scaled, sigma_x, sigma_y, sigma_z};
    use crate::lindblad::dissipator;

    fn random_like(seed: u64) -> ComplexMatrix {
        // Small deterministic generator; full random coverage lives in tests/.
        let mut s = seed;
        let mut next = || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let entries: Vec<Complex> = (0..4).map(|_| Complex::new(next(), next())).collect();
        ComplexMatrix::from_row_major(2, &entries).unwrap()
    }

    #[test]
    fn liouvillian_matches_matrix_form() {
        let h = sigma_x().scale_real(0.4) + sigma_z().scale_real(-0.3);
        let a = random_like(7);
        let rho = random_like(11).hermitian_part();
        let l = Liouvillian::new(&h, &[(a, 0.7)]);
        let via_l = devectorize(&l.apply(&vectorize(&rho)), 2).unwrap();
        let minus_i = Complex::new(0.0, -1.0);
        let direct = h.commutator(&rho).unwrap().scale(minus_i)
            + dissipator(&a, &rho).unwrap().scale_real(0.7);
        assert!((via_l - direct).frobenius_norm() < 1e-14);
    }

    #[test]
    fn exp_of_hamiltonian_part_is_conjugation() {
        let h = sigma_y().scale_real(1.7) + sigma_z().scale_real(0.2);
        let rho0 = DensityOperator::from_pure(&PureState::zero());
        let t = 2.3;
        let got = superoperator_oracle(&h, DecoherenceRates::default(), t, &rho0).unwrap();
        let u = expm_hermitian_scaled(&h, t).unwrap();
        let want = rho0.conjugate_by(&u).unwrap();
        assert!((*got.matrix() - *want.matrix()).frobenius_norm() < 1e-10);
    }

    #[test]
    fn identity_at_time_zero() {
        let rho0 = DensityOperator::from_pure(&PureState::clockwise());
        let got =
            superoperator_oracle(&sigma_x(), DecoherenceRates::new(0.3, 0.2), 0.0, &rho0).unwrap();
        assert_eq!(got, rho0);
    }

    #[test]
    fn hadamard_pulse_without_noise() {
        let h =
            crate::hamiltonians::pulse_hamiltonian(&crate::hamiltonians::PulseParams::hadamard())
                .unwrap();
        let rho0 = DensityOperator::from_pure(&PureState::zero());
        let got = superoperator_oracle(
            &h,
            DecoherenceRates::default(),
            std::f64::consts::FRAC_PI_2,
            &rho0,
        )
        .unwrap();
        let want = rho0.conjugate_by(&golden::hadamard_pulse()).unwrap();
        assert!((*got.matrix() - *want.matrix()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn vectorization_is_column_major() {
        let m = ComplexMatrix::from_real_diag(&[1.0, 2.0]).unwrap() + sigma_x().scale_real(3.0);
        let v = vectorize(&m);
        assert_eq!(v[1], m[(1, 0)]);
        assert_eq!(v[2], m[(0, 1)]);
        assert_eq!(devectorize(&v, 2).unwrap(), m);
    }
}
