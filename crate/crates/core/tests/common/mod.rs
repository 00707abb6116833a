#![allow(dead_code)]

use nalgebra::DMatrix;
use polariton_sim::gates::PureState;
use polariton_sim::linalg::{expm_hermitian_scaled, kron, Complex, ComplexMatrix};
use polariton_sim::lindblad::{DecoherenceRates, DensityOperator};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut TestRng, dim: usize) -> ComplexMatrix {
    let entries: Vec<Complex> = (0..dim * dim)
        .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::from_row_major(dim, &entries).unwrap()
}

pub fn random_hermitian(rng: &mut TestRng, dim: usize, scale: f64) -> ComplexMatrix {
    random_matrix(rng, dim).hermitian_part().scale_real(scale)
}

pub fn random_unitary(rng: &mut TestRng, dim: usize) -> ComplexMatrix {
    let h = random_hermitian(rng, dim, 3.0);
    expm_hermitian_scaled(&h, 1.0).unwrap()
}

pub fn random_local_unitary(rng: &mut TestRng) -> ComplexMatrix {
    let a = random_unitary(rng, 2);
    let b = random_unitary(rng, 2);
    kron(&a, &b).unwrap()
}

pub fn random_pure(rng: &mut TestRng, dim: usize) -> PureState {
    let amps: Vec<Complex> = (0..dim)
        .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    PureState::normalized(amps).unwrap()
}

/// `G G† / Tr`, full rank with probability 1.
pub fn random_mixed(rng: &mut TestRng, dim: usize) -> DensityOperator {
    let g = random_matrix(rng, dim);
    let m = g * g.adjoint();
    let tr = m.trace().re;
    DensityOperator::new(m.scale_real(1.0 / tr).hermitian_part()).unwrap()
}

/// Mixed state with every eigenvalue at least `floor / dim`.
pub fn random_interior(rng: &mut TestRng, dim: usize, floor: f64) -> DensityOperator {
    let m = random_mixed(rng, dim).matrix().scale_real(1.0 - floor)
        + ComplexMatrix::identity(dim)
            .unwrap()
            .scale_real(floor / dim as f64);
    DensityOperator::new(m).unwrap()
}

pub fn random_rates(rng: &mut TestRng, max: f64) -> DecoherenceRates {
    DecoherenceRates::new(rng.gen_range(0.0..max), rng.gen_range(0.0..max))
}

pub fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<Complex> {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| m.get(i, j))
}

/// Ascending spectrum of a Hermitian matrix from nalgebra's solver.
pub fn reference_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = to_nalgebra(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn frob(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (*a - *b).frobenius_norm()
}
