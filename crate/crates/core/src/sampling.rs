//! Seeded random states and unitaries.
//!
//! Every random routine takes an explicit generator. Independent streams are derived
//! from a master seed with [`stream_rng`]: stream `k` is ChaCha8 seeded with the
//! master seed and switched to stream `k`, so batch `k` draws the same numbers no
//! matter which other batches run.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{trace, CMatrix, CVector};
use crate::su2::{DensityMatrix, PureState, SphereDirection, SpinLabel};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for sub-stream `stream` of `master_seed`.
pub fn stream_rng(master_seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-random unit vector in `C^dim` (normalized complex Gaussian).
pub fn haar_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    loop {
        let v = CVector::from_fn(dim, |_, _| complex_normal(rng));
        let n = v.norm();
        if n > 1e-300 {
            return v.unscale(n);
        }
    }
}

pub fn haar_pure_state<R: Rng + ?Sized>(rng: &mut R, spin: SpinLabel) -> PureState {
    PureState::from_parts_unchecked(spin, haar_vector(rng, spin.dim()))
}

/// Random mixed state `G G† / tr(G G†)` with `G` a square complex Ginibre matrix.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R, spin: SpinLabel) -> DensityMatrix {
    DensityMatrix::from_parts_unchecked(spin, random_density(rng, spin.dim()))
}

/// Random full-rank density matrix on `C^dim`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| complex_normal(rng));
    let rho = &g * g.adjoint();
    let tr = trace(&rho).re;
    crate::linalg::hermitize(&rho.unscale(tr))
}

/// Uniformly distributed direction on the sphere.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> SphereDirection {
    let u: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    SphereDirection::new(u.acos(), phi).expect("acos lies in [0, π]")
}

/// Haar-random element of SU(n): QR of a complex Ginibre matrix, column phases fixed
/// by the diagonal of R, then the determinant phase removed.
pub fn haar_special_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g: DMatrix<Complex64> = CMatrix::from_fn(n, n, |_, _| complex_normal(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..n {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for row in 0..n {
            q[(row, c)] *= phase;
        }
    }
    let det = q.determinant();
    let fix = Complex64::from_polar(1.0, -det.arg() / n as f64);
    q * fix
}
