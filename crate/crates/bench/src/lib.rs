//! Fixed-seed inputs shared by the benchmarks.

use wehrl_core::sampling::{haar_pure_state, random_density_matrix, seeded_rng};
use wehrl_core::{DensityMatrix, PureState, SpinLabel};

pub fn pure_states(spin: SpinLabel, count: usize, seed: u64) -> Vec<PureState> {
    let mut rng = seeded_rng(seed);
    (0..count).map(|_| haar_pure_state(&mut rng, spin)).collect()
}

pub fn mixed_state(spin: SpinLabel, seed: u64) -> DensityMatrix {
    random_density_matrix(&mut seeded_rng(seed), spin)
}
