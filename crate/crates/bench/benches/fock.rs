use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use wehrl_core::fock::{cloning_channel, measure_prepare_channel, SymmetricSpace};
use wehrl_core::linalg::outer;
use wehrl_core::majopt::{minimize_entropy, Objective};
use wehrl_core::sampling::{haar_vector, seeded_rng};
use wehrl_core::SpinLabel;

fn channels(c: &mut Criterion) {
    let space = SymmetricSpace::new(3, 3).unwrap();
    let psi = haar_vector(&mut seeded_rng(5), space.dim());
    let rho = outer(&psi);
    c.bench_function("cloning N=3 M=3 k=3", |b| {
        b.iter(|| cloning_channel(&space, black_box(&rho), 3).unwrap().entropy())
    });
    c.bench_function("measure_prepare N=3 M=3 k=3", |b| {
        b.iter(|| measure_prepare_channel(&space, black_box(&psi), 3).unwrap().entropy())
    });
}

fn optimizer(c: &mut Criterion) {
    let mut group = c.benchmark_group("minimize");
    group.sample_size(10);
    group.bench_function("wehrl 2l=3, 4 restarts", |b| {
        b.iter(|| minimize_entropy(SpinLabel::from_twice(3), Objective::Wehrl, 4, 1).unwrap().best_value)
    });
    group.finish();
}

criterion_group!(benches, channels, optimizer);
criterion_main!(benches);
