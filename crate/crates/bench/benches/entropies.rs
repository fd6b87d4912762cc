use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use wehrl_bench::{mixed_state, pure_states};
use wehrl_core::channels::{projection_channel, projection_entropy_pure};
use wehrl_core::entropy::{renyi_wehrl_moment, renyi_wehrl_projector, wehrl, wehrl_stellar};
use wehrl_core::quadrature::QuadratureSpec;
use wehrl_core::SpinLabel;

fn wehrl_routes(c: &mut Criterion) {
    let mut group = c.benchmark_group("wehrl");
    for t in [2u32, 4, 6] {
        let spin = SpinLabel::from_twice(t);
        let psi = &pure_states(spin, 1, 1)[0];
        let rho = mixed_state(spin, 2);
        group.bench_with_input(BenchmarkId::new("stellar", t), psi, |b, psi| {
            b.iter(|| wehrl_stellar(black_box(psi)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("adaptive_mixed", t), &rho, |b, rho| {
            b.iter(|| wehrl(black_box(rho), &QuadratureSpec::default()).unwrap())
        });
    }
    group.finish();
}

fn projection_routes(c: &mut Criterion) {
    let mut group = c.benchmark_group("projection");
    let l = SpinLabel::from_twice(6);
    let psi = &pure_states(l, 1, 3)[0];
    let rho = psi.to_density();
    for tj in [2u32, 20, 200] {
        let j = SpinLabel::from_twice(tj);
        group.bench_with_input(BenchmarkId::new("dual_gram", tj), &j, |b, &j| {
            b.iter(|| projection_entropy_pure(black_box(psi), j).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("primal", tj), &j, |b, &j| {
            b.iter(|| projection_channel(black_box(&rho), j).unwrap().entropy())
        });
    }
    group.finish();
}

fn renyi_routes(c: &mut Criterion) {
    let mut group = c.benchmark_group("renyi");
    let spin = SpinLabel::from_twice(4);
    let rho = mixed_state(spin, 4);
    for n in [2u32, 3] {
        let rule = QuadratureSpec::exact_for_degree(4 * n as usize);
        group.bench_with_input(BenchmarkId::new("moment", n), &n, |b, &n| {
            b.iter(|| renyi_wehrl_moment(black_box(&rho), n, &rule).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("projector", n), &n, |b, &n| {
            b.iter(|| renyi_wehrl_projector(black_box(&rho), n).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, wehrl_routes, projection_routes, renyi_routes);
criterion_main!(benches);
