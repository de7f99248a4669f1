use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use fsi_core::phase_search::{binary_sweep_with, ternary_surface_with};
use fsi_core::{Execution, SpinState};

const STRATEGIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn binary(c: &mut Criterion) {
    let mut group = c.benchmark_group("binary_sweep");
    let state = SpinState::from_photons(10, 10).unwrap();
    for (name, exec) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new(name, "j=10"), &exec, |b, &exec| {
            b.iter(|| binary_sweep_with(black_box(&state), 1e-3, exec).unwrap())
        });
    }
    group.finish();
}

fn ternary(c: &mut Criterion) {
    let mut group = c.benchmark_group("ternary_surface");
    group.sample_size(10);
    let state = SpinState::from_photons(4, 2).unwrap();
    for (name, exec) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new(name, "h=0.02"), &exec, |b, &exec| {
            b.iter(|| ternary_surface_with(black_box(&state), 0.02, 3.2, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, binary, ternary);
criterion_main!(benches);
