use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pauli_grading::contractions::equation_system;
use pauli_grading::grading::verify_grading_closure;
use pauli_grading::normalizer::group_index_actions;
use pauli_grading::sl2zn::{enumerate, DEFAULT_MAX_N};
use pauli_grading::{AlgebraMode, Execution, GroupVariant};

const STRATEGIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn bench_enumerate(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_h");
    for n in [7u32, 13] {
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| enumerate(n, GroupVariant::H, DEFAULT_MAX_N, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("grading_closure");
    group.sample_size(10);
    for n in [3u32, 5] {
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| assert!(verify_grading_closure(n, AlgebraMode::Gl, exec).passed()))
            });
        }
    }
    group.finish();
}

fn bench_lifts(c: &mut Criterion) {
    let mut group = c.benchmark_group("lift_all_of_h");
    group.sample_size(10);
    for n in [3u32, 5] {
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| group_index_actions(n, GroupVariant::H, DEFAULT_MAX_N, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_equations(c: &mut Criterion) {
    let mut group = c.benchmark_group("equation_system");
    group.sample_size(10);
    for n in [3u32, 5] {
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| equation_system(n, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_enumerate, bench_closure, bench_lifts, bench_equations);
criterion_main!(benches);
