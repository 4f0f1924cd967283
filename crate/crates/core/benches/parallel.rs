//! Compares the data-parallel inner loops against a single-thread pool:
//! the multistart inverse solver and the kappa-sweep spectrum tracer.

use criterion::{criterion_group, criterion_main, Criterion};
use pjacobi::c64;
use pjacobi::cpoly::CPoly;
use pjacobi::floquet;
use pjacobi::inverse::{solve_inverse, InverseProblem};
use pjacobi::operator::JacobiOperator;
use pjacobi::spectral::trace_spectrum;

fn single_thread_pool() -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
}

fn bench_inverse(c: &mut Criterion) {
    let problem = InverseProblem::new(CPoly::from_real(&[2.0, 0.0, -4.0, 0.0, 1.0])).unwrap();
    let starts = 400;
    let mut group = c.benchmark_group("inverse_multistart_n4");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        let pool = single_thread_pool();
        b.iter(|| pool.install(|| solve_inverse(&problem, starts, 3).unwrap().solutions.len()))
    });
    group.bench_function("parallel", |b| {
        b.iter(|| solve_inverse(&problem, starts, 3).unwrap().solutions.len())
    });
    group.finish();
}

fn bench_spectrum(c: &mut Criterion) {
    let op = JacobiOperator::new(
        (0..8)
            .map(|j| c64(-1.0 - 0.1 * (j as f64 % 3.0), 0.05 * j as f64))
            .collect(),
        (0..8)
            .map(|j| c64(0.3 * (j as f64 - 4.0) / 4.0, -0.2 + 0.05 * j as f64))
            .collect(),
    )
    .unwrap();
    let (op, _) = op.normalize();
    let md = floquet::monodromy(&op).unwrap();
    let mut group = c.benchmark_group("spectrum_trace_n8");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        let pool = single_thread_pool();
        b.iter(|| pool.install(|| trace_spectrum(&md, 256).unwrap().arcs.len()))
    });
    group.bench_function("parallel", |b| {
        b.iter(|| trace_spectrum(&md, 256).unwrap().arcs.len())
    });
    group.finish();
}

criterion_group!(benches, bench_inverse, bench_spectrum);
criterion_main!(benches);
