//! Throughput comparison of the sequential and rayon-parallel execution
//! paths for the heavy operations. Run with `cargo bench -p rqa-core`; build
//! with `--no-default-features` to confirm the sequential fallback compiles
//! on its own (both modes then measure the same code).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use rqa_core::embedding::{ami_curve_with_mode, cao_curves_with_mode};
use rqa_core::exec::ExecMode;
use rqa_core::rqa::{recurrence_matrix_from_rows_with_mode, sweep_with_mode, Norm};
use rqa_core::signals::{gen_lorenz_x, LorenzParams};

const MODES: [(&str, ExecMode); 2] = [
    ("sequential", ExecMode::Sequential),
    ("parallel", ExecMode::Parallel),
];

fn bench_cao(c: &mut Criterion) {
    let x = gen_lorenz_x(&LorenzParams::chaotic(), 1500).unwrap();
    let mut group = c.benchmark_group("cao_curves");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 1500), &mode, |b, &mode| {
            b.iter(|| cao_curves_with_mode(&x, 3, 8, mode).unwrap());
        });
    }
    group.finish();
}

fn bench_ami(c: &mut Criterion) {
    let x = gen_lorenz_x(&LorenzParams::chaotic(), 5000).unwrap();
    let mut group = c.benchmark_group("ami_curve");
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 5000), &mode, |b, &mode| {
            b.iter(|| ami_curve_with_mode(&x, 30, 16, mode).unwrap());
        });
    }
    group.finish();
}

fn bench_recurrence(c: &mut Criterion) {
    let x = gen_lorenz_x(&LorenzParams::chaotic(), 1200).unwrap();
    let rows = x.samples();
    let mut group = c.benchmark_group("recurrence_matrix");
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 1200), &mode, |b, &mode| {
            b.iter(|| {
                recurrence_matrix_from_rows_with_mode(rows, 1, 5.0, Norm::Euclidean, mode).unwrap()
            });
        });
    }
    group.finish();
}

fn bench_sweep(c: &mut Criterion) {
    let x = gen_lorenz_x(&LorenzParams::chaotic(), 300).unwrap();
    let m_values = [2, 4, 6, 8];
    let tau_values = [2, 5, 8];
    let eps_values = [0.5, 1.0, 2.0, 4.0, 8.0];
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "4x3x5"), &mode, |b, &mode| {
            b.iter(|| {
                sweep_with_mode(
                    &x,
                    &m_values,
                    &tau_values,
                    &eps_values,
                    Norm::Euclidean,
                    2,
                    mode,
                )
                .unwrap()
            });
        });
    }
    group.finish();
}

criterion_group!(benches, bench_cao, bench_ami, bench_recurrence, bench_sweep);
criterion_main!(benches);
