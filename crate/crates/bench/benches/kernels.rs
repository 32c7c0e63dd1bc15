use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use qsc_bench::{dense_covector, dense_curvature_like, fixture};
use qsc_core::curvature::{riemann_g, CurvatureBundle};
use qsc_core::invariants::{identity_suite, SuiteConfig};
use qsc_core::{einsum, DiffConfig};

fn einsum_kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("einsum");
    for n in [4, 6, 8] {
        let r = dense_curvature_like(n);
        let pi = dense_covector(n);
        group.bench_with_input(BenchmarkId::new("ricci_trace", n), &n, |b, _| {
            b.iter(|| einsum("lxyl->xy", &[black_box(&r)]).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("outer_xy_lz", n), &n, |b, _| {
            let ric = einsum("lxyl->xy", &[&r]).unwrap();
            b.iter(|| einsum("xy,z->xyz", &[black_box(&ric), black_box(&pi)]).unwrap())
        });
    }
    group.finish();
}

fn curvature_kernels(c: &mut Criterion) {
    let cfg = DiffConfig::default();
    let mut group = c.benchmark_group("curvature");
    for k in [2, 3] {
        let (m, p, pi) = fixture(k);
        group.bench_with_input(BenchmarkId::new("riemann_g", k), &k, |b, _| {
            b.iter(|| riemann_g(&m, black_box(&p), &cfg).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("bundle", k), &k, |b, _| {
            b.iter(|| CurvatureBundle::new(&m, black_box(&p), &pi, &cfg).unwrap())
        });
    }
    group.finish();
}

fn suite_one_point(c: &mut Criterion) {
    let (m, p, pi) = fixture(2);
    let points = [p];
    let generators = [pi];
    c.bench_function("identity_suite/fs2_one_point", |b| {
        b.iter(|| identity_suite(&m, black_box(&points), &generators, &SuiteConfig::default()).unwrap())
    });
}

criterion_group!(benches, einsum_kernels, curvature_kernels, suite_one_point);
criterion_main!(benches);
