use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use signbal_bench::{network, spec};
use signbal_core::bootstrap::bootstrap_distribution;
use signbal_core::census::{triangle_profile_with, Engine};
use signbal_core::graphon::sample_network;
use signbal_core::inference::{confidence_interval, CiOptions};
use signbal_core::Target;

fn census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    for n in [100, 400, 1000] {
        let adj = network(n, 1);
        for engine in [Engine::BitRows, Engine::Intersection] {
            group.bench_with_input(
                BenchmarkId::new(format!("{engine:?}"), n),
                &adj,
                |b, adj| b.iter(|| triangle_profile_with(black_box(adj), engine)),
            );
        }
    }
    group.finish();
}

fn inference(c: &mut Criterion) {
    let mut group = c.benchmark_group("edgeworth_ci");
    for n in [100, 400, 1000] {
        let adj = network(n, 2);
        group.bench_with_input(BenchmarkId::from_parameter(n), &adj, |b, adj| {
            b.iter(|| confidence_interval(black_box(adj), &CiOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let spec = spec();
    let mut group = c.benchmark_group("sample_network");
    for n in [100, 1000] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| sample_network(&spec, n, black_box(3)).unwrap())
        });
    }
    group.finish();
}

fn bootstrap(c: &mut Criterion) {
    let adj = network(160, 4);
    let mut group = c.benchmark_group("bootstrap");
    group.sample_size(10);
    group.bench_function("n160_B200", |b| {
        b.iter(|| bootstrap_distribution(&adj, Target::Balanced, 200, black_box(5)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, census, inference, sampling, bootstrap);
criterion_main!(benches);
