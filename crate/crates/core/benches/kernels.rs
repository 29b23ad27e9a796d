//! Parallel pool against a one-thread pool on the main kernels. Build with
//! `--no-default-features` to time the sequential fallback instead.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::ThreadPool;

use filtra::exactla::{smith_normal_form, BaseRing};
use filtra::sample::{self, Shape};
use filtra::specseq::SpectralSequence;

const Z: BaseRing = BaseRing::Integers;

fn pools() -> Vec<(String, ThreadPool)> {
    let wide = rayon::current_num_threads().max(4);
    [1, wide]
        .into_iter()
        .map(|n| (format!("{n}t"), rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap()))
        .collect()
}

fn snf(c: &mut Criterion) {
    let mut rng = sample::rng(1);
    let m = sample::matrix(&mut rng, Z, 24, 24, 9);
    c.bench_function("snf_24x24", |b| b.iter(|| smith_normal_form(black_box(&m)).unwrap()));
}

fn homology(c: &mut Criterion) {
    let mut rng = sample::rng(2);
    let g = sample::graded(&mut rng, Shape::new(Z).degrees(-2, 4).max_rank(8), (-6, 6));
    let mut group = c.benchmark_group("graded_homology");
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| pool.install(|| black_box(&g).homology())));
    }
    group.finish();
}

fn day(c: &mut Criterion) {
    let mut rng = sample::rng(3);
    let x = sample::cellular(&mut rng, Z, 4, 4, 9);
    let y = sample::cellular(&mut rng, Z, 4, 4, 9);
    let mut group = c.benchmark_group("day_tensor_filtered");
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| black_box(&x).day_tensor(black_box(&y)).unwrap()))
        });
    }
    group.finish();
}

fn pages(c: &mut Criterion) {
    let mut rng = sample::rng(4);
    let x = sample::filtered(&mut rng, Shape::new(Z).degrees(-2, 3).max_rank(4), 0, 5, filtra::Tail::Constant);
    let ss = SpectralSequence::new(&x);
    let mut group = c.benchmark_group("spectral_sequence_pages");
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| (1..=3).map(|r| ss.page(r).entries.len()).sum::<usize>()))
        });
    }
    group.finish();
}

criterion_group! {
    name = kernels;
    config = Criterion::default().sample_size(20);
    targets = snf, homology, day, pages
}
criterion_main!(kernels);
