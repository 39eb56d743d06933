use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use sparsenb::bernoulli::fit_sparse_bernoulli;
use sparsenb::experiments::synthetic_summary;
use sparsenb::multinomial::{smnb_bound, DEFAULT_TOL};
use sparsenb::primalization::lp_postprocess;
use sparsenb::topk_sum;
use sparsenb_bench::count_summary;

fn bench_smnb_bound(c: &mut Criterion) {
    let mut group = c.benchmark_group("smnb_bound");
    for m in [1_000usize, 10_000, 100_000] {
        let s = synthetic_summary(m, 1).unwrap();
        let k = m / 20;
        group.bench_with_input(BenchmarkId::from_parameter(m), &s, |b, s| {
            b.iter(|| smnb_bound(black_box(s), k, 0.0, DEFAULT_TOL).unwrap())
        });
    }
    group.finish();
}

fn bench_bernoulli(c: &mut Criterion) {
    let mut group = c.benchmark_group("fit_sparse_bernoulli");
    for m in [1_000usize, 100_000] {
        let s = count_summary(m, 2);
        group.bench_with_input(BenchmarkId::from_parameter(m), &s, |b, s| {
            b.iter(|| fit_sparse_bernoulli(black_box(s), m / 20, 1.0).unwrap())
        });
    }
    group.finish();
}

fn bench_topk(c: &mut Criterion) {
    let z: Vec<f64> = (0..100_000).map(|i| ((i * 7919) % 100_003) as f64).collect();
    c.bench_function("topk_sum/100000", |b| b.iter(|| topk_sum(black_box(&z), 5_000).unwrap()));
}

fn bench_lp(c: &mut Criterion) {
    let s = synthetic_summary(200, 3).unwrap();
    let relax = smnb_bound(&s, 10, 0.0, DEFAULT_TOL).unwrap();
    c.bench_function("lp_postprocess/200", |b| {
        b.iter(|| lp_postprocess(black_box(&s), &relax, 0).unwrap())
    });
}

criterion_group!(benches, bench_smnb_bound, bench_bernoulli, bench_topk, bench_lp);
criterion_main!(benches);
