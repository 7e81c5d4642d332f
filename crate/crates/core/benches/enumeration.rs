use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fandecomp::fankit::{self, isomorphic_with, validate_with};
use fandecomp::par::Execution;
use fandecomp::sample;
use fandecomp::squarezero::{count_square_zero_with, product_profile, profile, CountOptions, FactorKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn square_zero(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_square_zero");
    let cases = [
        ("DIAG(4) mod 2", vec![FactorKind::Diag { r: 4 }], 2),
        ("PQ(4,4)*CP1^2 mod 2", vec![FactorKind::PQ { p: 4, q: 4 }, FactorKind::ProjLine, FactorKind::ProjLine], 2),
        ("DIAG(2)*PQ(2,1) mod 5", vec![FactorKind::Diag { r: 2 }, FactorKind::PQ { p: 2, q: 1 }], 5),
    ];
    for (name, kinds, m) in cases {
        let ps: Vec<_> = kinds.iter().map(|&k| profile(k).unwrap()).collect();
        let pp = product_profile(&ps);
        for (mode, execution) in MODES {
            let opts = CountOptions { execution, ..CountOptions::default() };
            group.bench_with_input(BenchmarkId::new(mode, name), &pp, |b, pp| {
                b.iter(|| count_square_zero_with(black_box(pp), m, opts).unwrap())
            });
        }
    }
    group.finish();
}

fn isomorphism(c: &mut Criterion) {
    let mut group = c.benchmark_group("isomorphic");
    let f = fankit::product_all(&[sample::small_fan("F3"), sample::small_fan("CP2"), sample::small_fan("F1")]).unwrap();
    let u = sample::random_unimodular(&mut ChaCha8Rng::seed_from_u64(11), f.dim(), 5);
    let g = f.transform(&u).unwrap();
    for (mode, execution) in MODES {
        group.bench_function(BenchmarkId::new(mode, "F3*CP2*F1"), |b| {
            b.iter(|| isomorphic_with(black_box(&f), black_box(&g), execution).unwrap())
        });
    }
    group.finish();
}

fn validation(c: &mut Criterion) {
    let mut group = c.benchmark_group("validate");
    let f = fankit::product_all(&[sample::small_fan("F2"), sample::small_fan("F1"), sample::small_fan("CP2")]).unwrap();
    for (mode, execution) in MODES {
        group.bench_function(BenchmarkId::new(mode, "F2*F1*CP2"), |b| {
            b.iter(|| validate_with(black_box(&f), execution).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, square_zero, isomorphism, validation);
criterion_main!(benches);
