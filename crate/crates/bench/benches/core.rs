use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use possibility_bench::{nested_construct, random_network, registry};
use possibility_core::normalize::{conv, to_canonical_dnf};
use possibility_core::planner::{reach_possibility, widest_reach};
use possibility_core::{lukasiewicz_valuation, parse_proposition, strongly_equivalent, validate_construct, Assignment};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn normalization(c: &mut Criterion) {
    let mut group = c.benchmark_group("conv");
    for depth in [2, 4, 6] {
        let prop = nested_construct(&mut ChaCha8Rng::seed_from_u64(1), depth);
        group.bench_with_input(BenchmarkId::new("conv", depth), &prop, |b, p| {
            b.iter(|| conv(black_box(p)))
        });
        group.bench_with_input(BenchmarkId::new("canonical", depth), &prop, |b, p| {
            b.iter(|| to_canonical_dnf(black_box(p)))
        });
        group.bench_with_input(BenchmarkId::new("strongly_equivalent", depth), &prop, |b, p| {
            b.iter(|| strongly_equivalent(black_box(p), black_box(p)))
        });
    }
    group.finish();
}

fn parsing_and_valuation(c: &mut Criterion) {
    let prop = nested_construct(&mut ChaCha8Rng::seed_from_u64(2), 8);
    let text = prop.to_string();
    let reg = registry();
    c.bench_function("validate depth 8", |b| {
        b.iter(|| validate_construct(black_box(prop.clone()), &reg, true).unwrap())
    });
    c.bench_function("parse depth 8", |b| {
        b.iter(|| parse_proposition(black_box(&text)).unwrap())
    });
    let mut a = Assignment::new();
    for i in 0..8 {
        a = a.with(&format!("p{i}"), 0.9).with(&format!("c{i}"), 0.1);
    }
    c.bench_function("valuate depth 8", |b| {
        b.iter(|| lukasiewicz_valuation(black_box(&prop), &a).unwrap())
    });
}

fn planning(c: &mut Criterion) {
    let mut group = c.benchmark_group("reach");
    for (nodes, legs) in [(12, 30), (100, 400), (1000, 5000)] {
        let (g, table, poss) = random_network(&mut ChaCha8Rng::seed_from_u64(3), nodes, legs);
        let goal = format!("n{}", nodes - 1);
        group.bench_function(BenchmarkId::new("widest_reach", nodes), |b| {
            b.iter(|| widest_reach(&g, &poss, black_box("n0"), &goal))
        });
        group.bench_function(BenchmarkId::new("reach_possibility", nodes), |b| {
            b.iter(|| reach_possibility(&g, black_box("n0"), &goal, &table, &[], 0).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, normalization, parsing_and_valuation, planning);
criterion_main!(benches);
