use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use lpsynth::se::se_oracle_ground;
use lpsynth::{decode, gamma, strongly_equivalent, synthesize, SearchLimits, SynthesisOptions};
use lpsynth_bench::{problems, random_program};

fn synthesis(c: &mut Criterion) {
    let mut group = c.benchmark_group("synthesize");
    let opts = SynthesisOptions::default();
    for pr in problems() {
        group.bench_with_input(BenchmarkId::from_parameter(pr.name), &pr, |b, pr| {
            b.iter(|| synthesize(black_box(&pr.p), black_box(&pr.q), &pr.vocab, &opts).unwrap())
        });
    }
    group.finish();
}

fn strong_equivalence(c: &mut Criterion) {
    let mut group = c.benchmark_group("strong_equivalence");
    for preds in [4, 6, 8] {
        let (a, b) = (random_program(1, preds, 6), random_program(1, preds, 6));
        group.bench_with_input(
            BenchmarkId::new("oracle", preds),
            &(a.clone(), b.clone()),
            |bench, (a, b)| bench.iter(|| se_oracle_ground(black_box(a), black_box(b)).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new("prover", preds),
            &(a, b),
            |bench, (a, b)| {
                bench.iter(|| {
                    strongly_equivalent(black_box(a), black_box(b), &SearchLimits::default())
                })
            },
        );
    }
    group.finish();
}

fn round_trip(c: &mut Criterion) {
    let programs: Vec<_> = (0..32).map(|s| random_program(s, 5, 5)).collect();
    c.bench_function("decode_gamma", |b| {
        b.iter(|| {
            for p in &programs {
                black_box(decode(&gamma(p)).unwrap());
            }
        })
    });
}

criterion_group!(benches, synthesis, strong_equivalence, round_trip);
criterion_main!(benches);
