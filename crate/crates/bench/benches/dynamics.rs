use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use ringmaj::{enumerate_bruteforce, evolve, generate_patterns, step, Rule};
use ringmaj_bench::random_rings;

fn bench_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("step");
    for &n in &[64usize, 512, 4096] {
        let ring = random_rings(n, 1, 11).remove(0);
        group.throughput(Throughput::Elements(n as u64));
        for r in [1usize, 4, 8] {
            group.bench_with_input(BenchmarkId::new(format!("r{r}"), n), &ring, |b, ring| {
                b.iter(|| step(black_box(ring), Rule::majority(r)))
            });
        }
    }
    group.finish();
}

fn bench_evolve(c: &mut Criterion) {
    let rings = random_rings(512, 32, 5);
    c.bench_function("evolve/n512_r3_x32", |b| {
        b.iter(|| {
            for ring in &rings {
                black_box(evolve(ring, Rule::majority(3), 4 * ring.n()).unwrap());
            }
        })
    });
}

fn bench_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    group.sample_size(10);
    group.bench_function("bruteforce/n18_r2", |b| {
        b.iter(|| enumerate_bruteforce(black_box(18), 2, Rule::majority(2)).unwrap())
    });
    group.bench_function("patterns/r3", |b| {
        b.iter(|| generate_patterns(black_box(3)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_step, bench_evolve, bench_enumeration);
criterion_main!(benches);
