use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use qwalk_core::{char_poly, refine_system, track_bands, walks};

fn bench_char_poly(c: &mut Criterion) {
    let mut group = c.benchmark_group("char_poly");
    for (name, w) in [
        ("hadamard", walks::hadamard()),
        ("grover3", walks::grover3()),
    ] {
        group.bench_function(name, |b| b.iter(|| char_poly(black_box(&w)).unwrap()));
    }
    group.finish();
}

fn bench_track(c: &mut Criterion) {
    let mut group = c.benchmark_group("track_bands");
    group.sample_size(20);
    for m in [256usize, 1024] {
        for (name, w) in [
            ("hadamard", walks::hadamard()),
            ("modified_hadamard", walks::modified_hadamard()),
            ("grover3", walks::grover3()),
        ] {
            group.bench_with_input(BenchmarkId::new(name, m), &m, |b, &m| {
                b.iter(|| {
                    refine_system(&track_bands(black_box(&w), m, 1e-6).unwrap(), 1e-6).unwrap()
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_char_poly, bench_track);
criterion_main!(benches);
