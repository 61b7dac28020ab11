use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use quickcent_core::generators::{gen_pa, PaConfig};
use quickcent_core::powerlaw::fit_xmin;
use quickcent_core::quickcent::{predict_all, train, XminMode};

fn bench_gen_pa(c: &mut Criterion) {
    c.bench_function("gen_pa_n10k", |b| {
        b.iter(|| gen_pa(black_box(&PaConfig::new(10_000, 1.0, 7))).unwrap())
    });
}

fn bench_harmonic_all(c: &mut Criterion) {
    let g = gen_pa(&PaConfig::new(10_000, 1.0, 7)).unwrap();
    c.bench_function("harmonic_all_n10k", |b| b.iter(|| black_box(&g).harmonic_all()));
}

fn bench_fit_xmin(c: &mut Criterion) {
    let g = gen_pa(&PaConfig::new(5_000, 1.0, 7)).unwrap();
    let truth = g.harmonic_all();
    c.bench_function("fit_xmin_n5k", |b| {
        b.iter(|| fit_xmin(black_box(truth.values()), 100.0).unwrap())
    });
}

fn bench_train_predict(c: &mut Criterion) {
    let g = gen_pa(&PaConfig::new(10_000, 1.0, 7)).unwrap();
    let nodes: Vec<usize> = (0..1_000).collect();
    let model = train(&g, &nodes, 8, XminMode::Fixed(1.0)).unwrap();
    c.bench_function("train_n10k_sample1k", |b| {
        b.iter(|| train(black_box(&g), black_box(&nodes), 8, XminMode::Fixed(1.0)).unwrap())
    });
    c.bench_function("predict_all_n10k", |b| {
        b.iter(|| predict_all(black_box(&model), black_box(&g)))
    });
}

criterion_group!(
    benches,
    bench_gen_pa,
    bench_harmonic_all,
    bench_fit_xmin,
    bench_train_predict
);
criterion_main!(benches);
