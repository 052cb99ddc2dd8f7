use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use bandprec::{
    build_omega, empirical_covariance, estimate, inverse_append_trailing, inverse_delete_leading,
    invert_spd, sample, EstimatorConfig, Mode, ModelSpec, SymMatrix,
};

fn sigma_hat(p: usize) -> SymMatrix {
    let model = build_omega(ModelSpec::new(0.5, p)).unwrap();
    empirical_covariance(&sample(&model, 2 * p, 1)).unwrap()
}

fn estimate_by_bandwidth(c: &mut Criterion) {
    let sigma = sigma_hat(512);
    let mut group = c.benchmark_group("estimate_p512");
    group.sample_size(10);
    for k in [8usize, 16, 32] {
        for mode in [Mode::Fast, Mode::Naive] {
            let config = EstimatorConfig::new(k).with_mode(mode);
            group.bench_with_input(BenchmarkId::new(mode.to_string(), k), &config, |b, config| {
                b.iter(|| estimate(black_box(&sigma), config).unwrap())
            });
        }
    }
    group.finish();
}

fn window_updates(c: &mut Criterion) {
    let sigma = sigma_hat(200);
    let mut group = c.benchmark_group("window_q96");
    let window = sigma.principal(0, 96);
    let inv = invert_spd(&window).unwrap();
    let head = invert_spd(&sigma.principal(0, 95)).unwrap();
    let border: Vec<f64> = (0..95).map(|i| sigma.get(i, 95)).collect();
    group.bench_function("invert_spd", |b| b.iter(|| invert_spd(black_box(&window)).unwrap()));
    group.bench_function("delete_leading", |b| {
        b.iter(|| inverse_delete_leading(black_box(&inv)).unwrap())
    });
    group.bench_function("append_trailing", |b| {
        b.iter(|| inverse_append_trailing(black_box(&head), &border, sigma.get(95, 95)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, estimate_by_bandwidth, window_updates);
criterion_main!(benches);
