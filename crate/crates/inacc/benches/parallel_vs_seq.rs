//! Parallel vs sequential throughput on the two data-parallel hot paths:
//! window-grid law evaluation and Monte Carlo sampling.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use inacc::dist::{Distribution, ModelPair, TruncationWindow};
use inacc::laws::sample_windows;
use inacc::measures;
use inacc::par;
use inacc::quad::QuadratureConfig;

fn fixture_pair() -> ModelPair {
    ModelPair::new(
        Distribution::triangular_up(2.0).unwrap(),
        Distribution::triangular_down(2.0).unwrap(),
    )
    .unwrap()
}

fn bench_window_grid(c: &mut Criterion) {
    let pair = fixture_pair();
    let cfg = QuadratureConfig::default();
    let windows = sample_windows(&pair, 64, 42, None);
    let eval = |w: &TruncationWindow| {
        measures::weighted_interval_inaccuracy_via(&pair, w, &cfg, measures::Route::ForceQuadrature)
            .map(|m| m.value)
            .unwrap_or(f64::NAN)
    };

    let mut group = c.benchmark_group("window_grid_64");
    group.bench_function("sequential", |b| {
        b.iter_batched(
            || windows.clone(),
            |ws| black_box(par::map_collect_seq(&ws, eval)),
            BatchSize::SmallInput,
        )
    });
    group.bench_function("parallel", |b| {
        b.iter_batched(
            || windows.clone(),
            |ws| black_box(par::map_collect(&ws, eval)),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

fn bench_monte_carlo(c: &mut Criterion) {
    let pair = fixture_pair();
    let w = TruncationWindow::new(0.2, 1.5).unwrap();
    let n: u64 = 200_000;

    // chunk map mirrors the internals of mc_estimate
    let sample_chunk = |chunk: u64| -> f64 {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        rng.set_stream(chunk + 1);
        let mut acc = 0.0;
        for _ in 0..4096u64 {
            let u: f64 = 0.1 + rng.random::<f64>() * 0.8;
            acc += pair.actual.quantile(u);
        }
        acc
    };
    let chunks = n / 4096;

    let mut group = c.benchmark_group("monte_carlo_chunks");
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(par::map_chunks_seq(chunks, sample_chunk)))
    });
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(par::map_chunks(chunks, sample_chunk)))
    });
    group.finish();

    let mut group = c.benchmark_group("mc_estimate_full");
    group.bench_function("weighted_interval_1e5", |b| {
        b.iter(|| {
            black_box(
                inacc::mc::mc_estimate(
                    &pair,
                    &w,
                    inacc::mc::Functional::WeightedIntervalInaccuracy,
                    100_000,
                    42,
                )
                .unwrap(),
            )
        })
    });
    group.finish();
}

criterion_group!(benches, bench_window_grid, bench_monte_carlo);
criterion_main!(benches);
