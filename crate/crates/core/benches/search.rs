use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mints_core::{
    factorial_scheme, search_known_eps, search_optimal, verify_scheme, CostKind, KnownEpsConfig,
    SearchConfig,
};

/// `Some(1)` runs on the calling thread; `None` uses the global rayon pool.
const MODES: [(&str, Option<usize>); 2] = [("sequential", Some(1)), ("parallel", None)];

fn classic(c: &mut Criterion) {
    let mut group = c.benchmark_group("search_optimal");
    group.sample_size(10);
    for (n, kind) in [
        (5, CostKind::TotalMax),
        (6, CostKind::TotalMax),
        (5, CostKind::GrandSum),
        (6, CostKind::MaxEntry),
    ] {
        for (mode, threads) in MODES {
            let mut config = SearchConfig::new(n, kind);
            config.threads = threads;
            group.bench_with_input(
                BenchmarkId::new(format!("{kind}/n{n}"), mode),
                &config,
                |b, config| b.iter(|| search_optimal(config).unwrap()),
            );
        }
    }
    group.finish();
}

fn known_eps(c: &mut Criterion) {
    let mut group = c.benchmark_group("search_known_eps");
    group.sample_size(10);
    for (n, k) in [(6, 2), (5, 3)] {
        for (mode, threads) in MODES {
            let mut config = KnownEpsConfig::new(n, k);
            config.threads = threads;
            group.bench_with_input(
                BenchmarkId::new(format!("n{n}k{k}"), mode),
                &config,
                |b, config| b.iter(|| search_known_eps(config).unwrap()),
            );
        }
    }
    group.finish();
}

fn verify(c: &mut Criterion) {
    let scheme = factorial_scheme(9).unwrap();
    c.bench_function("verify_scheme/factorial9", |b| {
        b.iter(|| verify_scheme(&scheme).unwrap())
    });
}

criterion_group!(benches, classic, known_eps, verify);
criterion_main!(benches);
