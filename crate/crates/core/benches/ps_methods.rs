//! Parallel vs single-threaded runs of the data-parallel paths.
//!
//! With the default `parallel` feature the "parallel" group uses rayon's global
//! pool and "sequential" pins work to a one-thread pool. Built with
//! `--no-default-features` both groups run the plain iterator fallback.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use psnum_core::check::{run_fuzz, FuzzConfig, Methods};
use psnum_core::{enumerate_circuits, signed_family_count, Caps, IntMatrix, Multigraph};

fn complete_with_loops(n: usize) -> Multigraph {
    Multigraph::from_edges(n, (0..n).flat_map(|i| (0..n).map(move |j| (i, j)))).unwrap()
}

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        (
            "sequential",
            rayon::ThreadPoolBuilder::new()
                .num_threads(1)
                .build()
                .unwrap(),
        ),
        ("parallel", rayon::ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn signed_count(c: &mut Criterion) {
    let mut group = c.benchmark_group("signed_family_count");
    for n in [6, 7] {
        let g = complete_with_loops(n);
        let circuits = enumerate_circuits(&g, Caps::DEFAULT_CIRCUITS).unwrap();
        for (label, pool) in pools() {
            group.bench_with_input(BenchmarkId::new(label, n), &n, |b, _| {
                b.iter(|| {
                    pool.install(|| {
                        signed_family_count(&g, black_box(&circuits), u64::MAX).unwrap()
                    })
                })
            });
        }
    }
    group.finish();
}

fn leibniz(c: &mut Criterion) {
    let mut group = c.benchmark_group("leibniz_determinant");
    group.sample_size(10);
    let m = complete_with_loops(8).adjacency_matrix().identity_minus();
    let m = IntMatrix::from_fn(8, |i, j| m.get(i, j) + (i * 3 + j) as i64 % 5);
    for (label, pool) in pools() {
        group.bench_function(label, |b| {
            b.iter(|| pool.install(|| black_box(&m).leibniz_determinant(8).unwrap()))
        });
    }
    group.finish();
}

fn fuzz(c: &mut Criterion) {
    let mut group = c.benchmark_group("fuzz_corpus");
    group.sample_size(10);
    let config = FuzzConfig {
        max_vertices: 6,
        max_edges: 10,
        cases: 200,
        seed: 42,
    };
    for (label, pool) in pools() {
        group.bench_function(label, |b| {
            b.iter(|| {
                pool.install(|| run_fuzz(black_box(&config), &Caps::default(), &Methods::default()))
            })
        });
    }
    group.finish();
}

criterion_group!(benches, signed_count, leibniz, fuzz);
criterion_main!(benches);
