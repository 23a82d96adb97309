//! One worker vs. the full pool on the hot sweeps.
//!
//! Build with `--no-default-features` to time the purely sequential code path;
//! both groups then measure the same loop.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use coarse_lab::cover::{lebesgue_number, multiplicity};
use coarse_lab::dimension::brick_cover;
use coarse_lab::maps::{certify_n_to_1, CoarseMap};
use coarse_lab::par::with_jobs;
use coarse_lab::space::shortest_paths;
use coarse_lab::FiniteMetricSpace;

const MODES: [(&str, usize); 2] = [("sequential", 1), ("parallel", 0)];

fn fold_map(m: usize) -> CoarseMap {
    let x = FiniteMetricSpace::path(2 * m + 1).unwrap();
    let y = FiniteMetricSpace::path(m + 1).unwrap();
    let table = (0..=2 * m).map(|i| i.abs_diff(m)).collect();
    CoarseMap::new(x, y, table).unwrap()
}

fn certify(c: &mut Criterion) {
    let f = fold_map(200);
    let mut g = c.benchmark_group("certify_n_to_1");
    for (name, jobs) in MODES {
        g.bench_function(BenchmarkId::new(name, "fold-401"), |b| {
            b.iter(|| with_jobs(jobs, || certify_n_to_1(black_box(&f), 10.0, 21.0).unwrap().n))
        });
    }
    g.finish();
}

fn bricks(c: &mut Criterion) {
    let x = FiniteMetricSpace::grid(&[40, 40]).unwrap();
    let u = brick_cover(&[40, 40], 8).unwrap();
    let mut g = c.benchmark_group("brick_cover");
    for (name, jobs) in MODES {
        g.bench_function(BenchmarkId::new(name, "grid-40x40"), |b| {
            b.iter(|| with_jobs(jobs, || (multiplicity(&u), lebesgue_number(black_box(&x), &u).unwrap())))
        });
    }
    g.finish();
}

fn distances(c: &mut Criterion) {
    let n = 300;
    let mut w = vec![f64::INFINITY; n * n];
    for i in 0..n {
        w[i * n + i] = 0.0;
        let j = (i * 7 + 3) % n;
        let k = (i + 1) % n;
        for t in [j, k] {
            if t != i {
                w[i * n + t] = 1.0 + (i % 5) as f64;
                w[t * n + i] = w[i * n + t];
            }
        }
    }
    let mut g = c.benchmark_group("shortest_paths");
    g.sample_size(20);
    for (name, jobs) in MODES {
        g.bench_function(BenchmarkId::new(name, "n-300"), |b| {
            b.iter(|| with_jobs(jobs, || shortest_paths(n, black_box(&w))))
        });
    }
    g.finish();
}

criterion_group!(benches, certify, bricks, distances);
criterion_main!(benches);
