use std::hint::black_box;

use beurling_lab::approx::{besov_betas, DyadicGrid, Interval};
use beurling_lab::geometry::Domain;
use beurling_lab::operators::{fft_beurling, t_char_contour, GridFunction, MultiIndex, Mollified};
use beurling_lab::parallel::Exec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64 as C;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn fft(c: &mut Criterion) {
    let mut g = c.benchmark_group("fft_beurling");
    let disk = Mollified::of(&Domain::unit_disk(), 0.02).unwrap();
    for n in [256usize, 512] {
        let f = GridFunction::from_fn(n, 4.096 / n as f64, C::new(-2.048, -2.048), |z| C::new(disk.value(z), 0.0), Exec::Sequential)
            .unwrap();
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, n), &f, |b, f| b.iter(|| fft_beurling(black_box(f), exec).unwrap()));
        }
    }
    g.finish();
}

fn contour_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("contour_sweep");
    let sq = Domain::square(C::new(0.0, 0.0), 0.5);
    let pts: Vec<C> = (0..256).map(|k| C::new(-0.45 + 0.9 * (k % 16) as f64 / 15.0, -0.45 + 0.9 * (k / 16) as f64 / 15.0)).collect();
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| exec.map(&pts, |&z| t_char_contour(&sq, MultiIndex::new(-3, 1), z).unwrap().value))
        });
    }
    g.finish();
}

fn beta_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("besov_betas");
    let grid = DyadicGrid::new(Interval::new(-1.0, 1.0), 0, 9);
    let f = |x: f64| (3.0 * x).sin() * (-x * x).exp();
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| besov_betas(&f, 1.5, 2.0, 1, &grid, exec).unwrap().value));
    }
    g.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = fft, contour_sweep, beta_sweep
}
criterion_main!(benches);
