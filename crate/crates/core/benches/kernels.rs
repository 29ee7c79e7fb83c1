//! Sequential vs parallel execution of the data-parallel kernels.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use smallball::gallery;
use smallball::oracle::{mc_ball_mass_with, quadrature_ball_mass_with, McConfig};
use smallball::{Analysis, Ball, Exec, GridSpec, PNorm, Point, RadiusSchedule, TranslationSet};

fn policies() -> Vec<(&'static str, Exec)> {
    #[allow(unused_mut)]
    let mut out = vec![("sequential", Exec::Sequential)];
    #[cfg(feature = "parallel")]
    out.push(("parallel", Exec::Parallel));
    out
}

fn grid_sup(c: &mut Criterion) {
    let m = gallery::build_k_dependence().unwrap();
    let sched = RadiusSchedule::dyadic(0.5, 18, 6).unwrap();
    let grid = GridSpec::new(Point::plane(-2.5, -2.5), Point::plane(2.5, 2.5), 1.0 / 64.0).unwrap();
    let grid = TranslationSet::from_grid(grid);
    let u = Point::plane(1.0, 0.0);
    let mut group = c.benchmark_group("strong_mode_grid_sup");
    group.sample_size(20);
    for (name, exec) in policies() {
        let a = Analysis::new(&m, PNorm::Infinity, sched.clone()).with_exec(exec);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(a.check_strong_mode(&u, &grid).unwrap().limsup_est))
        });
    }
    group.finish();
}

fn oracles(c: &mut Criterion) {
    let m = gallery::build_two_line_gaussian(400).unwrap();
    let ball = Ball::new(Point::plane(1.0, 0.3), 0.75, PNorm::Two).unwrap();
    let cfg = McConfig::new(200_000, 1).unwrap();
    let mut group = c.benchmark_group("oracles");
    group.sample_size(20);
    for (name, exec) in policies() {
        group.bench_function(BenchmarkId::new("monte_carlo", name), |b| {
            b.iter(|| black_box(mc_ball_mass_with(&m, &ball, &cfg, exec).unwrap()))
        });
        group.bench_function(BenchmarkId::new("quadrature", name), |b| {
            b.iter(|| black_box(quadrature_ball_mass_with(&m, &ball, 20_000, exec).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, grid_sup, oracles);
criterion_main!(benches);
