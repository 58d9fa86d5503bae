//! Single-worker pool against the default pool on the heavy kernels.
//! Build with `--no-default-features` to time the sequential fallback.

use criterion::{criterion_group, criterion_main, Criterion};
use plurinorm::counting::{counting_sweep, FiberOptions};
use plurinorm::measures::{level_integral, Budget};
use plurinorm::spaces::{bergman_norm, NormOptions};
use plurinorm::{Exhaustion, HoloMap, ModelDomain, Polynomial, SpaceParams, C64};
use std::hint::black_box;

fn quadric() -> Polynomial {
    Polynomial::var(2, 0).pow(2).unwrap().add(&Polynomial::var(2, 1).pow(2).unwrap())
}

fn level_sphere() -> f64 {
    let u = Exhaustion::log_abs(ModelDomain::UnitBall2);
    let f = quadric();
    level_integral(&u, -0.3, &Budget::default().doubled(), |z| f.eval(z.coords()).norm().powi(3))
        .unwrap()
        .value
}

fn bergman_ball() -> f64 {
    let u = Exhaustion::log_abs(ModelDomain::UnitBall2);
    let f = Polynomial::var(2, 0).add(&Polynomial::var(2, 1).pow(3).unwrap());
    bergman_norm(&f, &u, SpaceParams::new(2.0, 1.0).unwrap(), &NormOptions::default()).unwrap().value
}

fn fiber_sweep() -> f64 {
    let f = HoloMap::to_disk(quadric(), ModelDomain::UnitBall2).unwrap();
    let targets: Vec<C64> = (1..=8).map(|k| C64::from_polar(0.1 * k as f64, 0.3)).collect();
    counting_sweep(&f, &Exhaustion::smooth_square(), &targets, 0.0, &[0.0], &FiberOptions::default())
        .into_iter()
        .map(|o| o.unwrap().n_alpha())
        .sum()
}

fn kernels() -> [(&'static str, fn() -> f64); 3] {
    [("level_sphere", level_sphere), ("bergman_ball", bergman_ball), ("fiber_sweep", fiber_sweep)]
}

#[cfg(feature = "parallel")]
fn bench(c: &mut Criterion) {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let mut g = c.benchmark_group("quadrature");
    g.sample_size(10);
    for (name, k) in kernels() {
        g.bench_function(format!("{name}/one_thread"), |b| b.iter(|| single.install(|| black_box(k()))));
        g.bench_function(format!("{name}/pool_{}", rayon::current_num_threads()), |b| b.iter(|| black_box(k())));
    }
    g.finish();
}

#[cfg(not(feature = "parallel"))]
fn bench(c: &mut Criterion) {
    let mut g = c.benchmark_group("quadrature");
    g.sample_size(10);
    for (name, k) in kernels() {
        g.bench_function(format!("{name}/sequential"), |b| b.iter(|| black_box(k())));
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
