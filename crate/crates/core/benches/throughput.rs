//! Sequential versus rayon execution of the data-parallel kernels.
//!
//! Run with `cargo bench -p front-descent`; build with
//! `--no-default-features` to measure the fallback alone.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use front_descent::direction::big_theta;
use front_descent::{problems, run, DriverConfig, FrontSet, Instance, Parallelism, Variant};

/// A front of `size` points spread along the box diagonal of ZDT_1.
fn spread_front(instance: &Instance, size: usize) -> FrontSet {
    let bounds = instance.bounds();
    let n = instance.dim();
    let points = (0..size).map(|i| {
        let t = (i as f64 + 0.5) / size as f64;
        let mut x = vec![0.05 * t; n];
        x[0] = t;
        bounds.check(&x).unwrap();
        let fx = instance.evaluate(&x).unwrap();
        front_descent::DecisionPoint::new(i as u64, x, fx)
    });
    FrontSet::filter_nondominated(points)
}

fn theta_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("theta_sweep");
    for &n in &[10usize, 50] {
        let instance = Instance::new(problems::by_name("ZDT_1", n).unwrap());
        let front = spread_front(&instance, 100);
        for mode in [Parallelism::Sequential, Parallelism::Threads] {
            group.bench_with_input(BenchmarkId::new(format!("{mode:?}"), n), &front, |b, front| {
                b.iter(|| {
                    let sweep = big_theta(
                        front,
                        |p| instance.jacobian(p.x()),
                        instance.bounds(),
                        &Default::default(),
                        mode,
                    )
                    .unwrap();
                    black_box(sweep.min_theta)
                })
            });
        }
    }
    group.finish();
}

fn driver(c: &mut Criterion) {
    let mut group = c.benchmark_group("driver_20_iters");
    group.sample_size(10);
    for mode in [Parallelism::Sequential, Parallelism::Threads] {
        group.bench_function(format!("{mode:?}"), |b| {
            b.iter(|| {
                let instance = Instance::new(problems::by_name("CEC09_1", 20).unwrap());
                let config = DriverConfig {
                    variant: Variant::Nonmonotone { memory: 4 },
                    parallelism: mode,
                    certify: false,
                    ..DriverConfig::default()
                }
                .with_max_iterations(20);
                black_box(run(&instance, &config).unwrap().front.len())
            })
        });
    }
    group.finish();
}

criterion_group!(benches, theta_sweep, driver);
criterion_main!(benches);
