use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ergopt_core::discounted::{self, convergence_sweep, Mode, Sample};
use ergopt_core::ergopt::karp_min_mean;
use ergopt_core::random::{self, SystemShape};
use ergopt_core::subaction::verify_subcohomology;
use ergopt_core::systems::{enumerate_points, FourierSeries, Observable, RotationSystem, Target};
use ergopt_core::Strategy;

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn subcohomology(c: &mut Criterion) {
    let mut rng = random::rng(0);
    let sys = random::random_system(&mut rng, SystemShape { max_vertices: 4, max_edges: 10 });
    let f = random::rational_weights(&mut rng, &sys, -5, 5, 6);
    let fbar = karp_min_mean(&sys, &f).unwrap().fbar;
    let points = enumerate_points(&sys, 2, 3);
    let mut group = c.benchmark_group("verify_subcohomology");
    for (name, strategy) in STRATEGIES {
        group.bench_function(BenchmarkId::new(name, points.len()), |b| {
            b.iter(|| verify_subcohomology(&points, &f, &fbar, strategy))
        });
    }
    group.finish();
}

fn rotation_sweep(c: &mut Criterion) {
    let rotation = RotationSystem::golden(1000);
    let cosine = Observable::Fourier(FourierSeries::cosine());
    let targets: Vec<Target> = rotation.grid_angles().into_iter().map(|x| Target::Angle { rotation: &rotation, x }).collect();
    let samples: Vec<Sample> = discounted::samples(None, &cosine, &targets).unwrap();
    let mut group = c.benchmark_group("rotation_sweep_direct");
    group.sample_size(10);
    for (name, strategy) in STRATEGIES {
        group.bench_function(name, |b| {
            b.iter(|| convergence_sweep(&samples, 0.0, &[0.1, 0.01], Mode::direct(1e-6), strategy).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, subcohomology, rotation_sweep);
criterion_main!(benches);
