//! Rayon vs sequential comparison on the two Monte Carlo hot paths:
//! ensemble moment sampling and the architecture-averaged cost. The
//! parallel path follows the crate's `parallel` feature; the sequential
//! reference always runs single-threaded.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use shvqe::ansatz::ArchLogits;
use shvqe::expressivity::{ensemble_sample, EnsembleSpec, HeisenbergEnsemble};
use shvqe::hamiltonians::build_xxz;
use shvqe::optimizer::shvqe_cost;
use shvqe::parallel::{map_indexed, map_indexed_seq};

fn ensemble_moments(c: &mut Criterion) {
    let spec = EnsembleSpec {
        n: 8,
        schrodinger_depth: 2,
        heisenberg: HeisenbergEnsemble::CliffordWithLayer { gate_count: 200 },
        sample_count: 64,
        haar_sample_count: 64,
        t_max: 4,
        seed: 1,
    };
    let work = |i: usize| {
        ensemble_sample(&spec, i)
            .unwrap()
            .reduced_moments(spec.t_max)
            .unwrap()
    };
    let mut group = c.benchmark_group("ensemble_moments");
    group.sample_size(10);
    group.bench_with_input(BenchmarkId::new("dispatch", "64"), &spec, |b, _| {
        b.iter(|| map_indexed(spec.sample_count, work))
    });
    group.bench_with_input(BenchmarkId::new("sequential", "64"), &spec, |b, _| {
        b.iter(|| map_indexed_seq(spec.sample_count, work))
    });
    group.finish();
}

fn architecture_cost(c: &mut Criterion) {
    let h = build_xxz(8, 1.0).unwrap();
    let theta: Vec<f64> = (0..120).map(|i| (i as f64 * 0.713).sin()).collect();
    let phi: Vec<f64> = (0..24).map(|i| (i as f64 * 0.311).cos()).collect();
    let logits = ArchLogits::uniform(8);
    let mut group = c.benchmark_group("shvqe_cost");
    group.sample_size(10);
    for n_s in [50usize, 200] {
        group.bench_with_input(BenchmarkId::new("samples", n_s), &n_s, |b, &n_s| {
            b.iter(|| shvqe_cost(&theta, &phi, &logits, &h, n_s, 7).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, ensemble_moments, architecture_cost);
criterion_main!(benches);
