use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use horizonlab_core::sweep::{batch_to_rindler, cutoff_refinement, tolerance_study, Execution};
use horizonlab_core::{
    initial_state_at_rest, IntegratorConfig, MinkowskiEvent, RindlerFrame, SpacetimeParams,
};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn transforms(c: &mut Criterion) {
    let frame = RindlerFrame::new(1.0).unwrap();
    let events: Vec<MinkowskiEvent> = (0..100_000)
        .map(|i| {
            let x = 1.0 + (i % 997) as f64;
            MinkowskiEvent::longitudinal(x * ((i % 199) as f64 / 200.0 - 0.5), x)
        })
        .collect();
    let mut group = c.benchmark_group("to_rindler_1e5");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| batch_to_rindler(&frame, black_box(&events), exec))
        });
    }
    group.finish();
}

fn cutoffs(c: &mut Criterion) {
    let p = SpacetimeParams::new(1.0, 1e-2).unwrap();
    let init = initial_state_at_rest(3.0, &p).unwrap();
    let cfg = IntegratorConfig::default();
    let eps = [1e-3, 5e-4, 1e-4, 5e-5, 1e-5, 5e-6, 1e-6, 5e-7];
    let mut group = c.benchmark_group("cutoff_refinement");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, eps.len()), &eps, |b, eps| {
            b.iter(|| cutoff_refinement(&init, &p, &cfg, eps, exec))
        });
    }
    group.finish();
}

fn tolerances(c: &mut Criterion) {
    let p = SpacetimeParams::eternal(1.0).unwrap();
    let cfg = IntegratorConfig::default();
    let tols = [1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11];
    let mut group = c.benchmark_group("tolerance_study");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, tols.len()), &tols, |b, tols| {
            b.iter(|| tolerance_study(2.0, &p, &cfg, tols, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, transforms, cutoffs, tolerances);
criterion_main!(benches);
