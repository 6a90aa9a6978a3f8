use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qaoa_lab::graph::{generate_regular, WeightScheme};
use qaoa_lab::maxcut::brute_force_extremes_with;
use qaoa_lab::simulator::QaoaSimulator;
use qaoa_lab::{Execution, ParameterSet};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn expectation(c: &mut Criterion) {
    let mut group = c.benchmark_group("expectation_p2");
    group.sample_size(10);
    let x = ParameterSet::new(vec![0.4, 0.7], vec![0.3, 0.2]).unwrap();
    for n in [14usize, 18] {
        let g = generate_regular(n, 3, &WeightScheme::PmOne, 7).unwrap();
        for (name, exec) in MODES {
            let sim = QaoaSimulator::with_options(&g, 22, exec).unwrap();
            group.bench_with_input(BenchmarkId::new(name, n), &sim, |b, sim| {
                b.iter(|| black_box(sim.expectation(black_box(&x))))
            });
        }
    }
    group.finish();
}

fn brute_force(c: &mut Criterion) {
    let mut group = c.benchmark_group("brute_force");
    group.sample_size(10);
    let g = generate_regular(20, 3, &WeightScheme::Unit, 3).unwrap();
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, g.n()), |b| {
            b.iter(|| black_box(brute_force_extremes_with(&g, exec).unwrap().c_max))
        });
    }
    group.finish();
}

criterion_group!(benches, expectation, brute_force);
criterion_main!(benches);
