use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use spraytube::oracle::direct_tube;
use spraytube::{complex_dimensions, Screen, SelfSimilarSystem, Window};
use spraytube_bench::{cantor_carpet, formula, gasket};

fn exact_tube(c: &mut Criterion) {
    let spray = cantor_carpet();
    let g = spray.generator().inradius;
    let mut group = c.benchmark_group("exact_tube");
    for n in [100, 1_000, 10_000] {
        let f = formula(&spray, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| f.exact_tube(black_box(0.1 * g)).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let spray = cantor_carpet();
    let g = spray.generator().inradius;
    c.bench_function("direct_tube", |b| b.iter(|| direct_tube(&spray, black_box(1e-3 * g)).unwrap()));
}

fn dimensions(c: &mut Criterion) {
    let lattice = SelfSimilarSystem::new(vec![1.0 / 3.0; 4], 2).unwrap();
    let nonlattice = SelfSimilarSystem::new(vec![0.5, 1.0 / 3.0], 1).unwrap();
    let mut group = c.benchmark_group("complex_dimensions");
    group.sample_size(10);
    for (label, sys) in [("lattice", lattice), ("nonlattice", nonlattice)] {
        let w = Window::for_system(&sys, 50.0);
        group.bench_function(label, |b| b.iter(|| complex_dimensions(&sys, &w).unwrap()));
    }
    group.finish();
}

fn screen(c: &mut Criterion) {
    let spray = gasket();
    let f = formula(&spray, 1_000);
    let eps = 0.2 * spray.generator().inradius;
    let sc = Screen::new(-0.5, 200.0).unwrap();
    let mut group = c.benchmark_group("screen_error_term");
    group.sample_size(10);
    group.bench_function("gasket", |b| b.iter(|| f.screen_error_term(black_box(eps), &sc, 1e-8).unwrap()));
    group.finish();
}

criterion_group!(benches, exact_tube, oracle, dimensions, screen);
criterion_main!(benches);
