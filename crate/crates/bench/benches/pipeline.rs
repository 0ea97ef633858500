use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use xzero_core::defvar::{self, GluingSystem};
use xzero_core::whitehead::{self, InstanceData, Stage};
use xzero_core::x0::{self, Sign, TraceCoordinates};

fn tangent(c: &mut Criterion) {
    let sys = GluingSystem::from_json(whitehead::INSTANCE_JSON).unwrap();
    let p = whitehead::bundled_point();
    c.bench_function("tangent_dimension", |b| {
        b.iter(|| defvar::tangent_dimension(black_box(&sys), black_box(&p)).unwrap())
    });
}

fn parametrisation(c: &mut Criterion) {
    let mut g = c.benchmark_group("x0");
    // A perfect-square discriminant stays in the base field; -204 forces a formal root.
    for z in [[3, 3, 3, 3], [1, 2, 3, 4]] {
        let z = TraceCoordinates::from_ints(z);
        g.bench_function(format!("solve_and_trace {z}"), |b| {
            b.iter(|| {
                let p = x0::solve_parameters(black_box(&z), Sign::Plus).unwrap();
                let (a, m) = x0::build_pair(&p).unwrap();
                x0::trace_map(&a, &m).unwrap()
            })
        });
    }
    let z = TraceCoordinates::from_ints([1, 2, 3, 4]);
    g.bench_function("float_sample", |b| b.iter(|| x0::float::sample(black_box(&z), Sign::Plus).unwrap()));
    g.finish();
}

fn pipeline(c: &mut Criterion) {
    let d = InstanceData::bundled().unwrap();
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    g.bench_function("all stages", |b| b.iter(|| whitehead::verify_main_theorem(black_box(&d), &Stage::ALL).unwrap()));
    g.finish();
}

criterion_group!(benches, tangent, parametrisation, pipeline);
criterion_main!(benches);
