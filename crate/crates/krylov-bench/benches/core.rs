//! Microbenchmarks for the hot paths: chain construction, dense evolution,
//! height quadrature, geodesic shooting, and the truncated hyperbolic
//! trace. Representative parameter sizes match the default CLI runs.

use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use krylov_core::dynamics::{propagate, symmetry_trace, HermitianExp, LiouvillianSchedule};
use krylov_core::geometry::{geodesic_length_shooting, DeformationParams, HeightTable};
use krylov_core::lanczos::{lanczos_basis, DEFAULT_TERM_TOL};
use krylov_core::opspace::HermitianAction;
use krylov_core::symmetry::{
    su2_generator, su2_hopping, EulerAngles, GroupParams, SU11Params, SU2Params,
};
use krylov_core::OperatorState;

fn time_grid(t_max: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| i as f64 * t_max / (n - 1) as f64)
        .collect()
}

fn bench_lanczos_chain(c: &mut Criterion) {
    let p = SU2Params::new(8.0, 1.0).unwrap();
    let action = HermitianAction::new(su2_hopping(&p)).unwrap();
    let seed = OperatorState::basis_vector(p.dim(), 0);
    c.bench_function("lanczos_chain_spin8", |b| {
        b.iter(|| {
            lanczos_basis(
                black_box(&action),
                black_box(&seed),
                p.dim(),
                DEFAULT_TERM_TOL,
            )
            .unwrap()
        })
    });
}

fn bench_propagate(c: &mut Criterion) {
    let p = SU2Params::new(8.0, 1.0).unwrap();
    let gen = HermitianExp::new(su2_generator(&p)).unwrap();
    let schedule = LiouvillianSchedule::constant(gen, 2.0 * PI).unwrap();
    let seed = OperatorState::basis_vector(p.dim(), 0);
    let grid = time_grid(2.0 * PI, 512);
    c.bench_function("propagate_spin8_512pts", |b| {
        b.iter(|| propagate(black_box(&schedule), black_box(&seed), black_box(&grid)).unwrap())
    });
}

fn bench_height_table(c: &mut Criterion) {
    let d = DeformationParams::new(1.2, 4.0).unwrap();
    c.bench_function("height_table_512_nodes", |b| {
        b.iter(|| HeightTable::with_points(black_box(&d), 512).unwrap())
    });
}

fn bench_geodesic_shooting(c: &mut Criterion) {
    let a1 = EulerAngles::new(0.7, -1.1, 0.0).unwrap();
    let a2 = EulerAngles::new(2.1, 1.9, 0.0).unwrap();
    c.bench_function("geodesic_shooting_deformed", |b| {
        b.iter(|| {
            geodesic_length_shooting(black_box(&a1), black_box(&a2), 1.2, 1.0).unwrap()
        })
    });
}

fn bench_su11_trace(c: &mut Criterion) {
    let grid = time_grid(3.0, 128);
    c.bench_function("su11_trace_128pts", |b| {
        b.iter(|| {
            let p = SU11Params::new(1.0, 1.0, 3.0).unwrap();
            symmetry_trace(&GroupParams::Su11(p), black_box(&grid), None).unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_lanczos_chain,
    bench_propagate,
    bench_height_table,
    bench_geodesic_shooting,
    bench_su11_trace
);
criterion_main!(benches);
