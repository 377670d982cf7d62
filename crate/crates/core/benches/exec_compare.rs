//! Sequential vs parallel execution on the crate's data-parallel maps:
//! graphical curve sampling (closed-form and integration-backed), root
//! finding, and the finite-difference oracle.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use deltawell_core::oracle::{self, Grid};
use deltawell_core::{DimensionlessModel, ExecPolicy, ProfileKind, QuantizationProblem};

fn policies() -> [(&'static str, ExecPolicy); 2] {
    [
        ("sequential", ExecPolicy::Sequential),
        ("parallel", ExecPolicy::Parallel),
    ]
}

fn bench_curve_closed_form(c: &mut Criterion) {
    let model = DimensionlessModel::new(ProfileKind::Linear, 0.0, 10.0, 0.0, None).unwrap();
    let mut group = c.benchmark_group("curve_airy_4096");
    group.sample_size(20);
    for (name, policy) in policies() {
        let problem = QuantizationProblem::new(model).with_exec(policy);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| problem.graphical_data(4096, None).unwrap())
        });
    }
    group.finish();
}

fn bench_curve_integration(c: &mut Criterion) {
    let model = DimensionlessModel::new(ProfileKind::Parabolic, 0.0, 10.0, 0.0, None).unwrap();
    let mut group = c.benchmark_group("curve_riccati_256");
    group.sample_size(10);
    for (name, policy) in policies() {
        let problem = QuantizationProblem::new(model).with_exec(policy);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| problem.graphical_data(256, None).unwrap())
        });
    }
    group.finish();
}

fn bench_find_roots(c: &mut Criterion) {
    let model = DimensionlessModel::new(ProfileKind::Parabolic, 1.0, 10.0, 0.0, None).unwrap();
    let mut group = c.benchmark_group("find_roots_parabolic");
    group.sample_size(10);
    for (name, policy) in policies() {
        let problem = QuantizationProblem::new(model).with_exec(policy);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| problem.find_roots().unwrap())
        });
    }
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let model = DimensionlessModel::new(ProfileKind::Linear, 1.0, 10.0, 0.0, None).unwrap();
    let grid = Grid::new(5e-3, -15.0, 25.0).unwrap();
    let mut group = c.benchmark_group("oracle_8k_nodes");
    group.sample_size(10);
    for (name, policy) in policies() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| oracle::solve_with(&model, &grid, model.u_left(), policy).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_curve_closed_form,
    bench_curve_integration,
    bench_find_roots,
    bench_oracle
);
criterion_main!(benches);
