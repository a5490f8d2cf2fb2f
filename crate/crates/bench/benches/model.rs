use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ramflow_bench::{desk_corridor, instance};
use ramflow_core::io::synthetic;
use ramflow_core::linearize::{build_pwl, EntropyTerm, DEFAULT_SEGMENTS};
use ramflow_core::milp::{assemble, solve, HighsBackend};
use ramflow_core::{Network, SolverSettings};

fn pwl(c: &mut Criterion) {
    c.bench_function("pwl_build_24", |b| {
        b.iter(|| build_pwl(black_box(EntropyTerm::XLnOneMinusX), 1e-4, DEFAULT_SEGMENTS).unwrap())
    });
}

fn network(c: &mut Criterion) {
    let corridor = desk_corridor("tamu_houston");
    c.bench_function("network_tamu_desk", |b| {
        b.iter(|| Network::build(black_box(&corridor)).unwrap())
    });
}

fn model(c: &mut Criterion) {
    let inst = instance(desk_corridor("uiuc_chicago"), 4, 12);
    c.bench_function("assemble_uiuc_desk", |b| {
        b.iter(|| assemble(black_box(inst.clone())).unwrap())
    });

    let tiny = assemble(instance(synthetic::tiny_corridor(0), 4, 2)).unwrap();
    let settings = SolverSettings::default();
    c.bench_function("solve_tiny", |b| {
        b.iter(|| solve(black_box(&tiny), &HighsBackend, &settings).unwrap())
    });
}

criterion_group!(benches, pwl, network, model);
criterion_main!(benches);
