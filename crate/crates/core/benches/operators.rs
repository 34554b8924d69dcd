use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qho_phase::checks::{run_verification, Model};
use qho_phase::evolution::{phase_trajectory, time_grid, StateSpec};
use qho_phase::fock::{FockOperators, OscParams};
use qho_phase::par;
use qho_phase::phase1d::{EdgeMode, Sign};
use qho_phase::spherical::build_spherical;

const PATHS: [(&str, bool); 2] = [("parallel", false), ("sequential", true)];

fn spherical_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("spherical_build");
    group.sample_size(10);
    for n_max in [10, 16] {
        let ops = FockOperators::build(n_max, OscParams::default()).unwrap();
        for (name, seq) in PATHS {
            par::set_sequential(seq);
            group.bench_with_input(BenchmarkId::new(name, n_max), &ops, |b, ops| {
                b.iter(|| build_spherical(ops).unwrap())
            });
        }
    }
    par::set_sequential(false);
    group.finish();
}

fn sparse_matmul(c: &mut Criterion) {
    let mut group = c.benchmark_group("matmul_y2_y2dag");
    for n_max in [12, 20] {
        let ops = FockOperators::build(n_max, OscParams::default()).unwrap();
        let (a, b_) = (
            ops.y_squared.matrix().clone(),
            ops.y_squared_dag.matrix().clone(),
        );
        for (name, seq) in PATHS {
            par::set_sequential(seq);
            group.bench_with_input(BenchmarkId::new(name, n_max), &n_max, |b, _| {
                b.iter(|| a.matmul(&b_))
            });
        }
    }
    par::set_sequential(false);
    group.finish();
}

fn trajectory(c: &mut Criterion) {
    let mut group = c.benchmark_group("trajectory_1001_points");
    let m = Model::build(12, OscParams::default(), EdgeMode::Open).unwrap();
    let grid = time_grid(10.0, 0.01).unwrap();
    let state = StateSpec::two_level(Sign::Plus, 0.0);
    for (name, seq) in PATHS {
        par::set_sequential(seq);
        group.bench_function(name, |b| {
            b.iter(|| phase_trajectory(&state, &grid, &m.phase).unwrap())
        });
    }
    par::set_sequential(false);
    group.finish();
}

fn verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    let m = Model::build(10, OscParams::default(), EdgeMode::Open).unwrap();
    for (name, seq) in PATHS {
        par::set_sequential(seq);
        group.bench_function(name, |b| b.iter(|| run_verification(&m)));
    }
    par::set_sequential(false);
    group.finish();
}

criterion_group!(benches, spherical_build, sparse_matmul, trajectory, verify);
criterion_main!(benches);
