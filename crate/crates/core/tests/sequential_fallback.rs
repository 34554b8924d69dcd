//! The runtime switch is process-global, so this file holds a single test.

use qho_phase::checks::{run_verification, Model};
use qho_phase::evolution::{phase_trajectory, time_grid, StateSpec};
use qho_phase::fock::OscParams;
use qho_phase::par;
use qho_phase::phase1d::{EdgeMode, Sign};

fn run() -> (Vec<String>, Vec<(f64, f64)>) {
    let m = Model::build(7, OscParams::new(1.2, 0.9).unwrap(), EdgeMode::Open).unwrap();
    let lines = run_verification(&m).iter().map(|r| r.to_line()).collect();
    let grid = time_grid(5.0, 0.05).unwrap();
    let traj = phase_trajectory(&StateSpec::two_level(Sign::Plus, 0.3), &grid, &m.phase).unwrap();
    (lines, traj.iter().map(|p| (p.phi_unwound, p.tau)).collect())
}

#[test]
fn sequential_and_parallel_paths_agree_bitwise() {
    par::set_sequential(false);
    let parallel = run();
    par::set_sequential(true);
    assert!(!par::is_parallel());
    let sequential = run();
    par::set_sequential(false);
    assert_eq!(parallel.0, sequential.0);
    assert_eq!(parallel.1, sequential.1);
}
