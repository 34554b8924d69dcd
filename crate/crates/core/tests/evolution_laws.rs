use std::f64::consts::PI;

use proptest::prelude::*;
use qho_phase::checks::Model;
use qho_phase::evolution::{
    phase_trajectory, propagate, propagate_vector, rotation_law_residual, EvolutionError, StateSpec,
};
use qho_phase::fock::OscParams;
use qho_phase::phase1d::{EdgeMode, Sign};
use qho_phase::spherical::SphericalLabel;
use qho_phase::C64;

fn model(n_max: u32, omega: f64) -> Model {
    Model::build(n_max, OscParams::new(1.0, omega).unwrap(), EdgeMode::Open).unwrap()
}

fn window_labels(n_max: u32) -> Vec<SphericalLabel> {
    let mut out = Vec::new();
    for n in 0..=n_max / 2 {
        for l in 0..=(n_max - 2 * n) {
            for m in -(l as i32)..=(l as i32) {
                out.push(SphericalLabel::new(n, l, m));
            }
        }
    }
    out
}

fn state_strategy(n_max: u32) -> impl Strategy<Value = Vec<(usize, f64, f64)>> {
    let k = window_labels(n_max).len();
    prop::collection::vec((0..k, -1.0f64..1.0, -1.0f64..1.0), 2..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rotation_law_for_arbitrary_single_copy_states(
        raw in state_strategy(4),
        minus in any::<bool>(),
        omega in 0.3f64..3.0,
    ) {
        let m = model(6, omega);
        let sign = if minus { Sign::Minus } else { Sign::Plus };
        let labels = window_labels(4);
        let mut comps: Vec<(SphericalLabel, Sign, C64)> = Vec::new();
        for (k, re, im) in raw {
            if comps.iter().all(|c| c.0 != labels[k]) {
                comps.push((labels[k], sign, C64::new(re, im)));
            }
        }
        let Ok(state) = StateSpec::new(comps) else { return Ok(()) };
        let grid: Vec<f64> = (0..200).map(|k| k as f64 * 0.05 / omega).collect();
        let psi0 = state.to_vector(&m.phase).unwrap();
        let e0 = m.phase.e2.expectation(&psi0, &psi0);
        prop_assume!(e0.norm() > 1e-3);
        let traj = phase_trajectory(&state, &grid, &m.phase);
        prop_assume!(traj.is_ok());
        let traj = traj.unwrap();
        prop_assert!(rotation_law_residual(&traj, sign, omega) < 1e-10);
        for p in &traj {
            prop_assert!(p.exp_plus.norm() <= 1.0 + 1e-12);
            prop_assert!((p.exp_minus - p.exp_plus.conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn propagation_preserves_norm(t in -50.0f64..50.0, omega in 0.1f64..4.0) {
        let m = model(6, omega);
        let s: StateSpec = "0,0,0,+:1+0j;1,1,0,+:0.3-0.2j;0,2,-1,-:0+1j".parse().unwrap();
        let psi = propagate(&s, t, &m.phase).unwrap();
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((norm - 1.0).abs() < 1e-13);
    }
}

#[test]
fn full_period_is_minus_identity() {
    let omega = 1.7;
    let m = model(6, omega);
    let energies: Vec<f64> = (0..m.phase.dim())
        .map(|p| m.phase.label_at(p).0.energy(&m.fock.params))
        .collect();
    let psi: Vec<C64> = (0..m.phase.dim())
        .map(|k| C64::new(k as f64, 1.0))
        .collect();
    let out = propagate_vector(&psi, &energies, 2.0 * PI / omega);
    for (a, b) in out.iter().zip(&psi) {
        assert!((a + b).norm() < 1e-11 * b.norm().max(1.0));
    }
}

#[test]
fn vacuum_admixture_only_renormalizes() {
    let m = model(6, 1.0);
    let base: StateSpec = "0,0,0,+:1+0j;1,0,0,+:0.6+0.8j".parse().unwrap();
    let with_vac: StateSpec = "0,0,0,+:1+0j;1,0,0,+:0.6+0.8j;0,1,1,+:0+2j"
        .parse()
        .unwrap();
    let e = |s: &StateSpec| {
        let v = s.to_vector(&m.phase).unwrap();
        m.phase.e2.expectation(&v, &v)
    };
    // unnormalized amplitudes: norms^2 are 2 and 6
    let ratio = e(&with_vac) / e(&base);
    assert!((ratio - C64::new(2.0 / 6.0, 0.0)).norm() < 1e-14);
}

#[test]
fn eigenstate_has_no_phase() {
    let m = model(8, 1.0);
    let s: StateSpec = "2,1,0,+".parse().unwrap();
    let err = phase_trajectory(&s, &[0.0, 0.1], &m.phase).unwrap_err();
    assert!(matches!(err, EvolutionError::PhaseUndefined { .. }));
    assert!(err.to_string().contains("2,1,0,+"));
    let small = model(6, 1.0);
    assert!(matches!(
        phase_trajectory(&s, &[0.0], &small.phase),
        Err(EvolutionError::StateOutsideWindow { window: 4, .. })
    ));
}

#[test]
fn mixed_copies_are_rejected() {
    let m = model(6, 1.0);
    let s: StateSpec = "0,0,0,+;1,0,0,-".parse().unwrap();
    assert_eq!(
        phase_trajectory(&s, &[0.0], &m.phase),
        Err(EvolutionError::MixedBranch)
    );
}
