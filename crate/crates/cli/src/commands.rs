//! Subcommand bodies. Each returns the complete output text, so nothing is
//! written unless the whole computation succeeded.

use std::fmt::Write as _;

use qho_phase::checks::{format_report, run_verification, Model};
use qho_phase::evolution::{phase_trajectory, time_grid, EvolutionError, StateSpec};
use qho_phase::phase1d::{EdgeMode, Sign};
use qho_phase::phase3d::PhaseOperatorSet;
use qho_phase::Error;
use thiserror::Error as ThisError;

use crate::config::RunConfig;

#[derive(Debug, ThisError)]
pub enum CommandError {
    /// The request itself is inconsistent (exit status 2).
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Compute(#[from] Error),
}

impl CommandError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CommandError::Config(_) => 2,
            CommandError::Compute(_) => 1,
        }
    }
}

impl From<EvolutionError> for CommandError {
    fn from(e: EvolutionError) -> Self {
        match e {
            EvolutionError::StateOutsideWindow { .. }
            | EvolutionError::MixedBranch
            | EvolutionError::InvalidGrid(_) => CommandError::Config(e.to_string()),
            other => CommandError::Compute(other.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutput {
    pub text: String,
    /// False when any verification check failed.
    pub passed: bool,
}

impl CommandOutput {
    fn ok(text: String) -> Self {
        Self { text, passed: true }
    }
}

fn build(cfg: &RunConfig, n_max: u32, mode: EdgeMode) -> Result<Model, CommandError> {
    Ok(Model::build(n_max, cfg.params, mode)?)
}

pub fn verify(cfg: &RunConfig) -> Result<CommandOutput, CommandError> {
    let model = build(cfg, cfg.n_max, cfg.mode)?;
    let reports = run_verification(&model);
    Ok(CommandOutput {
        text: format_report(&model, &reports),
        passed: reports.iter().all(|r| r.pass()),
    })
}

pub const TRAJECTORY_HEADER: &str =
    "t,re_exp_plus,im_exp_plus,abs_exp_plus,phi_unwound,tau,j,sigma,branch";

pub fn trajectory(cfg: &RunConfig) -> Result<CommandOutput, CommandError> {
    let state = cfg
        .state
        .clone()
        .unwrap_or_else(|| StateSpec::two_level(Sign::Plus, 0.0));
    let grid = time_grid(cfg.t_max, cfg.dt)?;
    state.check_window(cfg.n_max as i64 - 2)?;
    let model = build(cfg, cfg.n_max, cfg.mode)?;
    let traj = phase_trajectory(&state, &grid, &model.phase)?;
    let mut out = String::with_capacity(160 * traj.len());
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for p in &traj {
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{},{}",
            p.t,
            p.exp_plus.re,
            p.exp_plus.im,
            p.exp_plus.norm(),
            p.phi_unwound,
            p.tau,
            p.winding.j,
            p.winding.sigma.symbol(),
            p.winding.branch.symbol()
        );
    }
    Ok(CommandOutput::ok(out))
}

/// One line per shell: `N, E/ω, multiplicity, [l, …]`.
pub fn spectrum(cfg: &RunConfig) -> Result<CommandOutput, CommandError> {
    let model = build(cfg, cfg.n_max, cfg.mode)?;
    let mut out = String::new();
    for row in model.spherical.degeneracy_table() {
        let ls: Vec<String> = row.l_values.iter().map(u32::to_string).collect();
        let _ = writeln!(
            out,
            "{}, {}, {}, [{}]",
            row.shell,
            row.energy_over_omega,
            row.multiplicity,
            ls.join(",")
        );
    }
    Ok(CommandOutput::ok(out))
}

pub const SCAN_HEADER: &str = "n_max,open_defect,open_interior_defect,cyclic_defect";

/// Unitarity defect of the doubled phase exponential against `n_max`.
pub fn unitarity_scan(cfg: &RunConfig) -> Result<CommandOutput, CommandError> {
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for &n in &cfg.n_max_list {
        let open = build(cfg, n, EdgeMode::Open)?;
        let cyclic = PhaseOperatorSet::from_z_pair(
            &open.spherical,
            cfg.params,
            open.phase.zpair.clone(),
            EdgeMode::Cyclic,
        );
        let mask = open.phase.interior_mask();
        let _ = writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e}",
            n,
            open.phase.unitarity_defect(None),
            open.phase.unitarity_defect(Some(&mask)),
            cyclic.unitarity_defect(None)
        );
    }
    Ok(CommandOutput::ok(out))
}
