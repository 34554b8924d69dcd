//! Phase and time operators of the harmonic oscillator on truncated and
//! doubled Fock spaces.
//!
//! Build order: [`fock::FockOperators`] on the Cartesian number basis,
//! [`spherical::build_spherical`] for the `|n,l,m⟩` basis, then
//! [`phase3d::PhaseOperatorSet`] on the doubled space. [`checks::Model`]
//! bundles all three.

pub mod checks;
pub mod evolution;
pub mod fock;
pub mod io;
pub mod par;
pub mod phase1d;
pub mod phase3d;
pub mod sparse;
pub mod spherical;

pub use num_complex::Complex64 as C64;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Fock(#[from] fock::FockError),
    #[error(transparent)]
    Spherical(#[from] spherical::SphericalError),
    #[error(transparent)]
    Phase(#[from] phase3d::PhaseError),
    #[error(transparent)]
    Evolution(#[from] evolution::EvolutionError),
}
