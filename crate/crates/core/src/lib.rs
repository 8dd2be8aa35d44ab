//! Simulator for two coupled, damped quantum resonators with a linear
//! (𝔭 = 1) or degenerate parametric (𝔭 = 2) drive on resonator 1.
//!
//! Resonator 1 plays the part of a broad atomic transition and resonator 2
//! that of a narrow one, with the coupling λ standing in for the control
//! field. Sweeping the drive frequency traces out absorptive (energy) and
//! dispersive (quadrature correlation) curves that show a transparency
//! hole, an Autler–Townes doublet at strong coupling, and Mollow-like
//! sidebands under parametric drive.
//!
//! * [`model`]: parameters and rotating-frame quantities.
//! * [`gaussian`]: exact moment propagation, fixed points, observables.
//! * [`analytic`]: closed-form amplitudes, rates and thresholds.
//! * [`fock`]: brute-force density-matrix reference.
//! * [`sweep`]: detuning sweeps and time series.

pub mod analytic;
pub mod fock;
pub mod gaussian;
pub mod model;
pub mod sweep;

pub use model::{DerivedFrame, DriveOrder, SystemParams, ValidationError};

use thiserror::Error;

/// Any failure surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Dynamics(#[from] gaussian::DynamicsError),
    #[error(transparent)]
    NonStationary(#[from] gaussian::NonStationary),
    #[error(transparent)]
    Analytic(#[from] analytic::AnalyticError),
    #[error(transparent)]
    Fock(#[from] fock::FockError),
    #[error(transparent)]
    Sweep(#[from] sweep::SweepError),
}
