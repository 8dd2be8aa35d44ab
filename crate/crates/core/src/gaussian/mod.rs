//! Exact Gaussian-moment dynamics of the driven, damped resonator pair.
//!
//! The master equation maps Gaussian states to Gaussian states, and its
//! moment equations close at second order. The dynamics of
//! `(m, N, M, 1)` is therefore linear and is propagated with one matrix
//! exponential per evaluation time.

mod generator;
mod observables;
mod state;

pub use generator::{max_growth_rate, stability_spectrum, AffineGenerator, SecondMomentMap, AUGMENTED_DIM};
pub use observables::{observables, Observables, Ordering, ENERGY_FLOOR};
pub use state::{MomentState, PackedMoments, PhysicalityError, STATE_DIM};

use nalgebra::SVector;
use thiserror::Error;

use crate::model::{SystemParams, ValidationError};

/// Magnitude above which a moment is treated as having run away.
pub const OVERFLOW_LIMIT: f64 = 1e12;

/// Real parts at or above `-STABILITY_MARGIN` count as non-decaying.
pub const STABILITY_MARGIN: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("evolution time must be finite and non-negative (got {0})")]
    InvalidTime(f64),
    #[error("moment magnitude {magnitude:.3e} exceeds {OVERFLOW_LIMIT:.0e} at t = {time}")]
    NumericalOverflow { magnitude: f64, time: f64 },
}

/// The drift has an eigenvalue that does not decay, so no fixed point is
/// approached.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("no stationary state: slowest drift eigenvalue has real part {max_real_part:.6e}")]
pub struct NonStationary {
    pub max_real_part: f64,
}

pub fn build_generator(params: &SystemParams) -> Result<AffineGenerator, ValidationError> {
    AffineGenerator::new(params)
}

/// Exact solution of the moment equations after time `t`.
pub fn evolve(state: &MomentState, gen: &AffineGenerator, t: f64) -> Result<MomentState, DynamicsError> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(DynamicsError::InvalidTime(t));
    }
    if t == 0.0 {
        return Ok(*state);
    }
    let propagator = (gen.augmented() * t).exp();
    let x0 = state.pack();
    let mut x = SVector::<f64, AUGMENTED_DIM>::zeros();
    x.fixed_rows_mut::<STATE_DIM>(0).copy_from(&x0);
    x[STATE_DIM] = 1.0;
    let y = propagator * x;
    let out = MomentState::unpack(&y.fixed_rows::<STATE_DIM>(0).into_owned());
    let magnitude =
        out.pack().iter().fold(0.0f64, |acc, v| if v.is_finite() { acc.max(v.abs()) } else { f64::INFINITY });
    if magnitude > OVERFLOW_LIMIT {
        return Err(DynamicsError::NumericalOverflow { magnitude, time: t });
    }
    Ok(out)
}

/// Unique fixed point of the moment equations, if every drift eigenvalue
/// decays.
pub fn stationary_state(gen: &AffineGenerator) -> Result<MomentState, NonStationary> {
    let max_real_part = max_growth_rate(gen);
    if max_real_part >= -STABILITY_MARGIN {
        return Err(NonStationary { max_real_part });
    }
    // The second-moment spectrum consists of pairwise sums of drift
    // eigenvalues, so the full system is invertible here.
    let x = gen.linear_part().lu().solve(&(-gen.constant_part())).ok_or(NonStationary { max_real_part })?;
    Ok(MomentState::unpack(&x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DriveOrder;
    use num_complex::Complex64 as C64;

    fn hole_params() -> SystemParams {
        SystemParams::resonant(1e-4, 0.02, 0.25, DriveOrder::Linear)
    }

    #[test]
    fn zero_time_is_identity() {
        let g = build_generator(&hole_params()).unwrap();
        let s = MomentState::coherent(C64::new(0.1, 0.2), C64::new(-0.3, 0.0));
        assert_eq!(evolve(&s, &g, 0.0).unwrap(), s);
    }

    #[test]
    fn negative_time_rejected() {
        let g = build_generator(&hole_params()).unwrap();
        assert_eq!(evolve(&MomentState::vacuum(), &g, -1.0), Err(DynamicsError::InvalidTime(-1.0)));
    }

    #[test]
    fn single_mode_linear_drive_closed_form() {
        let amp = 0.05;
        let g = build_generator(&SystemParams::resonant(0.3, 0.0, amp, DriveOrder::Linear)).unwrap();
        for t in [0.1, 1.0, 4.0, 20.0] {
            let s = evolve(&MomentState::vacuum(), &g, t).unwrap();
            let want = C64::new(0.0, -2.0 * amp) * (1.0 - (-t / 2.0f64).exp());
            assert!((s.mean()[0] - want).norm() < 1e-14, "t={t}");
            assert_eq!(s.mean()[1], C64::from(0.0));
            // coherent at all times
            assert!(s.normal_fluctuations().norm() < 1e-14);
        }
    }

    #[test]
    fn hole_fixed_point_is_coherent_with_closed_form_amplitude() {
        let g = build_generator(&hole_params()).unwrap();
        let s = stationary_state(&g).unwrap();
        assert!((s.mean()[0].norm() - 0.25 * 0.5e-4 / (4e-4 + 0.25e-4)).abs() < 1e-12);
        assert!(s.normal_fluctuations().norm() < 1e-10);
        assert!(s.anomalous_fluctuations().norm() < 1e-10);
    }

    #[test]
    fn parametric_single_mode_occupation() {
        let xi: f64 = 0.4;
        let p = SystemParams::resonant(1.0, 0.0, 0.0, DriveOrder::Parametric).with_xi(xi);
        let s = stationary_state(&build_generator(&p).unwrap()).unwrap();
        let want = (xi * xi / 2.0) / (1.0 - xi * xi);
        assert!((s.normal()[(0, 0)].re - want).abs() < 1e-14);
        assert!((want - 0.09524).abs() < 1e-5);
        assert_eq!(*s.mean(), nalgebra::Vector2::zeros());
    }

    #[test]
    fn threshold_is_non_stationary() {
        let p = SystemParams::resonant(0.0, 0.0, 0.25, DriveOrder::Parametric);
        let err = stationary_state(&build_generator(&p).unwrap()).unwrap_err();
        assert!(err.max_real_part.abs() < 1e-12);
        // an undamped, undriven mode 2 never settles either
        let p = SystemParams::resonant(0.0, 0.0, 0.1, DriveOrder::Linear);
        assert!(stationary_state(&build_generator(&p).unwrap()).is_err());
    }

    #[test]
    fn runaway_reports_overflow() {
        let p = SystemParams::resonant(1e-4, 0.0, 0.5, DriveOrder::Parametric);
        let g = build_generator(&p).unwrap();
        let err = evolve(&MomentState::vacuum(), &g, 100.0).unwrap_err();
        assert!(matches!(err, DynamicsError::NumericalOverflow { .. }));
    }

    #[test]
    fn evolution_converges_to_fixed_point() {
        let p = SystemParams::from_frequencies(0.0, 0.5, 0.2, 1.0, 0.4, 0.3, 0.2, DriveOrder::Parametric);
        let g = build_generator(&p).unwrap();
        let s = evolve(&MomentState::vacuum(), &g, 400.0).unwrap();
        let fixed = stationary_state(&g).unwrap();
        assert!((s.pack() - fixed.pack()).amax() < 1e-12);
        assert!(g.rate(&fixed).pack().amax() < 1e-14);
    }
}
