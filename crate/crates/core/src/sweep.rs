//! Absorptive and dispersive response over detuning grids and time lists.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{relaxation_rate, AnalyticError};
use crate::gaussian::{
    build_generator, evolve, observables, stationary_state, DynamicsError, MomentState, NonStationary, Observables,
    Ordering, ENERGY_FLOOR,
};
use crate::model::{SystemParams, ValidationError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("detuning grid is empty")]
    EmptyGrid,
    #[error("detuning grid must be strictly increasing (index {0})")]
    NotIncreasing(usize),
    #[error("normalization needs a grid point at delta = 0 (nearest is {0})")]
    MissingZero(f64),
    #[error("cannot normalize: e1 at delta = 0 is {0:.3e}")]
    NormalizationUndefined(f64),
    #[error("at delta = {delta}: {source}")]
    NonStationary { delta: f64, source: NonStationary },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("time list is empty")]
    EmptyTimes,
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}

/// When to read off the observables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Evaluation {
    AtTime(f64),
    Stationary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub evaluation: Evaluation,
    /// Divide e1 by its value at Δ = 0.
    pub normalize: bool,
    pub ordering: Ordering,
    /// Initial state for time evaluation; two-mode vacuum by default.
    pub initial: MomentState,
}

impl SweepOptions {
    pub fn new(evaluation: Evaluation) -> Self {
        Self { evaluation, normalize: false, ordering: Ordering::Normal, initial: MomentState::vacuum() }
    }

    pub fn normalized(mut self) -> Self {
        self.normalize = true;
        self
    }
}

/// Resonator observables tabulated over Δ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseCurve {
    #[serde(rename = "delta")]
    pub delta_grid: Vec<f64>,
    pub e1: Vec<f64>,
    pub e1_normalized: Option<Vec<f64>>,
    pub sin2theta1: Vec<Option<f64>>,
    pub e2: Vec<f64>,
    pub sin2theta2: Vec<Option<f64>>,
    /// Evaluation time; `None` for stationary curves.
    pub t_eval: Option<f64>,
    pub stationary: bool,
}

impl ResponseCurve {
    pub fn len(&self) -> usize {
        self.delta_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta_grid.is_empty()
    }

    /// Indices of strict interior local maxima of `values`.
    pub fn local_maxima(values: &[f64]) -> Vec<usize> {
        (1..values.len().saturating_sub(1))
            .filter(|&i| values[i] > values[i - 1] && values[i] > values[i + 1])
            .collect()
    }

    /// Indices of strict interior local minima of `values`.
    pub fn local_minima(values: &[f64]) -> Vec<usize> {
        (1..values.len().saturating_sub(1))
            .filter(|&i| values[i] < values[i - 1] && values[i] < values[i + 1])
            .collect()
    }

    /// Index of the grid point closest to Δ = 0.
    pub fn nearest_zero(&self) -> usize {
        nearest_zero(&self.delta_grid)
    }
}

fn nearest_zero(grid: &[f64]) -> usize {
    grid.iter().enumerate().min_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).map(|(i, _)| i).unwrap_or(0)
}

/// `steps` evenly spaced points on `[min, max]`. Symmetric ranges contain
/// Δ = 0 exactly when `steps` is odd.
pub fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let last = (steps - 1) as f64;
            (0..steps).map(|i| (min * (last - i as f64) + max * i as f64) / last).collect()
        }
    }
}

fn check_grid(grid: &[f64]) -> Result<(), SweepError> {
    if grid.is_empty() {
        return Err(SweepError::EmptyGrid);
    }
    if let Some(i) = (1..grid.len()).find(|&i| grid[i].partial_cmp(&grid[i - 1]) != Some(std::cmp::Ordering::Greater)) {
        return Err(SweepError::NotIncreasing(i));
    }
    Ok(())
}

fn evaluate(params: &SystemParams, opts: &SweepOptions) -> Result<(Observables, Observables), SweepError> {
    let gen = build_generator(params)?;
    let state = match opts.evaluation {
        Evaluation::Stationary => {
            stationary_state(&gen).map_err(|source| SweepError::NonStationary { delta: params.detuning(), source })?
        }
        Evaluation::AtTime(t) => evolve(&opts.initial, &gen, t)?,
    };
    Ok((observables(&state, 1, opts.ordering), observables(&state, 2, opts.ordering)))
}

/// Sets ν = ω₁ + ΔΓ₁ for each grid point and records both resonators'
/// observables. Grid points are evaluated in parallel; output order
/// follows the grid.
pub fn sweep_detuning(base: &SystemParams, grid: &[f64], opts: &SweepOptions) -> Result<ResponseCurve, SweepError> {
    base.validate()?;
    check_grid(grid)?;
    let zero = nearest_zero(grid);
    if opts.normalize && grid[zero].abs() > 1e-12 {
        return Err(SweepError::MissingZero(grid[zero]));
    }

    let points: Vec<(Observables, Observables)> =
        grid.par_iter().map(|&delta| evaluate(&base.with_detuning(delta), opts)).collect::<Result<_, _>>()?;

    let e1: Vec<f64> = points.iter().map(|(o, _)| o.energy).collect();
    let e1_normalized = if opts.normalize {
        let reference = e1[zero];
        if reference < ENERGY_FLOOR {
            return Err(SweepError::NormalizationUndefined(reference));
        }
        Some(e1.iter().map(|e| e / reference).collect())
    } else {
        None
    };
    let (t_eval, stationary) = match opts.evaluation {
        Evaluation::AtTime(t) => (Some(t), false),
        Evaluation::Stationary => (None, true),
    };
    Ok(ResponseCurve {
        delta_grid: grid.to_vec(),
        e1,
        e1_normalized,
        sin2theta1: points.iter().map(|(o, _)| o.sin2theta).collect(),
        e2: points.iter().map(|(_, o)| o.energy).collect(),
        sin2theta2: points.iter().map(|(_, o)| o.sin2theta).collect(),
        t_eval,
        stationary,
    })
}

/// Observables of both resonators at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimePoint {
    pub t: f64,
    pub mode1: Observables,
    pub mode2: Observables,
}

/// Evolves the vacuum to each listed time (independently, so the list needs
/// no ordering).
pub fn time_series(base: &SystemParams, times: &[f64], ordering: Ordering) -> Result<Vec<TimePoint>, SweepError> {
    time_series_from(base, &MomentState::vacuum(), times, ordering)
}

pub fn time_series_from(
    base: &SystemParams,
    initial: &MomentState,
    times: &[f64],
    ordering: Ordering,
) -> Result<Vec<TimePoint>, SweepError> {
    if times.is_empty() {
        return Err(SweepError::EmptyTimes);
    }
    let gen = build_generator(base)?;
    times
        .iter()
        .map(|&t| {
            let s = evolve(initial, &gen, t)?;
            Ok(TimePoint { t, mode1: observables(&s, 1, ordering), mode2: observables(&s, 2, ordering) })
        })
        .collect()
}

/// Relaxation time τ_R (linear drive) or the weak-regime spectral
/// relaxation time (parametric drive) of `params`.
pub fn default_evaluation_time(params: &SystemParams) -> Result<f64, SweepError> {
    Ok(relaxation_rate(params)?.time)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::e1_min;
    use crate::model::DriveOrder;

    fn hole_params() -> SystemParams {
        SystemParams::resonant(1e-4, 0.02, 0.25, DriveOrder::Linear)
    }

    #[test]
    fn linspace_hits_zero() {
        let g = linspace(-0.8, 0.8, 801);
        assert_eq!(g.len(), 801);
        assert_eq!(g[400], 0.0);
        assert_eq!((g[0], g[800]), (-0.8, 0.8));
        assert_eq!(linspace(1.0, 2.0, 1), vec![1.0]);
    }

    #[test]
    fn grid_checks() {
        let o = SweepOptions::new(Evaluation::Stationary);
        assert_eq!(sweep_detuning(&hole_params(), &[], &o), Err(SweepError::EmptyGrid));
        assert_eq!(sweep_detuning(&hole_params(), &[0.0, 0.0], &o), Err(SweepError::NotIncreasing(1)));
        let o = o.normalized();
        assert!(matches!(sweep_detuning(&hole_params(), &[0.1, 0.2], &o), Err(SweepError::MissingZero(_))));
    }

    #[test]
    fn hole_at_resonance() {
        let grid = linspace(-0.8, 0.8, 161);
        let c = sweep_detuning(&hole_params(), &grid, &SweepOptions::new(Evaluation::Stationary)).unwrap();
        let mid = c.nearest_zero();
        assert!(ResponseCurve::local_minima(&c.e1).contains(&mid));
        assert!((c.e1[mid] - e1_min(&hole_params()).unwrap()).abs() < 1e-12);
        assert_eq!(ResponseCurve::local_maxima(&c.e1).len(), 2);
        assert!(c.stationary && c.t_eval.is_none());
    }

    #[test]
    fn undriven_curve_is_zero() {
        let p = SystemParams::resonant(1e-4, 0.0, 0.0, DriveOrder::Linear);
        let c = sweep_detuning(&p, &linspace(-1.0, 1.0, 11), &SweepOptions::new(Evaluation::AtTime(3.0))).unwrap();
        assert!(c.e1.iter().chain(&c.e2).all(|&e| e == 0.0));
        assert!(c.sin2theta1.iter().all(Option::is_none));
    }

    #[test]
    fn normalization_undefined_for_vacuum() {
        let p = SystemParams::resonant(1e-4, 0.0, 0.0, DriveOrder::Linear);
        let o = SweepOptions::new(Evaluation::AtTime(3.0)).normalized();
        assert!(matches!(sweep_detuning(&p, &linspace(-1.0, 1.0, 11), &o), Err(SweepError::NormalizationUndefined(_))));
    }

    #[test]
    fn stationary_above_threshold_fails() {
        let p = SystemParams::resonant(1e-4, 5e-5, 0.0, DriveOrder::Parametric).with_xi(1.001);
        let err = sweep_detuning(&p, &[0.0], &SweepOptions::new(Evaluation::Stationary)).unwrap_err();
        assert!(matches!(err, SweepError::NonStationary { .. }));
    }

    #[test]
    fn degenerate_curve_is_symmetric() {
        let grid = linspace(-0.8, 0.8, 81);
        let c = sweep_detuning(&hole_params(), &grid, &SweepOptions::new(Evaluation::Stationary)).unwrap();
        for i in 0..grid.len() {
            let j = grid.len() - 1 - i;
            assert!((c.e1[i] - c.e1[j]).abs() <= 1e-10 * c.e1[i]);
        }
    }

    #[test]
    fn time_series_starts_in_vacuum() {
        let ts = time_series(&hole_params(), &[0.0, 10.0], Ordering::Normal).unwrap();
        assert_eq!(ts[0].mode1.energy, 0.0);
        assert_eq!(ts[0].mode2.energy, 0.0);
        assert!(ts[1].mode1.energy > 0.0);
        assert_eq!(time_series(&hole_params(), &[], Ordering::Normal), Err(SweepError::EmptyTimes));
    }

    #[test]
    fn default_time_is_relaxation_time() {
        assert!((default_evaluation_time(&hole_params()).unwrap() - 1.0 / 8.5e-4).abs() < 1e-9);
        let strong = SystemParams::resonant(1e-4, 5e-5, 0.0, DriveOrder::Parametric).with_xi(1.0003);
        assert!(matches!(default_evaluation_time(&strong), Err(SweepError::Analytic(_))));
    }
}
