use eit_core::analytic::{critical_xi, e1_min, relaxation_rate, stationary_amplitudes};
use eit_core::gaussian::Ordering;
use eit_core::sweep::{linspace, sweep_detuning, time_series, Evaluation, ResponseCurve, SweepError, SweepOptions};
use eit_core::{DriveOrder, SystemParams};

fn hole_params() -> SystemParams {
    SystemParams::resonant(1e-4, 2e-2, 0.25, DriveOrder::Linear)
}

fn at_relaxation_time(p: &SystemParams) -> SweepOptions {
    SweepOptions::new(Evaluation::AtTime(relaxation_rate(p).unwrap().time))
}

#[test]
fn hole_opens_by_relaxation_time() {
    let p = hole_params();
    let c = sweep_detuning(&p, &linspace(-0.8, 0.8, 801), &at_relaxation_time(&p)).unwrap();
    let mid = c.nearest_zero();
    assert!(ResponseCurve::local_minima(&c.e1).contains(&mid));
    // after one relaxation time the hole is open but well above its floor
    let floor = e1_min(&p).unwrap();
    let uncoupled = (p.drive_amp / (p.gamma1 / 2.0)).powi(2);
    assert!(c.e1[mid] > 10.0 * floor && c.e1[mid] < uncoupled / 4.0, "{}", c.e1[mid]);
}

#[test]
fn shifted_hole_depth_matches_amplitude() {
    let p = hole_params().with_splitting(3.0);
    let grid = linspace(2.2, 3.8, 801);
    let c = sweep_detuning(&p, &grid, &SweepOptions::new(Evaluation::Stationary)).unwrap();
    let i = grid.iter().position(|&d| d == 3.0).unwrap();
    assert!(ResponseCurve::local_minima(&c.e1).contains(&i));
    let alpha = stationary_amplitudes(&p.with_detuning(3.0)).unwrap().alpha;
    assert!((c.e1[i] - alpha.norm_sqr()).abs() < 1e-15);
}

#[test]
fn doublet_is_symmetric() {
    let p = SystemParams::resonant(1e-4, 1.0, 0.25, DriveOrder::Linear);
    let c = sweep_detuning(&p, &linspace(-3.0, 3.0, 1201), &SweepOptions::new(Evaluation::Stationary)).unwrap();
    let peaks = ResponseCurve::local_maxima(&c.e1);
    assert_eq!(peaks.len(), 2);
    assert!((c.e1[peaks[0]] - c.e1[peaks[1]]).abs() < 1e-12);
    assert!((c.delta_grid[peaks[1]] - 1.0).abs() <= 0.05);
}

#[test]
fn dispersive_curve_is_odd_in_detuning() {
    let p = hole_params();
    let c = sweep_detuning(&p, &linspace(-0.8, 0.8, 161), &SweepOptions::new(Evaluation::Stationary)).unwrap();
    let n = c.len();
    for i in 0..n {
        let (a, b) = (c.sin2theta1[i].unwrap(), c.sin2theta1[n - 1 - i].unwrap());
        assert!((a + b).abs() < 1e-9, "{i}: {a} {b}");
        assert!((c.e1[i] - c.e1[n - 1 - i]).abs() < 1e-15);
    }
}

#[test]
fn sweeps_are_deterministic() {
    let p = hole_params();
    let grid = linspace(-0.8, 0.8, 401);
    let opts = at_relaxation_time(&p).normalized();
    let a = sweep_detuning(&p, &grid, &opts).unwrap();
    let b = sweep_detuning(&p, &grid, &opts).unwrap();
    assert_eq!(a, b);
}

#[test]
fn grid_refinement_keeps_shared_points() {
    let p = hole_params();
    let opts = SweepOptions::new(Evaluation::Stationary);
    let coarse = sweep_detuning(&p, &linspace(-0.8, 0.8, 81), &opts).unwrap();
    let fine = sweep_detuning(&p, &linspace(-0.8, 0.8, 161), &opts).unwrap();
    for i in 0..coarse.len() {
        assert!((coarse.e1[i] - fine.e1[2 * i]).abs() <= 1e-14 * coarse.e1[i].max(1e-3));
    }
}

#[test]
fn undriven_sweep_is_dark() {
    let p = SystemParams::resonant(1e-4, 2e-2, 0.0, DriveOrder::Linear);
    let c = sweep_detuning(&p, &linspace(-0.8, 0.8, 21), &SweepOptions::new(Evaluation::Stationary)).unwrap();
    assert!(c.e1.iter().chain(&c.e2).all(|&e| e == 0.0));
    assert!(c.sin2theta1.iter().all(Option::is_none));
    let err = sweep_detuning(&p, &linspace(-0.8, 0.8, 21), &SweepOptions::new(Evaluation::Stationary).normalized());
    assert!(matches!(err, Err(SweepError::NormalizationUndefined(_))));
}

#[test]
fn strong_regime_energy_grows_through_relaxation_window() {
    let base = SystemParams::resonant(1e-4, 5e-5, 0.0, DriveOrder::Parametric);
    let xi_c = critical_xi(&base).unwrap().xi_c;
    let tau = relaxation_rate(&base.with_xi(xi_c - 1.5e-4)).unwrap().time;
    let strong = base.with_xi(xi_c + 1.5e-4);
    let ts = time_series(&strong, &[0.8 * tau, tau, 1.1 * tau], Ordering::Normal).unwrap();
    assert!(ts[0].mode1.energy < ts[1].mode1.energy && ts[1].mode1.energy < ts[2].mode1.energy);
    // above threshold no stationary curve exists
    let err = sweep_detuning(&strong, &[0.0], &SweepOptions::new(Evaluation::Stationary));
    assert!(matches!(err, Err(SweepError::NonStationary { .. })));
}
