//! Closed-form results: stationary coherent amplitudes, relaxation rate,
//! parametric threshold and the depth of the transparency hole.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussian::{build_generator, max_growth_rate, STABILITY_MARGIN};
use crate::model::{DriveOrder, SystemParams, ValidationError};

/// Half-width of the band around ξ_c classified as critical.
pub const CRITICAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("requires drive order {expected}, got {actual}")]
    WrongOrder { expected: u32, actual: u32 },
    #[error("threshold formula needs degenerate resonators (omega2 - omega1 = {0})")]
    NonDegenerate(f64),
    #[error("no relaxation time: parametric drive is at or above threshold ({0})")]
    NoRelaxation(String),
}

fn require_order(params: &SystemParams, order: DriveOrder) -> Result<(), AnalyticError> {
    params.validate()?;
    if params.order != order {
        return Err(AnalyticError::WrongOrder { expected: order.power(), actual: params.order.power() });
    }
    Ok(())
}

/// Stationary coherent amplitudes `|α⟩₁|β⟩₂` under linear drive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryAmplitudes {
    pub alpha: C64,
    pub beta: C64,
}

/// `α = −iϜΛ₂/(λ² + Λ₁Λ₂)`, `β = −λϜ/(λ² + Λ₁Λ₂)`.
pub fn stationary_amplitudes(params: &SystemParams) -> Result<StationaryAmplitudes, AnalyticError> {
    require_order(params, DriveOrder::Linear)?;
    let f = params.derive_frame();
    let denom = params.lambda * params.lambda + f.decay1 * f.decay2;
    let alpha = C64::new(0.0, -params.drive_amp) * f.decay2 / denom;
    let beta = C64::from(-params.lambda * params.drive_amp) / denom;
    Ok(StationaryAmplitudes { alpha, beta })
}

/// Relaxation rate κ and relaxation time τ = 1/κ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Relaxation {
    pub rate: f64,
    pub time: f64,
}

/// For the linear drive, `κ = 2λ²/Γ₁ + Γ₂/2`. For the parametric drive
/// below threshold, κ is the slowest decay rate of the drift spectrum.
pub fn relaxation_rate(params: &SystemParams) -> Result<Relaxation, AnalyticError> {
    params.validate()?;
    let rate = match params.order {
        DriveOrder::Linear => 2.0 * params.lambda * params.lambda / params.gamma1 + params.gamma2 / 2.0,
        DriveOrder::Parametric => {
            if params.is_degenerate() {
                let regime = classify_regime(params)?;
                if regime.kind != RegimeKind::Weak {
                    return Err(AnalyticError::NoRelaxation(format!("{regime}")));
                }
            }
            let growth = max_growth_rate(&build_generator(params)?);
            if growth >= -STABILITY_MARGIN {
                return Err(AnalyticError::NoRelaxation(format!("max Re(spectrum) = {growth:.3e}")));
            }
            -growth
        }
    };
    Ok(Relaxation { rate, time: 1.0 / rate })
}

/// Parametric threshold in rescaled (ξ) and absolute (Ϝ) drive units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalDrive {
    pub xi_c: f64,
    pub drive_amp_c: f64,
}

/// Threshold of the degenerate parametric drive:
/// `ξ_c = 1 + 4λ²/(Γ₁Γ₂)` for `λ < Γ₂/2`, otherwise `ξ_c = 1 + Γ₂/Γ₁`.
///
/// The formula is the resonant (Δ = 0) threshold of degenerate resonators;
/// detuned or non-degenerate stability is decided by [`stationary_state`]
/// instead.
///
/// [`stationary_state`]: crate::gaussian::stationary_state
pub fn critical_xi(params: &SystemParams) -> Result<CriticalDrive, AnalyticError> {
    params.validate()?;
    if !params.is_degenerate() {
        return Err(AnalyticError::NonDegenerate(params.epsilon));
    }
    let (g1, g2, lam) = (params.gamma1, params.gamma2, params.lambda);
    // Γ₂ = 0 always takes the second branch, so no division by zero.
    let xi_c = if lam < g2 / 2.0 { 1.0 + 4.0 * lam * lam / (g1 * g2) } else { 1.0 + g2 / g1 };
    Ok(CriticalDrive { xi_c, drive_amp_c: xi_c * g1 / 4.0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeKind {
    Weak,
    Critical,
    Strong,
}

impl std::fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RegimeKind::Weak => "weak",
            RegimeKind::Critical => "critical",
            RegimeKind::Strong => "strong",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub kind: RegimeKind,
    pub xi: f64,
    pub xi_c: f64,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (xi = {}, xi_c = {})", self.kind, self.xi, self.xi_c)
    }
}

pub fn classify_regime(params: &SystemParams) -> Result<Regime, AnalyticError> {
    require_order(params, DriveOrder::Parametric)?;
    let CriticalDrive { xi_c, .. } = critical_xi(params)?;
    let xi = params.xi();
    let kind = if (xi - xi_c).abs() <= CRITICAL_TOLERANCE {
        RegimeKind::Critical
    } else if xi < xi_c {
        RegimeKind::Weak
    } else {
        RegimeKind::Strong
    };
    Ok(Regime { kind, xi, xi_c })
}

/// Resonator-1 energy at the bottom of the transparency hole,
/// `[2ϜΓ₂/(4λ² + Γ₁Γ₂)]²`.
pub fn e1_min(params: &SystemParams) -> Result<f64, AnalyticError> {
    require_order(params, DriveOrder::Linear)?;
    let (g1, g2, lam) = (params.gamma1, params.gamma2, params.lambda);
    let denom = 4.0 * lam * lam + g1 * g2;
    if denom == 0.0 {
        // λ = Γ₂ = 0: mode 2 is inert and the hole disappears
        return Ok((2.0 * params.drive_amp / g1).powi(2));
    }
    Ok((2.0 * params.drive_amp * g2 / denom).powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::stationary_state;
    use proptest::prelude::*;

    fn hole_params() -> SystemParams {
        SystemParams::resonant(1e-4, 0.02, 0.25, DriveOrder::Linear)
    }

    #[test]
    fn decoupled_amplitudes() {
        let p = SystemParams::from_frequencies(0.0, 1.0, 0.3, 1.0, 0.1, 0.0, 0.2, DriveOrder::Linear);
        let amps = stationary_amplitudes(&p).unwrap();
        let want = C64::new(0.0, -0.2) / p.derive_frame().decay1;
        assert!((amps.alpha - want).norm() < 1e-15);
        assert_eq!(amps.beta, C64::from(0.0));
    }

    #[test]
    fn hole_params_amplitude() {
        let amps = stationary_amplitudes(&hole_params()).unwrap();
        let want = (0.25 * 1e-4 / 2.0) / (4e-4 + 1e-4 / 4.0);
        assert!((amps.alpha.norm() - want).abs() < 1e-15);
        assert!((want - 0.029412).abs() < 1e-6);
    }

    #[test]
    fn amplitudes_need_linear_drive() {
        let mut p = hole_params();
        p.order = DriveOrder::Parametric;
        assert_eq!(stationary_amplitudes(&p), Err(AnalyticError::WrongOrder { expected: 1, actual: 2 }));
        assert!(matches!(e1_min(&p), Err(AnalyticError::WrongOrder { .. })));
    }

    #[test]
    fn hole_params_relaxation() {
        let r = relaxation_rate(&hole_params()).unwrap();
        assert!((r.rate - 8.5e-4).abs() < 1e-16);
        assert!((r.time - 1176.470588).abs() < 1e-5);
        let spectral = -max_growth_rate(&build_generator(&hole_params()).unwrap());
        assert!((r.rate - spectral).abs() / spectral < 0.02);
    }

    #[test]
    fn uncoupled_relaxation_is_half_gamma2() {
        let r = relaxation_rate(&SystemParams::resonant(0.3, 0.0, 0.1, DriveOrder::Linear)).unwrap();
        assert_eq!(r.rate, 0.15);
    }

    #[test]
    fn parametric_relaxation_only_below_threshold() {
        let base = SystemParams::resonant(1e-4, 5e-5, 0.0, DriveOrder::Parametric);
        let xi_c = critical_xi(&base).unwrap().xi_c;
        let weak = relaxation_rate(&base.with_xi(xi_c - 1.5e-4)).unwrap();
        // Q-quadrature subsystem: rate = −trace/2 = (g₁ + g₂ − 2Ϝ)/2
        assert!((weak.rate - 3.75e-5).abs() < 1e-12);
        for xi in [xi_c, xi_c + 1.5e-4] {
            assert!(matches!(relaxation_rate(&base.with_xi(xi)), Err(AnalyticError::NoRelaxation(_))));
        }
    }

    #[test]
    fn threshold_branches() {
        let p = |g2, lam| SystemParams::resonant(g2, lam, 0.0, DriveOrder::Parametric);
        assert_eq!(critical_xi(&p(1e-4, 0.0)).unwrap().xi_c, 1.0);
        assert_eq!(critical_xi(&p(0.0, 0.0)).unwrap().xi_c, 1.0);
        assert_eq!(critical_xi(&p(1e-4, 5e-5)).unwrap().xi_c, 1.0 + 1e-4);
        assert!((critical_xi(&p(1e-4, 1e-5)).unwrap().xi_c - (1.0 + 4e-6)).abs() < 1e-15);
        let c = critical_xi(&p(1e-4, 5e-5)).unwrap();
        assert!((c.drive_amp_c - (1.0 + 1e-4) / 4.0).abs() < 1e-16);
    }

    #[test]
    fn threshold_refused_off_degeneracy() {
        let p = SystemParams::resonant(1e-4, 5e-5, 0.2, DriveOrder::Parametric).with_splitting(0.1);
        assert_eq!(critical_xi(&p), Err(AnalyticError::NonDegenerate(0.1)));
    }

    #[test]
    fn threshold_continuous_at_branch_point() {
        for g2 in [1e-4, 0.01, 0.3, 2.0] {
            let lam = g2 / 2.0;
            let first = 1.0 + 4.0 * lam * lam / g2;
            let second = critical_xi(&SystemParams::resonant(g2, lam, 0.0, DriveOrder::Parametric)).unwrap().xi_c;
            assert!((first - second).abs() < 1e-12);
        }
    }

    #[test]
    fn parametric_regimes() {
        let base = SystemParams::resonant(1e-4, 5e-5, 0.0, DriveOrder::Parametric);
        let xi_c = 1.0 + 1e-4;
        assert_eq!(classify_regime(&base.with_xi(xi_c - 1.5e-4)).unwrap().kind, RegimeKind::Weak);
        assert_eq!(classify_regime(&base.with_xi(xi_c)).unwrap().kind, RegimeKind::Critical);
        assert_eq!(classify_regime(&base.with_xi(xi_c + 1.5e-4)).unwrap().kind, RegimeKind::Strong);
    }

    #[test]
    fn hole_depth() {
        let mut p = hole_params();
        assert!((e1_min(&p).unwrap() - (5e-5f64 / 1.7e-3).powi(2)).abs() < 1e-16);
        assert!((e1_min(&p).unwrap() - 8.651e-4).abs() < 1e-7);
        p.gamma2 = 0.0;
        assert_eq!(e1_min(&p).unwrap(), 0.0);
    }

    #[test]
    fn hole_depth_equals_stationary_energy() {
        let p = hole_params();
        let s = stationary_state(&build_generator(&p).unwrap()).unwrap();
        assert!((s.normal()[(0, 0)].re - e1_min(&p).unwrap()).abs() < 1e-12);
        let a = stationary_amplitudes(&p).unwrap().alpha;
        assert!((a.norm_sqr() - e1_min(&p).unwrap()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn amplitudes_agree_with_linear_solve(
            g2 in 1e-4f64..2.0, lam in 0.0f64..1.5, amp in 0.0f64..1.0,
            delta in -3.0f64..3.0, eps in -2.0f64..2.0,
        ) {
            let p = SystemParams::resonant(g2, lam, amp, DriveOrder::Linear)
                .with_splitting(eps)
                .with_detuning(delta);
            let amps = stationary_amplitudes(&p).unwrap();
            let s = stationary_state(&build_generator(&p).unwrap()).unwrap();
            let scale = amps.alpha.norm().max(amps.beta.norm()).max(1.0);
            prop_assert!((s.mean()[0] - amps.alpha).norm() <= 1e-12 * scale);
            prop_assert!((s.mean()[1] - amps.beta).norm() <= 1e-12 * scale);
        }

        #[test]
        fn hole_depth_is_resonant_amplitude(g2 in 1e-5f64..1.0, lam in 0.0f64..1.0, amp in 0.0f64..1.0) {
            let p = SystemParams::resonant(g2, lam, amp, DriveOrder::Linear);
            let a = stationary_amplitudes(&p).unwrap().alpha;
            let e = e1_min(&p).unwrap();
            prop_assert!((a.norm_sqr() - e).abs() <= 1e-12 * e.max(1e-300).max(1.0));
        }

        #[test]
        fn hole_depth_monotone(g2 in 1e-4f64..0.5, lam in 1e-3f64..0.5, amp in 0.01f64..1.0, step in 1e-3f64..0.5) {
            let p = SystemParams::resonant(g2, lam, amp, DriveOrder::Linear);
            let mut wider = p;
            wider.gamma2 = g2 * (1.0 + step);
            let mut stronger = p;
            stronger.lambda = lam * (1.0 + step);
            prop_assert!(e1_min(&wider).unwrap() > e1_min(&p).unwrap());
            prop_assert!(e1_min(&stronger).unwrap() < e1_min(&p).unwrap());
        }

        #[test]
        fn spectral_threshold_matches_formula(
            g2 in 1e-4f64..0.5, lam_ratio in 0.0f64..3.0, offset in prop::sample::select(vec![-1e-3, -1e-6, 1e-6, 1e-3]),
        ) {
            let base = SystemParams::resonant(g2, lam_ratio * g2 / 2.0, 0.0, DriveOrder::Parametric);
            let xi_c = critical_xi(&base).unwrap().xi_c;
            let p = base.with_xi(xi_c + offset);
            let regime = classify_regime(&p).unwrap().kind;
            let stationary = stationary_state(&build_generator(&p).unwrap()).is_ok();
            prop_assert_eq!(stationary, regime == RegimeKind::Weak);
        }
    }
}
