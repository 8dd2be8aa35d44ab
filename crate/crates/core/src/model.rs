//! Physical parameters of the two-resonator system and the rotating-frame
//! quantities derived from them.
//!
//! Rates and frequencies share one unit. The library does not care which;
//! the CLI defaults to units of the mode-1 damping rate (Γ₁ = 1).
//!
//! Only frequency *differences* enter the rotating-frame dynamics, so the
//! parameters keep ω₁ as an absolute reference and store ω₂ and the drive
//! frequency ν as offsets from it. This keeps Ω_ℓ = ω_ℓ − ν free of
//! cancellation error when ω₁ is many orders of magnitude above Γ₁.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A parameter that failed validation.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid parameter `{field}` = {value}: {reason}")]
pub struct ValidationError {
    pub field: &'static str,
    pub value: f64,
    pub reason: &'static str,
}

impl ValidationError {
    fn new(field: &'static str, value: f64, reason: &'static str) -> Self {
        Self { field, value, reason }
    }
}

/// Power 𝔭 of the drive term `Ϝ[(a₁†)^𝔭 + a₁^𝔭]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub enum DriveOrder {
    /// 𝔭 = 1: coherent (linear) amplification.
    Linear,
    /// 𝔭 = 2: degenerate parametric amplification.
    Parametric,
}

impl DriveOrder {
    pub fn power(self) -> u32 {
        match self {
            DriveOrder::Linear => 1,
            DriveOrder::Parametric => 2,
        }
    }
}

impl TryFrom<u32> for DriveOrder {
    type Error = ValidationError;

    fn try_from(p: u32) -> Result<Self, Self::Error> {
        match p {
            1 => Ok(DriveOrder::Linear),
            2 => Ok(DriveOrder::Parametric),
            _ => Err(ValidationError::new("order", p as f64, "drive order must be 1 or 2")),
        }
    }
}

impl From<DriveOrder> for u32 {
    fn from(order: DriveOrder) -> u32 {
        order.power()
    }
}

/// Physical parameters of the driven, damped resonator pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Mode-1 frequency ω₁.
    pub omega1: f64,
    /// Splitting ε = ω₂ − ω₁.
    pub epsilon: f64,
    /// Drive offset ν − ω₁.
    pub drive_offset: f64,
    /// Damping rate Γ₁ of resonator 1.
    pub gamma1: f64,
    /// Damping rate Γ₂ of resonator 2.
    pub gamma2: f64,
    /// Inter-resonator coupling λ (real, non-negative).
    pub lambda: f64,
    /// Drive amplitude Ϝ.
    pub drive_amp: f64,
    pub order: DriveOrder,
}

impl SystemParams {
    /// Builds parameters from absolute frequencies ω₁, ω₂ and ν.
    #[allow(clippy::too_many_arguments)]
    pub fn from_frequencies(
        omega1: f64,
        omega2: f64,
        drive_freq: f64,
        gamma1: f64,
        gamma2: f64,
        lambda: f64,
        drive_amp: f64,
        order: DriveOrder,
    ) -> Self {
        Self {
            omega1,
            epsilon: omega2 - omega1,
            drive_offset: drive_freq - omega1,
            gamma1,
            gamma2,
            lambda,
            drive_amp,
            order,
        }
    }

    /// Resonant, degenerate parameters (ω₁ = ω₂ = ν = 0) with Γ₁ = 1.
    pub fn resonant(gamma2: f64, lambda: f64, drive_amp: f64, order: DriveOrder) -> Self {
        Self { omega1: 0.0, epsilon: 0.0, drive_offset: 0.0, gamma1: 1.0, gamma2, lambda, drive_amp, order }
    }

    pub fn omega2(&self) -> f64 {
        self.omega1 + self.epsilon
    }

    pub fn drive_freq(&self) -> f64 {
        self.omega1 + self.drive_offset
    }

    /// Dimensionless detuning Δ = (ν − ω₁)/Γ₁.
    pub fn detuning(&self) -> f64 {
        self.drive_offset / self.gamma1
    }

    /// Copy with ν = ω₁ + Δ·Γ₁.
    pub fn with_detuning(mut self, delta: f64) -> Self {
        self.drive_offset = delta * self.gamma1;
        self
    }

    /// Copy with ω₂ = ω₁ + ε.
    pub fn with_splitting(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    /// Copy with Ϝ = ξΓ₁/4.
    pub fn with_xi(mut self, xi: f64) -> Self {
        self.drive_amp = xi * self.gamma1 / 4.0;
        self
    }

    /// Rescaled amplification ξ = 4Ϝ/Γ₁.
    pub fn xi(&self) -> f64 {
        4.0 * self.drive_amp / self.gamma1
    }

    pub fn is_degenerate(&self) -> bool {
        self.epsilon.abs() <= 1e-12 * self.gamma1
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        let fields = [
            ("omega1", self.omega1),
            ("epsilon", self.epsilon),
            ("drive_freq", self.drive_offset),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("lambda", self.lambda),
            ("drive_amp", self.drive_amp),
        ];
        for (field, value) in fields {
            if !value.is_finite() {
                return Err(ValidationError::new(field, value, "must be finite"));
            }
        }
        if self.gamma1 <= 0.0 {
            return Err(ValidationError::new("gamma1", self.gamma1, "must be > 0"));
        }
        if self.gamma2 < 0.0 {
            return Err(ValidationError::new("gamma2", self.gamma2, "must be >= 0"));
        }
        if self.lambda < 0.0 {
            return Err(ValidationError::new("lambda", self.lambda, "must be >= 0"));
        }
        if self.drive_amp < 0.0 {
            return Err(ValidationError::new("drive_amp", self.drive_amp, "must be >= 0"));
        }
        Ok(())
    }

    pub fn derive_frame(&self) -> DerivedFrame {
        DerivedFrame::new(self)
    }
}

/// Rotating-frame quantities (frame rotating at the drive frequency ν).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedFrame {
    /// Ω₁ = ω₁ − ν.
    pub big_omega1: f64,
    /// Ω₂ = ω₂ − ν.
    pub big_omega2: f64,
    /// Λ₁ = Γ₁/2 + iΩ₁.
    pub decay1: C64,
    /// Λ₂ = Γ₂/2 + iΩ₂.
    pub decay2: C64,
    /// Δ = (ν − ω₁)/Γ₁.
    pub delta: f64,
    /// ξ = 4Ϝ/Γ₁.
    pub xi: f64,
    /// ε = ω₂ − ω₁.
    pub epsilon: f64,
}

impl DerivedFrame {
    fn new(p: &SystemParams) -> Self {
        let big_omega1 = -p.drive_offset;
        let big_omega2 = p.epsilon - p.drive_offset;
        Self {
            big_omega1,
            big_omega2,
            decay1: C64::new(p.gamma1 / 2.0, big_omega1),
            decay2: C64::new(p.gamma2 / 2.0, big_omega2),
            delta: p.detuning(),
            xi: p.xi(),
            epsilon: p.epsilon,
        }
    }
}
