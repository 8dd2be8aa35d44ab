use serde::{Deserialize, Serialize};

use super::state::MomentState;

/// Energies below this are treated as zero when forming the dispersive ratio.
pub const ENERGY_FLOOR: f64 = 1e-14;

/// Operator ordering used for the mode energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ordering {
    /// `⟨a†a⟩`; vacuum has zero energy.
    #[default]
    Normal,
    /// `⟨X² + Y²⟩ = ⟨a†a⟩ + 1/2`.
    Symmetric,
}

/// Absorptive and dispersive observables of one resonator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    /// Absorptive response `E_ℓ`.
    pub energy: f64,
    /// Dispersive response `⟨X Y + Y X⟩ / E_ℓ = Im⟨a²⟩ / E_ℓ`; `None` for
    /// zero-energy states.
    pub sin2theta: Option<f64>,
    /// `⟨X_ℓ⟩ = Re⟨a_ℓ⟩`.
    pub mean_x: f64,
    /// `⟨Y_ℓ⟩ = Im⟨a_ℓ⟩`.
    pub mean_y: f64,
}

/// Observables of resonator `mode` (1 or 2).
///
/// # Panics
///
/// If `mode` is not 1 or 2.
pub fn observables(state: &MomentState, mode: usize, ordering: Ordering) -> Observables {
    assert!(mode == 1 || mode == 2, "resonator index must be 1 or 2, got {mode}");
    let i = mode - 1;
    let mut energy = state.normal()[(i, i)].re;
    if ordering == Ordering::Symmetric {
        energy += 0.5;
    }
    let sin2theta = (energy >= ENERGY_FLOOR).then(|| state.anomalous()[(i, i)].im / energy);
    let mean = state.mean()[i];
    Observables { energy, sin2theta, mean_x: mean.re, mean_y: mean.im }
}
