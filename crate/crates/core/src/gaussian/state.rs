use nalgebra::{Matrix2, Matrix4, SVector, Vector2};
use num_complex::Complex64 as C64;
use thiserror::Error;

/// Number of independent real components of a [`MomentState`].
pub const STATE_DIM: usize = 14;

/// Packed real coordinates of a [`MomentState`].
///
/// Layout: `Re m₁, Im m₁, Re m₂, Im m₂, N₁₁, N₂₂, Re N₁₂, Im N₁₂,
/// Re M₁₁, Im M₁₁, Re M₂₂, Im M₂₂, Re M₁₂, Im M₁₂`.
pub type PackedMoments = SVector<f64, STATE_DIM>;

/// First and normally ordered second moments of a two-mode Gaussian state.
///
/// * `mean[ℓ] = ⟨a_ℓ⟩`
/// * `normal[(i, j)] = ⟨a_i† a_j⟩` (Hermitian)
/// * `anomalous[(i, j)] = ⟨a_i a_j⟩` (symmetric)
///
/// All three are raw moments, not fluctuations: a coherent state has
/// `normal = m̄ mᵀ` and `anomalous = m mᵀ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState {
    mean: Vector2<C64>,
    normal: Matrix2<C64>,
    anomalous: Matrix2<C64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhysicalityError {
    #[error("normal moments not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("Cauchy-Schwarz violated: |N12|^2 - N11 N22 = {0:.3e}")]
    CauchySchwarz(f64),
    #[error("uncertainty relation violated: smallest eigenvalue {0:.3e}")]
    Uncertainty(f64),
    #[error("moment is not finite")]
    NonFinite,
}

impl MomentState {
    /// Builds a state from raw moments. `anomalous` is symmetrized by taking
    /// its `(0, 1)` entry for both off-diagonal slots.
    pub fn new(mean: Vector2<C64>, normal: Matrix2<C64>, mut anomalous: Matrix2<C64>) -> Self {
        anomalous[(1, 0)] = anomalous[(0, 1)];
        Self { mean, normal, anomalous }
    }

    pub fn vacuum() -> Self {
        Self { mean: Vector2::zeros(), normal: Matrix2::zeros(), anomalous: Matrix2::zeros() }
    }

    /// Product coherent state `|α₁⟩ ⊗ |α₂⟩`.
    pub fn coherent(alpha1: C64, alpha2: C64) -> Self {
        let mean = Vector2::new(alpha1, alpha2);
        Self { mean, normal: mean.conjugate() * mean.transpose(), anomalous: mean * mean.transpose() }
    }

    pub fn mean(&self) -> &Vector2<C64> {
        &self.mean
    }

    pub fn normal(&self) -> &Matrix2<C64> {
        &self.normal
    }

    pub fn anomalous(&self) -> &Matrix2<C64> {
        &self.anomalous
    }

    /// `⟨Δa_i† Δa_j⟩`.
    pub fn normal_fluctuations(&self) -> Matrix2<C64> {
        self.normal - self.mean.conjugate() * self.mean.transpose()
    }

    /// `⟨Δa_i Δa_j⟩`.
    pub fn anomalous_fluctuations(&self) -> Matrix2<C64> {
        self.anomalous - self.mean * self.mean.transpose()
    }

    pub fn pack(&self) -> PackedMoments {
        let (m, n, a) = (&self.mean, &self.normal, &self.anomalous);
        PackedMoments::from_column_slice(&[
            m[0].re,
            m[0].im,
            m[1].re,
            m[1].im,
            n[(0, 0)].re,
            n[(1, 1)].re,
            n[(0, 1)].re,
            n[(0, 1)].im,
            a[(0, 0)].re,
            a[(0, 0)].im,
            a[(1, 1)].re,
            a[(1, 1)].im,
            a[(0, 1)].re,
            a[(0, 1)].im,
        ])
    }

    pub fn unpack(x: &PackedMoments) -> Self {
        let c = |re: usize| C64::new(x[re], x[re + 1]);
        let n12 = c(6);
        let m12 = c(12);
        Self {
            mean: Vector2::new(c(0), c(2)),
            normal: Matrix2::new(C64::from(x[4]), n12, n12.conj(), C64::from(x[5])),
            anomalous: Matrix2::new(c(8), m12, m12, c(10)),
        }
    }

    /// Largest absolute value among the packed real components.
    pub fn max_magnitude(&self) -> f64 {
        self.pack().amax()
    }

    /// `⟨R_j R_k⟩` for quadratures `R = (q₁, p₁, q₂, p₂)` with
    /// `q = (a + a†)/√2`, `p = (a − a†)/(i√2)`, built from fluctuations.
    ///
    /// Its real part is the symmetrized covariance σ and its imaginary part
    /// is Ω/2 for the two-mode symplectic form Ω, so physical states make
    /// this matrix positive semidefinite.
    pub fn quadrature_correlation(&self) -> Matrix4<C64> {
        let dn = self.normal_fluctuations();
        let dm = self.anomalous_fluctuations();
        let one = C64::from(1.0);
        let zero = C64::from(0.0);
        // ⟨Δc_x Δc_y⟩ for c = (a₁, a₂, a₁†, a₂†)
        let mut g = Matrix4::<C64>::zeros();
        for i in 0..2 {
            for j in 0..2 {
                let delta = if i == j { one } else { zero };
                g[(i, j)] = dm[(i, j)];
                g[(i, j + 2)] = dn[(j, i)] + delta;
                g[(i + 2, j)] = dn[(i, j)];
                g[(i + 2, j + 2)] = dm[(i, j)].conj();
            }
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut t = Matrix4::<C64>::zeros();
        for l in 0..2 {
            t[(2 * l, l)] = C64::new(s, 0.0);
            t[(2 * l, l + 2)] = C64::new(s, 0.0);
            t[(2 * l + 1, l)] = C64::new(0.0, -s);
            t[(2 * l + 1, l + 2)] = C64::new(0.0, s);
        }
        t * g * t.transpose()
    }

    /// Variances of `X_ℓ = (a + a†)/2` and `Y_ℓ = (a − a†)/2i` for the
    /// 0-based mode index.
    pub fn quadrature_variances(&self, mode: usize) -> (f64, f64) {
        let dn = self.normal_fluctuations()[(mode, mode)].re;
        let dm = self.anomalous_fluctuations()[(mode, mode)].re;
        ((2.0 * dn + 2.0 * dm + 1.0) / 4.0, (2.0 * dn - 2.0 * dm + 1.0) / 4.0)
    }

    /// Smallest eigenvalue of [`Self::quadrature_correlation`].
    pub fn uncertainty_margin(&self) -> f64 {
        let c = self.quadrature_correlation();
        let herm = (c + c.adjoint()) * C64::from(0.5);
        herm.symmetric_eigenvalues().min()
    }

    /// Checks Hermiticity, Cauchy-Schwarz and the uncertainty relation.
    ///
    /// Tolerances scale with the moment magnitude so that large but
    /// legitimate states (several hundred photons) are not rejected for
    /// rounding noise.
    pub fn check_physical(&self) -> Result<(), PhysicalityError> {
        if !self.pack().iter().all(|v| v.is_finite()) {
            return Err(PhysicalityError::NonFinite);
        }
        let scale = self.max_magnitude().max(1.0);
        let herm = (self.normal[(0, 1)] - self.normal[(1, 0)].conj()).norm();
        if herm > 1e-12 * scale {
            return Err(PhysicalityError::NotHermitian(herm));
        }
        let n11 = self.normal[(0, 0)].re;
        let n22 = self.normal[(1, 1)].re;
        let excess = self.normal[(0, 1)].norm_sqr() - n11 * n22;
        if excess > 1e-12 * scale * scale {
            return Err(PhysicalityError::CauchySchwarz(excess));
        }
        let margin = self.uncertainty_margin();
        if margin < -1e-9 * scale {
            return Err(PhysicalityError::Uncertainty(margin));
        }
        Ok(())
    }
}
