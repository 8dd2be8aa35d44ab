use nalgebra::{Matrix2, Matrix4, SMatrix, SVector, Vector2, Vector4};
use num_complex::Complex64 as C64;

use super::state::{MomentState, PackedMoments, STATE_DIM};
use crate::model::{DriveOrder, SystemParams, ValidationError};

/// Dimension of the augmented (affine → linear) system.
pub const AUGMENTED_DIM: usize = STATE_DIM + 1;

pub type SecondMomentMap = SMatrix<f64, 10, 10>;

const I: C64 = C64::new(0.0, 1.0);

/// Linear-affine generator of the moment dynamics.
///
/// First moments obey `dm̂/dt = A m̂ + b` on `m̂ = (m₁, m₂, m₁*, m₂*)`.
/// Writing the upper blocks of `A` as `[K | L]` and `f = b[..2]`, the
/// normally ordered second moments obey
///
/// ```text
/// dM/dt = K M + M Kᵀ + L N + Nᵀ Lᵀ + Lᵀ + f mᵀ + m fᵀ
/// dN/dt = K̄ N + N Kᵀ + L̄ M + M̄ Lᵀ + f̄ mᵀ + m̄ fᵀ
/// ```
///
/// with `N_ij = ⟨a_i† a_j⟩`, `M_ij = ⟨a_i a_j⟩`. The lone `Lᵀ` is the
/// commutator `[a, a†] = 1` picked up by the parametric drive.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineGenerator {
    drift: Matrix4<C64>,
    drive: Vector4<C64>,
    linear: SMatrix<f64, STATE_DIM, STATE_DIM>,
    constant: PackedMoments,
}

impl AffineGenerator {
    pub fn new(params: &SystemParams) -> Result<Self, ValidationError> {
        params.validate()?;
        let frame = params.derive_frame();
        let lambda = params.lambda;
        let amp = params.drive_amp;

        let k = Matrix2::new(-frame.decay1, -I * lambda, -I * lambda, -frame.decay2);
        let mut l = Matrix2::zeros();
        let mut f = Vector2::zeros();
        match params.order {
            DriveOrder::Linear => f[0] = -I * amp,
            DriveOrder::Parametric => l[(0, 0)] = -I * 2.0 * amp,
        }

        let mut drift = Matrix4::zeros();
        drift.fixed_view_mut::<2, 2>(0, 0).copy_from(&k);
        drift.fixed_view_mut::<2, 2>(0, 2).copy_from(&l);
        drift.fixed_view_mut::<2, 2>(2, 0).copy_from(&l.conjugate());
        drift.fixed_view_mut::<2, 2>(2, 2).copy_from(&k.conjugate());
        let drive = Vector4::new(f[0], f[1], f[0].conj(), f[1].conj());

        Ok(Self::from_first_moments(drift, drive))
    }

    /// Derives the full moment generator from the first-moment drift and
    /// drive. Both must have the conjugation structure of a bosonic drift.
    fn from_first_moments(drift: Matrix4<C64>, drive: Vector4<C64>) -> Self {
        let rhs = |x: &PackedMoments, source: f64| moment_rhs(&drift, &drive, &MomentState::unpack(x), source).pack();
        let zero = PackedMoments::zeros();
        let constant = rhs(&zero, 1.0);
        let mut linear = SMatrix::<f64, STATE_DIM, STATE_DIM>::zeros();
        for j in 0..STATE_DIM {
            let mut e = zero;
            e[j] = 1.0;
            linear.set_column(j, &rhs(&e, 0.0));
        }
        Self { drift, drive, linear, constant }
    }

    /// First-moment drift `A` acting on `(m₁, m₂, m₁*, m₂*)`.
    pub fn drift(&self) -> &Matrix4<C64> {
        &self.drift
    }

    /// Constant first-moment drive `b`.
    pub fn drive(&self) -> &Vector4<C64> {
        &self.drive
    }

    /// Linear part of the second-moment dynamics on the packed `(N, M)`
    /// coordinates (entries 4..14 of [`PackedMoments`]).
    pub fn second_moment_map(&self) -> SecondMomentMap {
        self.linear.fixed_view::<10, 10>(4, 4).into_owned()
    }

    /// Coupling of first moments into the second-moment equations
    /// (nonzero only for the linear drive).
    pub fn mean_coupling(&self) -> SMatrix<f64, 10, 4> {
        self.linear.fixed_view::<10, 4>(4, 0).into_owned()
    }

    /// Constant source of the second-moment equations.
    pub fn second_moment_source(&self) -> SVector<f64, 10> {
        self.constant.fixed_rows::<10>(4).into_owned()
    }

    /// Real 4×4 representation of `A` on `(Re m₁, Im m₁, Re m₂, Im m₂)`.
    pub fn real_drift(&self) -> Matrix4<f64> {
        self.linear.fixed_view::<4, 4>(0, 0).into_owned()
    }

    /// Full linear part on the packed 14-component state.
    pub fn linear_part(&self) -> &SMatrix<f64, STATE_DIM, STATE_DIM> {
        &self.linear
    }

    pub fn constant_part(&self) -> &PackedMoments {
        &self.constant
    }

    /// `[[J, c], [0, 0]]` acting on `(x, 1)`.
    pub fn augmented(&self) -> SMatrix<f64, AUGMENTED_DIM, AUGMENTED_DIM> {
        let mut g = SMatrix::<f64, AUGMENTED_DIM, AUGMENTED_DIM>::zeros();
        g.fixed_view_mut::<STATE_DIM, STATE_DIM>(0, 0).copy_from(&self.linear);
        g.fixed_view_mut::<STATE_DIM, 1>(0, STATE_DIM).copy_from(&self.constant);
        g
    }

    /// Time derivative of every moment at `state`.
    pub fn rate(&self, state: &MomentState) -> MomentState {
        moment_rhs(&self.drift, &self.drive, state, 1.0)
    }
}

/// Right-hand side of the moment equations. `source` scales the
/// state-independent terms, so `source = 0` yields the linear part.
fn moment_rhs(drift: &Matrix4<C64>, drive: &Vector4<C64>, s: &MomentState, source: f64) -> MomentState {
    let k: Matrix2<C64> = drift.fixed_view::<2, 2>(0, 0).into_owned();
    let l: Matrix2<C64> = drift.fixed_view::<2, 2>(0, 2).into_owned();
    let f = Vector2::new(drive[0], drive[1]);
    let m = s.mean();
    let n = s.normal();
    let a = s.anomalous();
    let src = C64::from(source);

    let dm = k * m + l * m.conjugate() + f * src;
    let da = k * a
        + a * k.transpose()
        + l * n
        + n.transpose() * l.transpose()
        + l.transpose() * src
        + f * m.transpose()
        + m * f.transpose();
    let dn = k.conjugate() * n
        + n * k.transpose()
        + l.conjugate() * a
        + a.conjugate() * l.transpose()
        + f.conjugate() * m.transpose()
        + m.conjugate() * f.transpose();
    MomentState::new(dm, dn, da)
}

/// Eigenvalues of the first-moment drift, sorted by descending real part
/// (ties by descending imaginary part).
pub fn stability_spectrum(gen: &AffineGenerator) -> Vec<C64> {
    let mut eig: Vec<C64> = gen.real_drift().complex_eigenvalues().iter().copied().collect();
    eig.sort_by(|x, y| y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im)));
    eig
}

/// Largest real part of the drift spectrum.
pub fn max_growth_rate(gen: &AffineGenerator) -> f64 {
    stability_spectrum(gen)[0].re
}
