//! Brute-force reference: the full master equation integrated on a
//! truncated two-mode Fock basis.
//!
//! This path shares nothing with [`crate::gaussian`] beyond the parameter
//! types, so agreement between the two is a check on the moment equations.

use nalgebra::{DMatrix, Matrix2, Vector2};
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::gaussian::MomentState;
use crate::model::{SystemParams, ValidationError};

/// Largest tolerated population on the outermost retained Fock level.
pub const EDGE_LIMIT: f64 = 1e-6;
/// Largest tolerated drift of the trace away from one.
pub const TRACE_DRIFT_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("truncation too small: edge population {population:.3e} at t = {time}")]
    Truncation { population: f64, time: f64 },
    #[error("trace drifted to {trace} at t = {time}")]
    NonPhysical { trace: f64, time: f64 },
    #[error("step {dt} exceeds the stability bound {max}")]
    StepTooLarge { dt: f64, max: f64 },
    #[error("invalid evolution time {0}")]
    InvalidTime(f64),
    #[error("truncation dimensions must be at least 1 (got {0} x {1})")]
    BadDimensions(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DensityError {
    #[error("trace {0} differs from 1")]
    Trace(f64),
    #[error("not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("negative eigenvalue {0:.3e}")]
    NotPositive(f64),
    #[error("edge population {0:.3e} exceeds {EDGE_LIMIT:.0e}")]
    Edge(f64),
}

/// Density operator on `span{|n₁⟩|n₂⟩ : n₁ < d1, n₂ < d2}`, stored as a
/// row-major `(d1·d2)²` array with basis index `n₁·d2 + n₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensity {
    d1: usize,
    d2: usize,
    rho: Vec<C64>,
}

impl FockDensity {
    pub fn vacuum(d1: usize, d2: usize) -> Self {
        Self::number_state(0, 0, d1, d2)
    }

    /// `|n₁⟩⟨n₁| ⊗ |n₂⟩⟨n₂|`.
    ///
    /// # Panics
    ///
    /// If a level lies outside the truncation.
    pub fn number_state(n1: usize, n2: usize, d1: usize, d2: usize) -> Self {
        assert!(n1 < d1 && n2 < d2, "number state outside truncation");
        let dim = d1 * d2;
        let mut rho = vec![C64::from(0.0); dim * dim];
        let k = n1 * d2 + n2;
        rho[k * dim + k] = C64::from(1.0);
        Self { d1, d2, rho }
    }

    /// Product coherent state, truncated and renormalized.
    pub fn coherent(alpha1: C64, alpha2: C64, d1: usize, d2: usize) -> Self {
        let amplitudes = |alpha: C64, d: usize| {
            let mut v = Vec::with_capacity(d);
            let mut c = C64::from((-alpha.norm_sqr() / 2.0).exp());
            for n in 0..d {
                v.push(c);
                c *= alpha / ((n + 1) as f64).sqrt();
            }
            v
        };
        let (a, b) = (amplitudes(alpha1, d1), amplitudes(alpha2, d2));
        let psi: Vec<C64> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        let dim = psi.len();
        let mut rho = vec![C64::from(0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                rho[i * dim + j] = psi[i] * psi[j].conj() / norm;
            }
        }
        Self { d1, d2, rho }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d1, self.d2)
    }

    fn dim(&self) -> usize {
        self.d1 * self.d2
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.rho[i * self.dim() + j]
    }

    pub fn trace(&self) -> C64 {
        let n = self.dim();
        (0..n).map(|k| self.rho[k * n + k]).sum()
    }

    /// Population in states with `n₁ = d1 − 1` or `n₂ = d2 − 1`. A mode
    /// truncated to a single level has no meaningful edge and is skipped.
    pub fn edge_population(&self) -> f64 {
        let n = self.dim();
        let mut total = 0.0;
        for n1 in 0..self.d1 {
            for n2 in 0..self.d2 {
                let on_edge = (self.d1 > 1 && n1 == self.d1 - 1) || (self.d2 > 1 && n2 == self.d2 - 1);
                if on_edge {
                    let k = n1 * self.d2 + n2;
                    total += self.rho[k * n + k].re;
                }
            }
        }
        total
    }

    pub fn to_matrix(&self) -> DMatrix<C64> {
        let n = self.dim();
        DMatrix::from_row_slice(n, n, &self.rho)
    }

    pub fn check_invariants(&self) -> Result<(), DensityError> {
        let tr = self.trace();
        if (tr - 1.0).norm() > 1e-9 {
            return Err(DensityError::Trace(tr.re));
        }
        let n = self.dim();
        let mut herm = 0.0f64;
        for i in 0..n {
            for j in i..n {
                herm = herm.max((self.rho[i * n + j] - self.rho[j * n + i].conj()).norm());
            }
        }
        if herm > 1e-10 {
            return Err(DensityError::NotHermitian(herm));
        }
        let min_eig = self.to_matrix().symmetric_eigenvalues().min();
        if min_eig < -1e-8 {
            return Err(DensityError::NotPositive(min_eig));
        }
        let edge = self.edge_population();
        if edge >= EDGE_LIMIT {
            return Err(DensityError::Edge(edge));
        }
        Ok(())
    }
}

/// Sparse operator on the truncated basis as `(row, col, value)` triples,
/// sorted by row.
#[derive(Debug, Clone)]
struct SparseOp {
    entries: Vec<(usize, usize, C64)>,
}

impl SparseOp {
    fn from_map(map: std::collections::BTreeMap<(usize, usize), C64>) -> Self {
        Self { entries: map.into_iter().filter(|(_, v)| *v != C64::from(0.0)).map(|((r, c), v)| (r, c, v)).collect() }
    }

    /// Annihilation operator of `mode` (0 or 1).
    fn annihilation(mode: usize, d1: usize, d2: usize) -> Self {
        let mut map = std::collections::BTreeMap::new();
        for n1 in 0..d1 {
            for n2 in 0..d2 {
                let col = n1 * d2 + n2;
                let (n, row) = match mode {
                    0 if n1 > 0 => (n1, (n1 - 1) * d2 + n2),
                    1 if n2 > 0 => (n2, n1 * d2 + n2 - 1),
                    _ => continue,
                };
                map.insert((row, col), C64::from((n as f64).sqrt()));
            }
        }
        Self::from_map(map)
    }

    fn adjoint(&self) -> Self {
        let map = self.entries.iter().map(|&(r, c, v)| ((c, r), v.conj())).collect();
        Self::from_map(map)
    }

    fn compose(&self, other: &Self, dim: usize) -> Self {
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); dim];
        for &(r, c, v) in &other.entries {
            rows[r].push((c, v));
        }
        let mut map = std::collections::BTreeMap::new();
        for &(i, k, x) in &self.entries {
            for &(j, y) in &rows[k] {
                *map.entry((i, j)).or_insert(C64::from(0.0)) += x * y;
            }
        }
        Self::from_map(map)
    }

    fn combine(terms: &[(C64, &SparseOp)]) -> Self {
        let mut map = std::collections::BTreeMap::new();
        for (coef, op) in terms {
            for &(r, c, v) in &op.entries {
                *map.entry((r, c)).or_insert(C64::from(0.0)) += coef * v;
            }
        }
        Self::from_map(map)
    }

    /// `out += self · x` for row-major `dim × dim` arrays.
    fn apply_left(&self, x: &[C64], out: &mut [C64], dim: usize) {
        for &(r, c, v) in &self.entries {
            let src = &x[c * dim..(c + 1) * dim];
            let dst = &mut out[r * dim..(r + 1) * dim];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += v * s;
            }
        }
    }

    /// `tr(ρ · self)`.
    fn expect(&self, rho: &[C64], dim: usize) -> C64 {
        self.entries.iter().map(|&(r, c, v)| v * rho[c * dim + r]).sum()
    }
}

/// Lindblad generator in the form `dρ/dt = −i(H_eff ρ − ρ H_eff†) + Σ L ρ L†`.
struct Liouvillian {
    dim: usize,
    h_eff: SparseOp,
    jumps: Vec<SparseOp>,
}

impl Liouvillian {
    fn new(params: &SystemParams, d1: usize, d2: usize) -> Self {
        let dim = d1 * d2;
        let frame = params.derive_frame();
        let a1 = SparseOp::annihilation(0, d1, d2);
        let a2 = SparseOp::annihilation(1, d1, d2);
        let a1d = a1.adjoint();
        let a2d = a2.adjoint();
        let n1 = a1d.compose(&a1, dim);
        let n2 = a2d.compose(&a2, dim);
        let hop = a1.compose(&a2d, dim);
        let hop_d = a1d.compose(&a2, dim);
        let (raise, lower) = match params.order.power() {
            1 => (a1d.clone(), a1.clone()),
            _ => (a1d.compose(&a1d, dim), a1.compose(&a1, dim)),
        };
        let c = C64::from;
        let damp = C64::new(0.0, -0.5);
        let h_eff = SparseOp::combine(&[
            (c(frame.big_omega1) + damp * params.gamma1, &n1),
            (c(frame.big_omega2) + damp * params.gamma2, &n2),
            (c(params.lambda), &hop),
            (c(params.lambda), &hop_d),
            (c(params.drive_amp), &raise),
            (c(params.drive_amp), &lower),
        ]);
        let jumps = [(params.gamma1, a1), (params.gamma2, a2)]
            .into_iter()
            .filter(|(g, _)| *g > 0.0)
            .map(|(g, a)| SparseOp::combine(&[(c(g.sqrt()), &a)]))
            .collect();
        Self { dim, h_eff, jumps }
    }

    fn rhs(&self, rho: &[C64], out: &mut [C64], work: &mut Workspace) {
        let n = self.dim;
        let Workspace { product, transposed } = work;
        // Y = H_eff ρ; with X = −iY the Hamiltonian part is X + X†
        product.fill(C64::from(0.0));
        self.h_eff.apply_left(rho, product, n);
        for i in 0..n {
            for j in 0..n {
                let x = product[i * n + j];
                let y = product[j * n + i];
                out[i * n + j] = C64::new(x.im + y.im, y.re - x.re);
            }
        }
        // L ρ L† = L (L ρ)†
        for jump in &self.jumps {
            product.fill(C64::from(0.0));
            jump.apply_left(rho, product, n);
            for i in 0..n {
                for j in 0..n {
                    transposed[i * n + j] = product[j * n + i].conj();
                }
            }
            jump.apply_left(transposed, out, n);
        }
    }
}

struct Workspace {
    product: Vec<C64>,
    transposed: Vec<C64>,
}

/// Stability bound on the step: `0.01 / max(Γ₁, λ, Ϝ, |Ω₁|, |Ω₂|, 1)`.
pub fn max_step(params: &SystemParams) -> f64 {
    let f = params.derive_frame();
    let scale = [params.gamma1, params.lambda, params.drive_amp, f.big_omega1.abs(), f.big_omega2.abs(), 1.0]
        .into_iter()
        .fold(0.0f64, f64::max);
    0.01 / scale
}

/// Integrates the master equation with classical fourth-order Runge–Kutta.
///
/// The number of steps is `⌈t/dt⌉`; the step actually taken is `t/steps ≤ dt`.
pub fn evolve_fock(params: &SystemParams, init: &FockDensity, t: f64, dt: f64) -> Result<FockDensity, FockError> {
    params.validate()?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(FockError::InvalidTime(t));
    }
    let max = max_step(params);
    if !(dt > 0.0 && dt <= max) {
        return Err(FockError::StepTooLarge { dt, max });
    }
    let (d1, d2) = init.dims();
    if d1 == 0 || d2 == 0 {
        return Err(FockError::BadDimensions(d1, d2));
    }
    if t == 0.0 {
        return Ok(init.clone());
    }
    let steps = (t / dt).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let lv = Liouvillian::new(params, d1, d2);
    let len = init.rho.len();

    let zeros = || vec![C64::from(0.0); len];
    let mut work = Workspace { product: zeros(), transposed: zeros() };
    let (mut k1, mut k2, mut k3, mut k4) = (zeros(), zeros(), zeros(), zeros());
    let mut stage = zeros();
    let shift = |stage: &mut [C64], rho: &[C64], k: &[C64], c: f64| {
        for ((s, r), kk) in stage.iter_mut().zip(rho).zip(k) {
            *s = r + kk * c;
        }
    };

    let mut rho = init.rho.clone();
    let mut state = FockDensity { d1, d2, rho: Vec::new() };
    for step in 1..=steps {
        lv.rhs(&rho, &mut k1, &mut work);
        shift(&mut stage, &rho, &k1, 0.5 * h);
        lv.rhs(&stage, &mut k2, &mut work);
        shift(&mut stage, &rho, &k2, 0.5 * h);
        lv.rhs(&stage, &mut k3, &mut work);
        shift(&mut stage, &rho, &k3, h);
        lv.rhs(&stage, &mut k4, &mut work);
        for (i, r) in rho.iter_mut().enumerate() {
            *r += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0);
        }

        state.rho = std::mem::take(&mut rho);
        let time = step as f64 * h;
        let population = state.edge_population();
        if population > EDGE_LIMIT {
            return Err(FockError::Truncation { population, time });
        }
        let trace = state.trace();
        if (trace - 1.0).norm() > TRACE_DRIFT_LIMIT {
            return Err(FockError::NonPhysical { trace: trace.re, time });
        }
        rho = std::mem::take(&mut state.rho);
    }
    state.rho = rho;
    Ok(state)
}

/// First and normally ordered second moments of a truncated density.
pub fn fock_moments(density: &FockDensity) -> MomentState {
    let (d1, d2) = density.dims();
    let dim = d1 * d2;
    let a = [SparseOp::annihilation(0, d1, d2), SparseOp::annihilation(1, d1, d2)];
    let ad = [a[0].adjoint(), a[1].adjoint()];
    let ex = |op: &SparseOp| op.expect(&density.rho, dim);
    let mean = Vector2::new(ex(&a[0]), ex(&a[1]));
    let mut normal = Matrix2::zeros();
    let mut anomalous = Matrix2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            normal[(i, j)] = ex(&ad[i].compose(&a[j], dim));
            anomalous[(i, j)] = ex(&a[i].compose(&a[j], dim));
        }
    }
    MomentState::new(mean, normal, anomalous)
}
