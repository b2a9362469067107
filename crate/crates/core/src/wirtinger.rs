//! Levi matrices (complex Hessians) of real-valued functions on `C^n`.
//!
//! Index convention: `L[i][j] = ∂²g / ∂z̄_i ∂z_j`. The other common
//! convention `∂²g / ∂z_i ∂z̄_j` is the transpose (equivalently the complex
//! conjugate, as `L` is Hermitian), so semidefiniteness, rank and vanishing
//! do not depend on the choice.
//!
//! For `g = log ||F||` with `w = F(z)`, `J = DF(z)`, `S = ||w||²`,
//! `a = J* w` and `A = J* J`,
//!
//! ```text
//! L = (S A − a a*) / (2 S²)
//! ```
//!
//! which is positive semidefinite by Cauchy–Schwarz and annihilates
//! `J⁻¹ w`.

use nalgebra::SymmetricEigen;
use thiserror::Error;

use crate::algebra::{AlgebraError, AutomorphismWord};
use crate::linalg::{euclidean_norm, frobenius_norm, CMatrix, CVector, C64};

/// Squared norms below this are treated as a zero of `F`.
pub const MIN_NORM_SQ: f64 = 1e-300;

/// Step for [`wirtinger_levi_fd`] used throughout the crate.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Eigenvalue floor for plurisubharmonicity checks.
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WirtingerError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("F vanishes at the sample point (||F(z)||² = {norm_sq:e})")]
    VanishingNorm { norm_sq: f64 },
    #[error("sample point must be nonzero")]
    ZeroPoint,
    #[error("non-finite function value at a stencil point")]
    NonFiniteSample,
    #[error("finite-difference step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    /// Accepts `m` if it equals its conjugate transpose within `1e-12`
    /// (relative to its largest entry when that exceeds one).
    pub fn new(m: CMatrix) -> Result<Self, WirtingerError> {
        assert!(m.is_square(), "Hermitian matrices are square");
        let scale = m.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let asym = asymmetry(&m);
        if asym > HERMITIAN_TOL * scale {
            return Err(WirtingerError::NotHermitian(asym));
        }
        Ok(Self::symmetrized(m))
    }

    /// `(M + M*) / 2`.
    pub fn symmetrized(m: CMatrix) -> Self {
        let adj = m.adjoint();
        HermitianMatrix((m + adj) * C64::new(0.5, 0.0))
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix(CMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius_norm(&self.0)
    }

    pub fn distance(&self, other: &HermitianMatrix) -> f64 {
        frobenius_norm(&(&self.0 - &other.0))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.0.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Number of eigenvalues with `|λ| > max(abs_floor, rel_tol · max|λ|)`.
    pub fn numerical_rank(&self, rel_tol: f64, abs_floor: f64) -> usize {
        let ev = self.eigenvalues();
        let largest = ev.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let cut = abs_floor.max(rel_tol * largest);
        ev.iter().filter(|x| x.abs() > cut).count()
    }
}

fn asymmetry(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// A Levi matrix together with the nonzero point where it was evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct LeviSample {
    point: CVector,
    levi: HermitianMatrix,
}

impl LeviSample {
    pub fn new(point: CVector, levi: HermitianMatrix) -> Result<Self, WirtingerError> {
        if point.iter().all(|c| *c == C64::new(0.0, 0.0)) {
            return Err(WirtingerError::ZeroPoint);
        }
        if point.len() != levi.dim() {
            return Err(AlgebraError::DimensionMismatch {
                expected: point.len(),
                found: levi.dim(),
            }
            .into());
        }
        Ok(LeviSample { point, levi })
    }

    pub fn point(&self) -> &CVector {
        &self.point
    }

    pub fn levi(&self) -> &HermitianMatrix {
        &self.levi
    }
}

fn levi_from_value_and_jacobian(w: &CVector, jac: &CMatrix) -> Result<HermitianMatrix, WirtingerError> {
    let s = w.iter().map(|c| c.norm_sqr()).sum::<f64>();
    if !(s >= MIN_NORM_SQ) {
        return Err(WirtingerError::VanishingNorm { norm_sq: s });
    }
    let jh = jac.adjoint();
    let a = &jh * w;
    let gram = &jh * jac;
    let outer = &a * a.adjoint();
    let m = (gram * C64::new(s, 0.0) - outer) / C64::new(2.0 * s * s, 0.0);
    Ok(HermitianMatrix::symmetrized(m))
}

/// Closed-form Levi matrix of `log ||F||` at `z`, where `F` is the map of `word`.
pub fn levi_log_norm(word: &AutomorphismWord, z: &CVector) -> Result<HermitianMatrix, WirtingerError> {
    let (w, jac) = word.evaluate_with_jacobian(z)?;
    levi_from_value_and_jacobian(&w, &jac)
}

/// Levi matrix of `log ||z||`, i.e. `(S I − z z*) / (2 S²)` with `S = ||z||²`.
pub fn levi_log_norm_identity(z: &CVector) -> Result<HermitianMatrix, WirtingerError> {
    let n = z.len();
    levi_from_value_and_jacobian(z, &CMatrix::identity(n, n))
}

/// Finite-difference Levi matrix of an arbitrary real-valued `g` at `z`.
///
/// Real coordinates are `x_i = Re z_i`, `y_i = Im z_i`. The real Hessian is
/// taken with central second differences of step `h` and combined as
/// `∂²g/∂z̄_i∂z_j = ¼ (g_{x_i x_j} + g_{y_i y_j} + i (g_{y_i x_j} − g_{x_i y_j}))`.
pub fn wirtinger_levi_fd<G>(g: G, z: &CVector, h: f64) -> Result<HermitianMatrix, WirtingerError>
where
    G: Fn(&CVector) -> f64,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(WirtingerError::InvalidStep(h));
    }
    let n = z.len();
    let dim = 2 * n;
    let shift = |base: &CVector, k: usize, delta: f64| {
        let mut out = base.clone();
        if k.is_multiple_of(2) {
            out[k / 2].re += delta;
        } else {
            out[k / 2].im += delta;
        }
        out
    };
    let sample = |p: &CVector| {
        let v = g(p);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(WirtingerError::NonFiniteSample)
        }
    };

    let g0 = sample(z)?;
    let mut hess = vec![vec![0.0; dim]; dim];
    #[allow(clippy::needless_range_loop)]
    for a in 0..dim {
        let plus = sample(&shift(z, a, h))?;
        let minus = sample(&shift(z, a, -h))?;
        hess[a][a] = (plus - 2.0 * g0 + minus) / (h * h);
        for b in (a + 1)..dim {
            let za = shift(z, a, h);
            let zam = shift(z, a, -h);
            let pp = sample(&shift(&za, b, h))?;
            let pm = sample(&shift(&za, b, -h))?;
            let mp = sample(&shift(&zam, b, h))?;
            let mm = sample(&shift(&zam, b, -h))?;
            let v = (pp - pm - mp + mm) / (4.0 * h * h);
            hess[a][b] = v;
            hess[b][a] = v;
        }
    }

    let x = |i: usize| 2 * i;
    let y = |i: usize| 2 * i + 1;
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let re = hess[x(i)][x(j)] + hess[y(i)][y(j)];
            let im = hess[y(i)][x(j)] - hess[x(i)][y(j)];
            m[(i, j)] = C64::new(0.25 * re, 0.25 * im);
        }
    }
    Ok(HermitianMatrix::symmetrized(m))
}

/// Smallest eigenvalue of `m` is at least `-tol`.
pub fn is_psd(m: &HermitianMatrix, tol: f64) -> bool {
    m.min_eigenvalue() >= -tol
}

/// Frobenius norm of `m` is below `tol`.
pub fn is_pluriharmonic_at(m: &HermitianMatrix, tol: f64) -> bool {
    m.frobenius_norm() < tol
}

/// `||L v|| / ||v||` for `v = DF(z)⁻¹ F(z)` and `L` the Levi matrix of
/// `log ||F||` at `z`; zero in exact arithmetic.
pub fn kernel_residual(word: &AutomorphismWord, z: &CVector) -> Result<f64, WirtingerError> {
    let (w, jac) = word.evaluate_with_jacobian(z)?;
    let levi = levi_from_value_and_jacobian(&w, &jac)?;
    let v = jac
        .lu()
        .solve(&w)
        .expect("Jacobian of an automorphism is invertible");
    let lv = levi.as_matrix() * &v;
    Ok(euclidean_norm(&lv) / euclidean_norm(&v))
}
