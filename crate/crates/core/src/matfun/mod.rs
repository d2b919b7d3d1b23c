//! Dense real symmetric matrices, their spectral decomposition and
//! functional calculus, the Loewner order, and seeded samplers of strictly
//! positive matrices.
//!
//! Every order or equality check in the crate compares against the scale
//! `max(1, ‖A‖₂, ‖B‖₂)` of its operands; see [`loewner_leq`].

mod io;
mod jacobi;
mod random;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalarfn::ScalarFn;

pub use io::{matrix_from_json, matrix_to_json, MatrixJson};
pub use random::{haar_orthogonal, random_spd, random_spd_dominated, MAX_CONDITION};

/// Default relative tolerance for order and equality checks.
pub const DEFAULT_TOL_REL: f64 = 1e-8;

/// Returns `(m + mᵀ) / 2`, which is exactly symmetric.
pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    DMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
}

/// A dense real symmetric matrix of dimension at least one.
///
/// Symmetry is exact: every constructor symmetrizes its input.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: DMatrix<f64>,
}

impl HermitianMatrix {
    /// Builds a symmetric matrix from a square `m` by taking `(m + mᵀ)/2`.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                left: m.nrows(),
                right: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidConfig("matrix dimension must be at least 1".into()));
        }
        Ok(Self { inner: symmetrize(&m) })
    }

    // Callers guarantee `m` is square, nonempty and exactly symmetric.
    fn from_symmetric(m: DMatrix<f64>) -> Self {
        debug_assert!(m.nrows() == m.ncols());
        Self { inner: m }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: bad.len(),
            });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_symmetric(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_symmetric(DMatrix::zeros(dim, dim))
    }

    pub fn scalar(dim: usize, value: f64) -> Self {
        Self::from_symmetric(DMatrix::identity(dim, dim) * value)
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        Self::from_symmetric(DMatrix::from_fn(n, n, |i, j| if i == j { entries[i] } else { 0.0 }))
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.inner
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.inner[(i, j)]).collect())
            .collect()
    }

    pub fn trace(&self) -> f64 {
        self.inner.trace()
    }

    /// `trace(self · other)` without forming the product.
    pub fn trace_product(&self, other: &HermitianMatrix) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self.inner.component_mul(&other.inner).sum())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.norm()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.inner.amax()
    }

    pub fn decompose(&self) -> SpectralDecomposition {
        decompose(self)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.decompose().eigenvalues
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.decompose().min()
    }

    /// Largest eigenvalue magnitude, the operator 2-norm of a symmetric matrix.
    pub fn spectral_norm(&self) -> f64 {
        self.decompose().spectral_norm()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_symmetric(&self.inner * c)
    }

    /// Entrywise `c·a + (1 − c)·b`.
    pub fn convex_combination(c: f64, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<Self> {
        a.check_dim(b)?;
        let n = a.dim();
        Ok(Self::from_symmetric(DMatrix::from_fn(n, n, |i, j| {
            c * a.inner[(i, j)] + (1.0 - c) * b.inner[(i, j)]
        })))
    }

    /// `tᵀ · self · t`, symmetrized.
    pub fn congruence(&self, t: &DMatrix<f64>) -> Result<Self> {
        if t.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: t.nrows(),
            });
        }
        Self::new(t.transpose() * &self.inner * t)
    }

    /// `self · middle · self`, symmetrized.
    pub fn sandwich(&self, middle: &HermitianMatrix) -> Result<Self> {
        self.check_dim(middle)?;
        Ok(Self::from_symmetric(symmetrize(
            &(&self.inner * &middle.inner * &self.inner),
        )))
    }

    pub fn checked_add(&self, other: &HermitianMatrix) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self::from_symmetric(&self.inner + &other.inner))
    }

    pub fn checked_sub(&self, other: &HermitianMatrix) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self::from_symmetric(&self.inner - &other.inner))
    }

    pub(crate) fn check_dim(&self, other: &HermitianMatrix) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            })
        }
    }

    pub(crate) fn require_strictly_positive(&self) -> Result<SpectralDecomposition> {
        let decomposition = self.decompose();
        let min = decomposition.min();
        if min > 0.0 {
            Ok(decomposition)
        } else {
            Err(Error::NotStrictlyPositive { min_eigenvalue: min })
        }
    }
}

impl fmt::Display for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.inner)
    }
}

/// Panics on dimension mismatch; use [`HermitianMatrix::checked_add`] otherwise.
impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        self.checked_add(rhs).expect("dimension mismatch in matrix addition")
    }
}

/// Panics on dimension mismatch; use [`HermitianMatrix::checked_sub`] otherwise.
impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        self.checked_sub(rhs).expect("dimension mismatch in matrix subtraction")
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}

impl Neg for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn neg(self) -> HermitianMatrix {
        self.scale(-1.0)
    }
}

/// `A = Q Λ Qᵀ` with ascending eigenvalues and orthonormal columns of `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    pub fn spectral_norm(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// `Q g(Λ) Qᵀ`, symmetrized.
    pub fn map(&self, g: impl Fn(f64) -> f64) -> HermitianMatrix {
        self.try_map(|t| Ok(g(t))).expect("infallible map")
    }

    pub fn try_map(&self, g: impl Fn(f64) -> Result<f64>) -> Result<HermitianMatrix> {
        let n = self.dim();
        let values = self.eigenvalues.iter().map(|&t| g(t)).collect::<Result<Vec<_>>>()?;
        let mut scaled = self.eigenvectors.clone();
        for (j, value) in values.iter().enumerate() {
            for i in 0..n {
                scaled[(i, j)] *= value;
            }
        }
        let product = scaled * self.eigenvectors.transpose();
        Ok(HermitianMatrix::from_symmetric(symmetrize(&product)))
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map(|t| t)
    }
}

/// Spectral decomposition by cyclic Jacobi rotations.
pub fn decompose(a: &HermitianMatrix) -> SpectralDecomposition {
    let (eigenvalues, eigenvectors) = jacobi::symmetric_eigen(&a.inner);
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Functional calculus `f(A) = Q f(Λ) Qᵀ`.
pub fn apply_spectral(f: &ScalarFn, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    a.decompose().try_map(|t| f.eval(t))
}

/// Result of a Loewner comparison `A ⪯ B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoewnerOutcome {
    pub holds: bool,
    /// `λ_min(B − A)`.
    pub margin: f64,
    /// `max(1, ‖A‖₂, ‖B‖₂)`.
    pub scale: f64,
}

impl LoewnerOutcome {
    pub fn normalized_margin(&self) -> f64 {
        self.margin / self.scale
    }
}

/// Tests `A ⪯ B`: holds iff `λ_min(B − A) ≥ −tol_rel · max(1, ‖A‖₂, ‖B‖₂)`.
pub fn loewner_leq(a: &HermitianMatrix, b: &HermitianMatrix, tol_rel: f64) -> Result<LoewnerOutcome> {
    a.check_dim(b)?;
    if !(tol_rel >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "tolerance must be nonnegative, got {tol_rel}"
        )));
    }
    let margin = b.checked_sub(a)?.min_eigenvalue();
    let scale = 1.0_f64.max(a.spectral_norm()).max(b.spectral_norm());
    Ok(LoewnerOutcome {
        holds: margin >= -tol_rel * scale,
        margin,
        scale,
    })
}

/// Closed interval `[lo, hi]` constraining a spectrum, with `0 ≤ lo ≤ hi`.
/// `hi` may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumInterval {
    lo: f64,
    hi: f64,
}

impl SpectrumInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo < 0.0 || lo.is_infinite() {
            return Err(Error::InvalidSpectrum {
                lo,
                hi,
                reason: "lower bound must be finite and nonnegative".into(),
            });
        }
        if hi < lo {
            return Err(Error::InvalidSpectrum {
                lo,
                hi,
                reason: "upper bound is below lower bound".into(),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn is_subset_of(&self, other: &SpectrumInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Checks the sampler preconditions: `0 < lo`, finite `hi`, and
    /// `hi / lo ≤` [`MAX_CONDITION`].
    pub fn check_sampleable(&self) -> Result<()> {
        let fail = |reason: &str| {
            Err(Error::InvalidSpectrum {
                lo: self.lo,
                hi: self.hi,
                reason: reason.into(),
            })
        };
        if !(self.lo > 0.0) {
            return fail("sampling needs a strictly positive lower bound");
        }
        if !self.hi.is_finite() {
            return fail("sampling needs a finite upper bound");
        }
        if self.hi / self.lo > MAX_CONDITION {
            return fail("condition ratio hi/lo exceeds the sampler limit");
        }
        Ok(())
    }
}

impl fmt::Display for SpectrumInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
