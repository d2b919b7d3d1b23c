//! Relative operator entropies as perspectives, plus trace-form entropies.
//!
//! | spec | map | kernel `f` | weight `h` |
//! |------|-----|------------|------------|
//! | `S` | relative operator entropy `S(A\|B)` | `log t` | `t` |
//! | `Sq:q` | generalized relative entropy `S_q(A\|B)` | `t^q log t` | `t` |
//! | `Sab:α,β` | relative (α,β)-entropy `S_{α,β}(A\|B)` | `t^α log t` | `t^β` |
//! | `T:λ` | Tsallis relative entropy `T_λ(A\|B)` | `ln_λ t` | `t` |
//! | `Tab:α,β` | Tsallis (α,β)-entropy `T_{α,β}(A\|B)` | `ln_α t` | `t^β` |
//!
//! Every map is `h(A)^{1/2} f(h(A)^{-1/2} B h(A)^{-1/2}) h(A)^{1/2}`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matfun::{apply_spectral, HermitianMatrix};
use crate::perspective::{generalized_perspective, perspective};
use crate::scalarfn::ScalarFn;

/// Largest `d` with `d² ≤ 64` accepted by the superoperator identity.
pub const MAX_SUPEROPERATOR_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropySpec {
    RelativeOperator,
    GeneralizedRelative { q: f64 },
    RelativeAlphaBeta { alpha: f64, beta: f64 },
    Tsallis { lam: f64 },
    TsallisAlphaBeta { alpha: f64, beta: f64 },
}

fn out_of_range(name: &'static str, value: f64, reason: &str) -> Error {
    Error::ParameterOutOfRange {
        name,
        value,
        reason: reason.into(),
    }
}

fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(out_of_range(name, value, "must be finite"))
    }
}

impl EntropySpec {
    pub fn generalized_relative(q: f64) -> Result<Self> {
        Ok(Self::GeneralizedRelative { q: finite("q", q)? })
    }

    pub fn relative_alpha_beta(alpha: f64, beta: f64) -> Result<Self> {
        Ok(Self::RelativeAlphaBeta {
            alpha: finite("alpha", alpha)?,
            beta: finite("beta", beta)?,
        })
    }

    pub fn tsallis(lam: f64) -> Result<Self> {
        let spec = Self::Tsallis { lam };
        spec.validate()?;
        Ok(spec)
    }

    pub fn tsallis_alpha_beta(alpha: f64, beta: f64) -> Result<Self> {
        let spec = Self::TsallisAlphaBeta { alpha, beta };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::RelativeOperator => Ok(()),
            Self::GeneralizedRelative { q } => finite("q", q).map(drop),
            Self::RelativeAlphaBeta { alpha, beta } => {
                finite("alpha", alpha)?;
                finite("beta", beta).map(drop)
            }
            Self::Tsallis { lam } => {
                finite("lambda", lam)?;
                if lam == 0.0 {
                    Err(out_of_range("lambda", lam, "must be nonzero; use S for the limit"))
                } else if !(-1.0..=2.0).contains(&lam) {
                    Err(out_of_range("lambda", lam, "must lie in [-1, 2]"))
                } else {
                    Ok(())
                }
            }
            Self::TsallisAlphaBeta { alpha, beta } => {
                finite("alpha", alpha)?;
                finite("beta", beta)?;
                if alpha == 0.0 {
                    Err(out_of_range("alpha", alpha, "must be nonzero"))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// The kernel `f` of the perspective form.
    pub fn scalar_fn(&self) -> Result<ScalarFn> {
        self.validate()?;
        match *self {
            Self::RelativeOperator => Ok(ScalarFn::log()),
            Self::GeneralizedRelative { q } => ScalarFn::power_log(q),
            Self::RelativeAlphaBeta { alpha, .. } => ScalarFn::power_log(alpha),
            Self::Tsallis { lam } => ScalarFn::deformed_log(lam),
            Self::TsallisAlphaBeta { alpha, .. } => ScalarFn::deformed_log(alpha),
        }
    }

    /// Exponent `β` of the weight `h(t) = t^β`; `1` for single-parameter families.
    pub fn weight_exponent(&self) -> f64 {
        match *self {
            Self::RelativeAlphaBeta { beta, .. } | Self::TsallisAlphaBeta { beta, .. } => beta,
            _ => 1.0,
        }
    }

    /// The weight `h`, or `None` when the map is a plain perspective.
    pub fn weight_fn(&self) -> Option<ScalarFn> {
        match *self {
            Self::RelativeAlphaBeta { beta, .. } | Self::TsallisAlphaBeta { beta, .. } => Some(ScalarFn::power(beta)),
            _ => None,
        }
    }

    pub fn evaluate(&self, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
        let f = self.scalar_fn()?;
        match self.weight_fn() {
            None => perspective(&f, a, b),
            Some(h) => generalized_perspective(&f, &h, a, b),
        }
    }

    /// Commutative form `h(a) f(b / h(a))` on scalars.
    pub fn scalar(&self, a: f64, b: f64) -> Result<f64> {
        let f = self.scalar_fn()?;
        let w = match self.weight_fn() {
            None => a,
            Some(h) => h.eval(a)?,
        };
        Ok(w * f.eval(b / w)?)
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Self::RelativeOperator => "relative operator entropy",
            Self::GeneralizedRelative { .. } => "generalized relative operator entropy",
            Self::RelativeAlphaBeta { .. } => "relative operator (alpha,beta)-entropy",
            Self::Tsallis { .. } => "Tsallis relative operator entropy",
            Self::TsallisAlphaBeta { .. } => "Tsallis relative operator (alpha,beta)-entropy",
        }
    }
}

impl fmt::Display for EntropySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::RelativeOperator => write!(f, "S"),
            Self::GeneralizedRelative { q } => write!(f, "Sq:{q}"),
            Self::RelativeAlphaBeta { alpha, beta } => write!(f, "Sab:{alpha},{beta}"),
            Self::Tsallis { lam } => write!(f, "T:{lam}"),
            Self::TsallisAlphaBeta { alpha, beta } => write!(f, "Tab:{alpha},{beta}"),
        }
    }
}

fn parse_number(text: &str) -> Result<f64> {
    text.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected a number, got {text:?}")))
}

fn parse_pair(text: &str) -> Result<(f64, f64)> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected `alpha,beta`, got {text:?}")))?;
    Ok((parse_number(a)?, parse_number(b)?))
}

impl FromStr for EntropySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, args) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let spec = match (head, args) {
            ("S", None) => Self::RelativeOperator,
            ("Sq", Some(a)) => Self::GeneralizedRelative { q: parse_number(a)? },
            ("Sab", Some(a)) => {
                let (alpha, beta) = parse_pair(a)?;
                Self::RelativeAlphaBeta { alpha, beta }
            }
            ("T", Some(a)) => Self::Tsallis { lam: parse_number(a)? },
            ("Tab", Some(a)) => {
                let (alpha, beta) = parse_pair(a)?;
                Self::TsallisAlphaBeta { alpha, beta }
            }
            _ => return Err(Error::Parse(format!("unknown entropy spec {s:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// `S(A|B) = A^{1/2} log(A^{-1/2} B A^{-1/2}) A^{1/2}`.
pub fn relative_operator_entropy(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    EntropySpec::RelativeOperator.evaluate(a, b)
}

/// `S_q(A|B) = A^{1/2} X^q log(X) A^{1/2}` with `X = A^{-1/2} B A^{-1/2}`.
pub fn generalized_relative_entropy(q: f64, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    EntropySpec::generalized_relative(q)?.evaluate(a, b)
}

/// `S_{α,β}(A|B) = A^{β/2} X^α log(X) A^{β/2}` with `X = A^{-β/2} B A^{-β/2}`.
pub fn relative_alpha_beta_entropy(
    alpha: f64,
    beta: f64,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    EntropySpec::relative_alpha_beta(alpha, beta)?.evaluate(a, b)
}

/// `T_λ(A|B) = A^{1/2} ln_λ(A^{-1/2} B A^{-1/2}) A^{1/2}`.
pub fn tsallis_entropy(lam: f64, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    EntropySpec::tsallis(lam)?.evaluate(a, b)
}

/// `T_{α,β}(A|B) = A^{β/2} ln_α(A^{-β/2} B A^{-β/2}) A^{β/2}`.
pub fn tsallis_alpha_beta_entropy(
    alpha: f64,
    beta: f64,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    EntropySpec::tsallis_alpha_beta(alpha, beta)?.evaluate(a, b)
}

/// `−Tr ρ log ρ`. `rho` need not have unit trace.
pub fn von_neumann_entropy(rho: &HermitianMatrix) -> Result<f64> {
    rho.require_strictly_positive()?;
    let t_log_t = ScalarFn::power_log(1.0)?;
    Ok(-apply_spectral(&t_log_t, rho)?.trace())
}

/// Umegaki relative entropy `Tr ρ log ρ − Tr ρ log σ`.
pub fn quantum_relative_entropy(rho: &HermitianMatrix, sigma: &HermitianMatrix) -> Result<f64> {
    rho.check_dim(sigma)?;
    rho.require_strictly_positive()?;
    sigma.require_strictly_positive()?;
    let log = ScalarFn::log();
    let log_rho = apply_spectral(&log, rho)?;
    let log_sigma = apply_spectral(&log, sigma)?;
    Ok(rho.trace_product(&log_rho)? - rho.trace_product(&log_sigma)?)
}

/// Both sides of the superoperator trace identity.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct IdentityCheck {
    /// `⟨−S(L_ρ | R_σ) vec(I), vec(I)⟩`
    pub lhs: f64,
    /// `H(ρ‖σ)`
    pub rhs: f64,
    pub residual: f64,
}

/// Evaluates `⟨−S(L_ρ|R_σ)(I), I⟩` through the generic perspective on
/// `d² × d²` matrices and compares it with `H(ρ‖σ)`.
///
/// Vectorization stacks columns, so `L_ρ = I ⊗ ρ` and `R_σ = σᵀ ⊗ I`.
pub fn superoperator_identity(rho: &HermitianMatrix, sigma: &HermitianMatrix) -> Result<IdentityCheck> {
    rho.check_dim(sigma)?;
    let d = rho.dim();
    if d > MAX_SUPEROPERATOR_DIM {
        return Err(out_of_range("dim", d as f64, "superoperators are limited to d^2 <= 64"));
    }
    rho.require_strictly_positive()?;
    sigma.require_strictly_positive()?;
    let id = nalgebra::DMatrix::<f64>::identity(d, d);
    let left = HermitianMatrix::new(id.kronecker(rho.as_matrix()))?;
    let right = HermitianMatrix::new(sigma.as_matrix().transpose().kronecker(&id))?;
    let s = relative_operator_entropy(&left, &right)?;
    let diagonal_index = |i: usize| i * (d + 1);
    let mut pairing = 0.0;
    for i in 0..d {
        for j in 0..d {
            pairing += s.get(diagonal_index(i), diagonal_index(j));
        }
    }
    let lhs = -pairing;
    let rhs = quantum_relative_entropy(rho, sigma)?;
    Ok(IdentityCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

/// `|⟨−S(L_ρ|R_σ)(I), I⟩ − H(ρ‖σ)|`.
pub fn superoperator_identity_residual(rho: &HermitianMatrix, sigma: &HermitianMatrix) -> Result<f64> {
    Ok(superoperator_identity(rho, sigma)?.residual)
}
