//! Catalog of scalar functions used as functional-calculus kernels, with
//! their domains, curvature claims, and the transpose and shift
//! combinators.
//!
//! | kind | formula | domain |
//! |------|---------|--------|
//! | `Log` | `log t` | `(0, ∞)` |
//! | `Power(p)` | `t^p` | `ℝ` for integer `p ≥ 0`, `[0, ∞)` for other `p > 0`, `(0, ∞)` for `p < 0` |
//! | `DeformedLog(λ)` | `(t^λ − 1)/λ`, `λ ≠ 0` | `[0, ∞)` for `λ > 0`, `(0, ∞)` for `λ < 0` |
//! | `PowerLog(q)` | `t^q log t` | `(0, ∞)` |
//! | `Affine(a, b)` | `a t + b` | `ℝ` |
//! | `Transpose(f)` | `t f(1/t)` | reciprocal image of `dom f` in `(0, ∞)` |
//! | `GeneralizedTranspose(f, h)` | `h(t) f(1/h(t))` | `dom h` |
//! | `Shift(f, ε)` | `f(t + ε)` | `dom f − ε` |

mod domain;
mod parse;

use std::fmt;

use crate::error::{Error, Result};
use crate::matfun::SpectrumInterval;

pub use domain::Domain;
pub(crate) use parse::split_top_level;

/// Number of log-spaced probe points used to bracket the sign change of `k''`.
pub const IQ_GRID_POINTS: usize = 256;
/// Absolute precision of the `I_q` boundary bisection.
pub const IQ_BISECTION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum FnKind {
    Log,
    Power(f64),
    DeformedLog(f64),
    PowerLog(f64),
    Affine { slope: f64, intercept: f64 },
    Transpose(Box<ScalarFn>),
    GeneralizedTranspose { f: Box<ScalarFn>, h: Box<ScalarFn> },
    Shift { inner: Box<ScalarFn>, eps: f64 },
}

/// A catalog function together with the interval it may be evaluated on.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarFn {
    kind: FnKind,
    domain: Domain,
}

fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name,
            value,
            reason: "must be finite".into(),
        })
    }
}

impl ScalarFn {
    pub fn log() -> Self {
        Self {
            kind: FnKind::Log,
            domain: Domain::positive(),
        }
    }

    /// `t^p`. Panics if `p` is not finite; see [`ScalarFn::try_power`].
    pub fn power(p: f64) -> Self {
        Self::try_power(p).expect("power exponent must be finite")
    }

    pub fn try_power(p: f64) -> Result<Self> {
        check_finite("p", p)?;
        let domain = if p >= 0.0 && p.fract() == 0.0 {
            Domain::reals()
        } else if p > 0.0 {
            Domain::nonnegative()
        } else {
            Domain::positive()
        };
        Ok(Self {
            kind: FnKind::Power(p),
            domain,
        })
    }

    pub fn identity() -> Self {
        Self::power(1.0)
    }

    /// The deformed logarithm `ln_λ`. `λ = 0` is rejected; use [`ScalarFn::log`].
    pub fn deformed_log(lam: f64) -> Result<Self> {
        check_finite("lambda", lam)?;
        if lam == 0.0 {
            return Err(Error::ParameterOutOfRange {
                name: "lambda",
                value: lam,
                reason: "the lambda -> 0 limit is the natural logarithm".into(),
            });
        }
        let domain = if lam > 0.0 {
            Domain::nonnegative()
        } else {
            Domain::positive()
        };
        Ok(Self {
            kind: FnKind::DeformedLog(lam),
            domain,
        })
    }

    pub fn power_log(q: f64) -> Result<Self> {
        check_finite("q", q)?;
        Ok(Self {
            kind: FnKind::PowerLog(q),
            domain: Domain::positive(),
        })
    }

    pub fn affine(slope: f64, intercept: f64) -> Result<Self> {
        check_finite("slope", slope)?;
        check_finite("intercept", intercept)?;
        Ok(Self {
            kind: FnKind::Affine { slope, intercept },
            domain: Domain::reals(),
        })
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::affine(0.0, value)
    }

    /// `f*(t) = t f(1/t)`.
    pub fn transpose(f: &ScalarFn) -> Self {
        Self {
            domain: f.domain.reciprocal_positive(),
            kind: FnKind::Transpose(Box::new(f.clone())),
        }
    }

    /// `f*_h(t) = h(t) f(1/h(t))`.
    pub fn generalized_transpose(f: &ScalarFn, h: &ScalarFn) -> Self {
        Self {
            domain: h.domain,
            kind: FnKind::GeneralizedTranspose {
                f: Box::new(f.clone()),
                h: Box::new(h.clone()),
            },
        }
    }

    /// `f_ε(t) = f(t + ε)` for `ε > 0`.
    pub fn shift(f: &ScalarFn, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::ParameterOutOfRange {
                name: "eps",
                value: eps,
                reason: "shift must be finite and positive".into(),
            });
        }
        Ok(Self {
            domain: f.domain.translate(-eps),
            kind: FnKind::Shift {
                inner: Box::new(f.clone()),
                eps,
            },
        })
    }

    /// Narrows the evaluation domain to `self.domain ∩ domain`.
    pub fn restrict(&self, domain: &Domain) -> Result<Self> {
        let narrowed = self.domain.intersect(domain);
        if narrowed.is_empty() {
            return Err(Error::DomainMismatch {
                sampling: domain.to_string(),
                domain: self.domain.to_string(),
            });
        }
        Ok(Self {
            kind: self.kind.clone(),
            domain: narrowed,
        })
    }

    pub fn kind(&self) -> &FnKind {
        &self.kind
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !self.domain.contains(t) {
            return Err(Error::DomainViolation {
                value: t,
                domain: self.domain.to_string(),
            });
        }
        Ok(match &self.kind {
            FnKind::Log => t.ln(),
            FnKind::Power(p) => {
                if *p == 0.0 {
                    1.0
                } else {
                    t.powf(*p)
                }
            }
            // t = 0 gives exp_m1(-inf) = -1, i.e. ln_λ(0) = -1/λ.
            FnKind::DeformedLog(lam) => (lam * t.ln()).exp_m1() / lam,
            FnKind::PowerLog(q) => {
                if *q == 0.0 {
                    t.ln()
                } else if *q == 1.0 {
                    t * t.ln()
                } else {
                    t.powf(*q) * t.ln()
                }
            }
            FnKind::Affine { slope, intercept } => slope * t + intercept,
            FnKind::Transpose(inner) => t * inner.eval(1.0 / t)?,
            FnKind::GeneralizedTranspose { f, h } => {
                let ht = h.eval(t)?;
                if !(ht > 0.0) {
                    return Err(Error::NonpositiveH { t, value: ht });
                }
                ht * f.eval(1.0 / ht)?
            }
            FnKind::Shift { inner, eps } => inner.eval(t + eps)?,
        })
    }

    /// Value at zero when `0` is in the domain.
    pub fn value_at_zero(&self) -> Option<f64> {
        self.eval(0.0).ok()
    }
}

impl fmt::Display for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FnKind::Log => write!(f, "log"),
            FnKind::Power(p) => write!(f, "pow:{p}"),
            FnKind::DeformedLog(lam) => write!(f, "dlog:{lam}"),
            FnKind::PowerLog(q) => write!(f, "powlog:{q}"),
            FnKind::Affine { slope, intercept } => write!(f, "affine:{slope},{intercept}"),
            FnKind::Transpose(inner) => write!(f, "transpose({inner})"),
            FnKind::GeneralizedTranspose { f: inner, h } => write!(f, "gtranspose({inner};{h})"),
            FnKind::Shift { inner, eps } => write!(f, "shift:{eps}({inner})"),
        }
    }
}

impl std::str::FromStr for ScalarFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse::parse_fn(s)
    }
}

pub fn eval(f: &ScalarFn, t: f64) -> Result<f64> {
    f.eval(t)
}

pub fn transpose(f: &ScalarFn) -> ScalarFn {
    ScalarFn::transpose(f)
}

pub fn generalized_transpose(f: &ScalarFn, h: &ScalarFn) -> ScalarFn {
    ScalarFn::generalized_transpose(f, h)
}

pub fn default_step(t: f64) -> f64 {
    1e-4_f64.max(1e-4 * t.abs())
}

fn central_second_difference(g: impl Fn(f64) -> Result<f64>, t: f64, step: f64) -> Result<f64> {
    let plus = g(t + step)?;
    let mid = g(t)?;
    let minus = g(t - step)?;
    Ok((plus - 2.0 * mid + minus) / (step * step))
}

/// Central second difference of `f` at `t`. `step` defaults to
/// `max(1e-4, 1e-4·|t|)`.
pub fn second_derivative(f: &ScalarFn, t: f64, step: Option<f64>) -> Result<f64> {
    let step = step.unwrap_or_else(|| default_step(t));
    if !(step > 0.0) {
        return Err(Error::ParameterOutOfRange {
            name: "step",
            value: step,
            reason: "must be positive".into(),
        });
    }
    central_second_difference(|x| f.eval(x), t, step)
}

fn check_open_unit(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name: "q",
            value: q,
            reason: "must lie strictly between 0 and 1".into(),
        })
    }
}

/// Upper end `exp((2q − 1)/(q(1 − q)))` of the interval on which `t^q log t`
/// is claimed operator convex.
pub fn jq_upper(q: f64) -> Result<f64> {
    check_open_unit(q)?;
    Ok(((2.0 * q - 1.0) / (q * (1.0 - q))).exp())
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Brackets the unique sign change in `values` sampled on `grid`; zeros are
/// skipped.
fn locate_sign_change(grid: &[f64], values: &[f64]) -> Result<(f64, f64, i8)> {
    let mut bracket = None;
    let mut changes = 0;
    let mut previous: Option<(f64, i8)> = None;
    for (&t, &v) in grid.iter().zip(values) {
        let s = sign(v);
        if s == 0 {
            continue;
        }
        if let Some((pt, ps)) = previous {
            if ps != s {
                changes += 1;
                bracket.get_or_insert((pt, t, ps));
            }
        }
        previous = Some((t, s));
    }
    match changes {
        0 => Err(Error::NoSignChange),
        1 => Ok(bracket.expect("one sign change was counted")),
        count => Err(Error::MultipleSignChanges { count }),
    }
}

/// Locates the single sign change of `k''` for `k(t) = t^q f(t)` inside
/// `search`, to absolute precision [`IQ_BISECTION_TOL`].
pub fn iq_boundary(f: &ScalarFn, q: f64, search: &SpectrumInterval) -> Result<f64> {
    check_open_unit(q)?;
    search.check_sampleable()?;
    let k = |t: f64| -> Result<f64> { Ok(t.powf(q) * f.eval(t)?) };
    let k2 = |t: f64| central_second_difference(k, t, default_step(t));

    let (log_lo, log_hi) = (search.lo().ln(), search.hi().ln());
    let last = (IQ_GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..IQ_GRID_POINTS)
        .map(|i| (log_lo + (log_hi - log_lo) * i as f64 / last).exp())
        .collect();
    let values = grid.iter().map(|&t| k2(t)).collect::<Result<Vec<_>>>()?;

    let (mut lo, mut hi, lo_sign) = locate_sign_change(&grid, &values)?;
    while hi - lo > IQ_BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match sign(k2(mid)?) {
            0 => return Ok(mid),
            s if s == lo_sign => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorCurvature {
    OperatorConvex,
    OperatorConcave,
}

/// A claimed operator-convexity or -concavity of a catalog function on
/// `domain`, for one instance of a parameter family.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityClaim {
    pub function: ScalarFn,
    pub parameter_region: String,
    pub expectation: OperatorCurvature,
    pub domain: Domain,
}

/// Claims from the catalog instantiated on representative parameters.
pub fn catalog_claims() -> Vec<ConvexityClaim> {
    let mut claims = Vec::new();
    for lam in [1.0, 1.5, 2.0] {
        claims.push(ConvexityClaim {
            function: ScalarFn::deformed_log(lam).expect("nonzero"),
            parameter_region: "lambda in [1, 2]".into(),
            expectation: OperatorCurvature::OperatorConvex,
            domain: Domain::nonnegative(),
        });
    }
    for lam in [-1.0, -0.5, 0.5, 1.0] {
        claims.push(ConvexityClaim {
            function: ScalarFn::deformed_log(lam).expect("nonzero"),
            parameter_region: "lambda in [-1, 0) or (0, 1]".into(),
            expectation: OperatorCurvature::OperatorConcave,
            domain: Domain::positive(),
        });
    }
    claims.push(ConvexityClaim {
        function: ScalarFn::transpose(&ScalarFn::log()),
        parameter_region: "none".into(),
        expectation: OperatorCurvature::OperatorConcave,
        domain: Domain::positive(),
    });
    for q in [0.25, 0.5, 0.75] {
        let upper = jq_upper(q).expect("q in (0, 1)");
        claims.push(ConvexityClaim {
            function: ScalarFn::power_log(q).expect("finite"),
            parameter_region: "q in [0, 1], t in (0, J_q]".into(),
            expectation: OperatorCurvature::OperatorConvex,
            domain: Domain::new(0.0, false, upper, true),
        });
    }
    claims
}
