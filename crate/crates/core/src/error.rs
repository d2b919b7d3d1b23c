use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value {value} lies outside the function domain {domain}")]
    DomainViolation { value: f64, domain: String },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid spectrum interval [{lo}, {hi}]: {reason}")]
    InvalidSpectrum { lo: f64, hi: f64, reason: String },

    #[error("matrix is not strictly positive (smallest eigenvalue {min_eigenvalue})")]
    NotStrictlyPositive { min_eigenvalue: f64 },

    #[error("weight function h is not strictly positive: h({t}) = {value}")]
    NonpositiveH { t: f64, value: f64 },

    #[error("parameter {name} = {value} out of range: {reason}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        reason: String,
    },

    #[error("second derivative has no sign change on the search interval")]
    NoSignChange,

    #[error("second derivative changes sign {count} times on the sampling grid")]
    MultipleSignChanges { count: usize },

    #[error("contraction condition fails: lambda_min(I - sum T^T T) = {margin}")]
    ContractionViolation { margin: f64 },

    #[error("sampling interval {sampling} is not contained in {domain}")]
    DomainMismatch { sampling: String, domain: String },

    #[error("matrix is not symmetric (max asymmetry {asymmetry})")]
    NotSymmetric { asymmetry: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
