use std::fmt;
use std::str::FromStr;

use crate::entropy::EntropySpec;
use crate::error::{Error, Result};
use crate::matfun::{apply_spectral, HermitianMatrix};
use crate::perspective::{generalized_perspective, perspective};
use crate::scalarfn::{split_top_level, ScalarFn};

/// A two-argument matrix map `(A, B) ↦ M` whose joint curvature is probed.
///
/// Text form: `persp(f)`, `gpersp(f;h)`, `neg(map)` or an entropy spec such
/// as `Tab:1.5,0.5`.
#[derive(Debug, Clone, PartialEq)]
pub enum JointMap {
    Perspective(ScalarFn),
    GeneralizedPerspective { f: ScalarFn, h: ScalarFn },
    Entropy(EntropySpec),
    Negated(Box<JointMap>),
}

impl JointMap {
    pub fn negated(self) -> Self {
        JointMap::Negated(Box::new(self))
    }

    /// The function applied to `h(A)^{-1/2} B h(A)^{-1/2}`.
    pub fn kernel(&self) -> Result<ScalarFn> {
        match self {
            JointMap::Perspective(f) | JointMap::GeneralizedPerspective { f, .. } => Ok(f.clone()),
            JointMap::Entropy(spec) => spec.scalar_fn(),
            JointMap::Negated(inner) => inner.kernel(),
        }
    }

    fn weight_fn(&self) -> Option<ScalarFn> {
        match self {
            JointMap::Perspective(_) => None,
            JointMap::GeneralizedPerspective { h, .. } => Some(h.clone()),
            JointMap::Entropy(spec) => spec.weight_fn(),
            JointMap::Negated(inner) => inner.weight_fn(),
        }
    }

    /// `h(A)`, the matrix `B` is sampled against; `A` itself for plain
    /// perspectives.
    pub fn weight(&self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        match self.weight_fn() {
            None => Ok(a.clone()),
            Some(h) => apply_spectral(&h, a),
        }
    }

    pub fn evaluate(&self, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
        match self {
            JointMap::Perspective(f) => perspective(f, a, b),
            JointMap::GeneralizedPerspective { f, h } => generalized_perspective(f, h, a, b),
            JointMap::Entropy(spec) => spec.evaluate(a, b),
            JointMap::Negated(inner) => Ok(-&inner.evaluate(a, b)?),
        }
    }
}

impl fmt::Display for JointMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JointMap::Perspective(g) => write!(f, "persp({g})"),
            JointMap::GeneralizedPerspective { f: g, h } => write!(f, "gpersp({g};{h})"),
            JointMap::Entropy(spec) => write!(f, "{spec}"),
            JointMap::Negated(inner) => write!(f, "neg({inner})"),
        }
    }
}

fn wrapped<'a>(text: &'a str, prefix: &str) -> Option<&'a str> {
    text.strip_prefix(prefix)?.strip_suffix(')')
}

impl FromStr for JointMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = wrapped(s, "neg(") {
            return Ok(inner.parse::<JointMap>()?.negated());
        }
        if let Some(inner) = wrapped(s, "gpersp(") {
            let (f, h) = split_top_level(inner, ';')
                .ok_or_else(|| Error::Parse(format!("gpersp needs `f;h`, got {inner:?}")))?;
            return Ok(JointMap::GeneralizedPerspective {
                f: f.parse()?,
                h: h.parse()?,
            });
        }
        if let Some(inner) = wrapped(s, "persp(") {
            return Ok(JointMap::Perspective(inner.parse()?));
        }
        s.parse().map(JointMap::Entropy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trips() {
        for text in [
            "persp(log)",
            "gpersp(powlog:0.5;pow:0.5)",
            "neg(Tab:1.5,0.5)",
            "S",
            "neg(neg(persp(pow:2)))",
        ] {
            assert_eq!(text.parse::<JointMap>().unwrap().to_string(), text);
        }
        assert!("persp(exp)".parse::<JointMap>().is_err());
        assert!("gpersp(log)".parse::<JointMap>().is_err());
    }

    #[test]
    fn entropy_map_matches_explicit_perspective() {
        let a = HermitianMatrix::from_rows(&[vec![2.0, 0.3], vec![0.3, 1.0]]).unwrap();
        let b = HermitianMatrix::from_rows(&[vec![1.0, -0.2], vec![-0.2, 0.5]]).unwrap();
        let via_spec = JointMap::Entropy("Tab:1.5,0.5".parse().unwrap())
            .evaluate(&a, &b)
            .unwrap();
        let explicit = JointMap::GeneralizedPerspective {
            f: ScalarFn::deformed_log(1.5).unwrap(),
            h: ScalarFn::power(0.5),
        }
        .evaluate(&a, &b)
        .unwrap();
        assert_eq!(via_spec, explicit);
        let neg = JointMap::Entropy(EntropySpec::RelativeOperator).negated();
        let s = JointMap::Entropy(EntropySpec::RelativeOperator)
            .evaluate(&a, &b)
            .unwrap();
        assert_eq!(neg.evaluate(&a, &b).unwrap(), -&s);
    }
}
