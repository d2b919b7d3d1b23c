//! Registered claim ids.
//!
//! An id has the shape `tag:target:direction`. For the operator directions
//! (`opconvex`, `opconcave`) the target is a scalar function spec such as
//! `dlog:1.5`; for `convex`/`concave` it is a joint map such as `Tab:1.5,0.5`.
//! Ids tagged `adhoc` are parsed on the fly; every other id must be listed by
//! [`registry`].

use std::fmt;

use crate::error::{Error, Result};
use crate::matfun::SpectrumInterval;
use crate::probe::{
    probe_joint, probe_operator_convexity, probe_sab_with_domain, probe_sq_with_domain, Direction, JointMap,
    ProbeConfig, ProbeReport, Verdict,
};
use crate::scalarfn::{jq_upper, ScalarFn};

/// Fractions of `jq_upper` used as default confined sampling interval.
const CONFINED_FRACTIONS: (f64, f64) = (0.05, 0.95);
/// Largest `|β|` accepted from the command line.
pub const MAX_ABS_BETA: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub enum ClaimTarget {
    Operator(ScalarFn),
    Joint(JointMap),
    /// `S_{α,β}` with every spectrum confined to `(0, jq_upper(α)]`.
    Confined {
        alpha: f64,
        beta: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    Consistent,
    Violated,
    /// Exploratory search; no verdict is assumed.
    Undecided,
}

impl Expectation {
    pub fn matches(&self, verdict: Verdict) -> Option<bool> {
        match self {
            Expectation::Consistent => Some(verdict == Verdict::Consistent),
            Expectation::Violated => Some(verdict == Verdict::Violated),
            Expectation::Undecided => None,
        }
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expectation::Consistent => "Consistent",
            Expectation::Violated => "Violated",
            Expectation::Undecided => "Undecided",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Claim {
    pub id: String,
    pub target: ClaimTarget,
    pub direction: Direction,
    pub expectation: Expectation,
    pub dim: usize,
    pub spectrum: SpectrumInterval,
    pub ratio: SpectrumInterval,
}

impl Claim {
    /// Default sampling for this claim with the given trials and seed.
    pub fn config(&self, trials: u64, seed: u64) -> ProbeConfig {
        ProbeConfig {
            dim: self.dim,
            trials,
            seed,
            spectrum: self.spectrum,
            ratio: self.ratio,
            ..ProbeConfig::default()
        }
    }

    pub fn run(&self, cfg: &ProbeConfig) -> Result<ProbeReport> {
        let mut report = match &self.target {
            ClaimTarget::Operator(f) => probe_operator_convexity(f, self.direction, cfg)?,
            ClaimTarget::Joint(map) => probe_joint(map, self.direction, cfg)?,
            ClaimTarget::Confined { alpha, beta } => {
                if *beta == 1.0 {
                    probe_sq_with_domain(*alpha, cfg)?
                } else {
                    probe_sab_with_domain(*alpha, *beta, cfg)?
                }
            }
        };
        report.claim = self.id.clone();
        Ok(report)
    }
}

fn default_interval() -> SpectrumInterval {
    ProbeConfig::default().spectrum
}

fn confined_interval(alpha: f64) -> SpectrumInterval {
    let j = jq_upper(alpha).expect("registered confined claims use alpha in (0, 1)");
    SpectrumInterval::new(CONFINED_FRACTIONS.0 * j, CONFINED_FRACTIONS.1 * j).expect("valid confined interval")
}

fn claim(id: String, target: ClaimTarget, direction: Direction, expectation: Expectation) -> Claim {
    Claim {
        id,
        target,
        direction,
        expectation,
        dim: 3,
        spectrum: default_interval(),
        ratio: default_interval(),
    }
}

fn entropy(text: &str) -> ClaimTarget {
    ClaimTarget::Joint(JointMap::Entropy(text.parse().expect("registered entropy spec")))
}

fn scalar(text: &str) -> ClaimTarget {
    ClaimTarget::Operator(text.parse().expect("registered function spec"))
}

/// Every registered claim, in a fixed order.
pub fn registry() -> Vec<Claim> {
    use Direction::{Concave, Convex};
    use Expectation::{Consistent, Undecided, Violated};
    let mut out = Vec::new();
    for lam in [1.0, 1.5, 2.0] {
        out.push(claim(
            format!("lem2.1:dlog:{lam}:opconvex"),
            scalar(&format!("dlog:{lam}")),
            Convex,
            Consistent,
        ));
    }
    for lam in [-1.0, -0.5, 0.5, 1.0] {
        out.push(claim(
            format!("lem2.1:dlog:{lam}:opconcave"),
            scalar(&format!("dlog:{lam}")),
            Concave,
            Consistent,
        ));
    }
    for alpha in [1.0, 1.5, 2.0] {
        for beta in [0.0, 0.5, 1.0] {
            out.push(claim(
                format!("thm2.2:Tab:{alpha},{beta}:convex"),
                entropy(&format!("Tab:{alpha},{beta}")),
                Convex,
                Consistent,
            ));
        }
    }
    for alpha in [0.5, 1.0] {
        for beta in [0.25, 0.75] {
            out.push(claim(
                format!("thm2.2-doubtful:Tab:{alpha},{beta}:concave"),
                entropy(&format!("Tab:{alpha},{beta}")),
                Concave,
                Undecided,
            ));
        }
    }
    for lam in [1.0, 1.5, 2.0] {
        out.push(claim(
            format!("thm2.3:T:{lam}:convex"),
            entropy(&format!("T:{lam}")),
            Convex,
            Consistent,
        ));
    }
    for lam in [-1.0, -0.5, 0.5, 1.0] {
        out.push(claim(
            format!("thm2.3:T:{lam}:concave"),
            entropy(&format!("T:{lam}")),
            Concave,
            Consistent,
        ));
    }
    out.push(claim(
        "thm2.6-fujii:S:concave".into(),
        entropy("S"),
        Concave,
        Consistent,
    ));
    out.push(claim(
        "thm3.2:transpose(log):opconcave".into(),
        scalar("transpose(log)"),
        Concave,
        Consistent,
    ));
    let confined = |id: String, alpha: f64, beta: f64| Claim {
        dim: 2,
        spectrum: confined_interval(alpha),
        ratio: confined_interval(alpha),
        ..claim(id, ClaimTarget::Confined { alpha, beta }, Convex, Consistent)
    };
    for q in [0.25, 0.5, 0.75] {
        out.push(confined(format!("cor3.8:Sq:{q}:convex"), q, 1.0));
    }
    for alpha in [0.25, 0.5, 0.75] {
        for beta in [0.5, 1.0] {
            out.push(confined(format!("thm3.9:Sab:{alpha},{beta}:convex"), alpha, beta));
        }
    }
    out.push(claim("ctrl:pow:3:opconvex".into(), scalar("pow:3"), Convex, Violated));
    out
}

fn parse_direction(text: &str) -> Result<(Direction, bool)> {
    match text {
        "convex" => Ok((Direction::Convex, false)),
        "concave" => Ok((Direction::Concave, false)),
        "opconvex" => Ok((Direction::Convex, true)),
        "opconcave" => Ok((Direction::Concave, true)),
        other => Err(Error::Parse(format!(
            "unknown direction {other:?}; expected convex, concave, opconvex or opconcave"
        ))),
    }
}

/// Rejects joint maps whose weight exponent lies outside `[−2, 2]`.
pub fn check_cli_beta(map: &JointMap) -> Result<()> {
    let beta = match map {
        JointMap::Entropy(spec) => spec.weight_exponent(),
        JointMap::Negated(inner) => return check_cli_beta(inner),
        _ => return Ok(()),
    };
    if beta.abs() > MAX_ABS_BETA {
        return Err(Error::ParameterOutOfRange {
            name: "beta",
            value: beta,
            reason: format!("command-line beta must lie in [-{MAX_ABS_BETA}, {MAX_ABS_BETA}]"),
        });
    }
    Ok(())
}

fn parse_adhoc(id: &str, body: &str) -> Result<Claim> {
    let (target, direction) = body
        .rsplit_once(':')
        .ok_or_else(|| Error::Parse(format!("claim {id:?} must look like tag:target:direction")))?;
    let (direction, operator) = parse_direction(direction)?;
    let target = if operator {
        ClaimTarget::Operator(target.parse()?)
    } else {
        let map: JointMap = target.parse()?;
        check_cli_beta(&map)?;
        ClaimTarget::Joint(map)
    };
    Ok(claim(id.to_string(), target, direction, Expectation::Undecided))
}

/// Resolves a claim id against the registry, or parses an `adhoc:` id.
pub fn lookup(id: &str) -> Result<Claim> {
    if let Some(body) = id.strip_prefix("adhoc:") {
        return parse_adhoc(id, body);
    }
    registry()
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::InvalidConfig(format!("unknown claim id {id:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_resolvable() {
        let claims = registry();
        let mut ids: Vec<&str> = claims.iter().map(|c| c.id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), claims.len());
        for id in [
            "thm2.2:Tab:1.5,0.5:convex",
            "thm2.3:T:0.5:concave",
            "cor3.8:Sq:0.5:convex",
            "lem2.1:dlog:1.5:opconvex",
        ] {
            assert_eq!(lookup(id).unwrap().id, id);
        }
    }

    #[test]
    fn adhoc_and_unknown_ids() {
        let c = lookup("adhoc:pow:3:opconvex").unwrap();
        assert_eq!(c.target, ClaimTarget::Operator(ScalarFn::power(3.0)));
        assert_eq!(c.direction, Direction::Convex);
        let j = lookup("adhoc:neg(S):convex").unwrap();
        assert!(matches!(j.target, ClaimTarget::Joint(JointMap::Negated(_))));
        assert!(lookup("thm9.9:S:concave").is_err());
        assert!(lookup("adhoc:S:sideways").is_err());
        assert!(lookup("adhoc:Tab:1,3:convex").is_err());
    }

    #[test]
    fn confined_claims_sit_inside_j() {
        let c = lookup("cor3.8:Sq:0.5:convex").unwrap();
        assert_eq!(c.dim, 2);
        assert!((c.spectrum.hi() - 0.95).abs() < 1e-12);
    }
}
