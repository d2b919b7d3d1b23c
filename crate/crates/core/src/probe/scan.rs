use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{probe_joint, Direction, JointMap, ProbeConfig, Verdict};
use crate::entropy::EntropySpec;
use crate::error::{Error, Result};
use crate::json::format_f64;

pub const SCAN_CSV_HEADER: &str = "alpha,beta,verdict,worst_convex_margin,worst_concave_margin";
/// Each scan cell runs `trials / SCAN_TRIAL_DIVISOR` trials per direction.
pub const SCAN_TRIAL_DIVISOR: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScanFamily {
    TsallisAlphaBeta,
    RelativeAlphaBeta,
}

impl ScanFamily {
    pub fn spec(&self, alpha: f64, beta: f64) -> Result<EntropySpec> {
        match self {
            ScanFamily::TsallisAlphaBeta => EntropySpec::tsallis_alpha_beta(alpha, beta),
            ScanFamily::RelativeAlphaBeta => EntropySpec::relative_alpha_beta(alpha, beta),
        }
    }
}

impl FromStr for ScanFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Tab" => Ok(ScanFamily::TsallisAlphaBeta),
            "Sab" => Ok(ScanFamily::RelativeAlphaBeta),
            other => Err(Error::Parse(format!(
                "unknown scan family {other:?}; expected Tab or Sab"
            ))),
        }
    }
}

impl fmt::Display for ScanFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanFamily::TsallisAlphaBeta => "Tab",
            ScanFamily::RelativeAlphaBeta => "Sab",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    ConvexConsistent,
    ConcaveConsistent,
    /// No violation in either direction, as for maps affine in `(A, B)`.
    Both,
    Neither,
}

impl Classification {
    fn from_verdicts(convex: Verdict, concave: Verdict) -> Self {
        match (convex, concave) {
            (Verdict::Consistent, Verdict::Consistent) => Classification::Both,
            (Verdict::Consistent, Verdict::Violated) => Classification::ConvexConsistent,
            (Verdict::Violated, Verdict::Consistent) => Classification::ConcaveConsistent,
            (Verdict::Violated, Verdict::Violated) => Classification::Neither,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::ConvexConsistent => "ConvexConsistent",
            Classification::ConcaveConsistent => "ConcaveConsistent",
            Classification::Both => "Both",
            Classification::Neither => "Neither",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanCell {
    pub alpha: f64,
    pub beta: f64,
    pub classification: Classification,
    pub worst_convex_margin: f64,
    pub worst_concave_margin: f64,
}

/// Probes both directions at every `(α, β)` grid point, row-major in `α`.
pub fn scan_regions(family: ScanFamily, alphas: &[f64], betas: &[f64], cfg: &ProbeConfig) -> Result<Vec<ScanCell>> {
    if alphas.is_empty() || betas.is_empty() {
        return Err(Error::InvalidConfig("scan grids must be nonempty".into()));
    }
    let reduced = ProbeConfig {
        trials: (cfg.trials / SCAN_TRIAL_DIVISOR).max(1),
        ..*cfg
    };
    let specs = alphas
        .iter()
        .flat_map(|&a| betas.iter().map(move |&b| (a, b)))
        .map(|(a, b)| family.spec(a, b).map(|spec| (a, b, spec)))
        .collect::<Result<Vec<_>>>()?;
    specs
        .into_iter()
        .map(|(alpha, beta, spec)| {
            let map = JointMap::Entropy(spec);
            let convex = probe_joint(&map, Direction::Convex, &reduced)?;
            let concave = probe_joint(&map, Direction::Concave, &reduced)?;
            Ok(ScanCell {
                alpha,
                beta,
                classification: Classification::from_verdicts(convex.verdict, concave.verdict),
                worst_convex_margin: convex.worst_margin,
                worst_concave_margin: concave.worst_margin,
            })
        })
        .collect()
}

pub fn scan_to_csv(cells: &[ScanCell]) -> String {
    let mut out = String::from(SCAN_CSV_HEADER);
    out.push('\n');
    for cell in cells {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            cell.alpha,
            cell.beta,
            cell.classification,
            format_f64(cell.worst_convex_margin),
            format_f64(cell.worst_concave_margin)
        ));
    }
    out
}
