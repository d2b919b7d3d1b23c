//! Seeded falsification campaigns for convexity claims in the Loewner order.
//!
//! A campaign draws `trials` independent samples. Trial `i` uses its own
//! generator, [`trial_rng`]`(seed, i)`, so trials can run in any order (they
//! run in parallel) and the report is still a pure function of the
//! configuration. Per trial:
//!
//! 1. a weight `c` is drawn uniformly from `[0, 1)`; every 10th trial forces
//!    `c` to cycle through `0, 0.5, 1`;
//! 2. the matrices are sampled (`A` from the configured spectrum, `B`
//!    dominated by `h(A)` with the configured ratio interval);
//! 3. the convexity inequality is checked with [`loewner_leq`] and its margin
//!    normalized by `max(1, ‖lhs‖₂, ‖rhs‖₂)`.
//!
//! A normalized margin below `−tol_rel` is a violation; margins in
//! `[−tol_rel, 0)` are counted as grazing.

mod map;
mod scan;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matfun::{
    apply_spectral, loewner_leq, random_spd, random_spd_dominated, HermitianMatrix, LoewnerOutcome, MatrixJson,
    SpectrumInterval, DEFAULT_TOL_REL,
};
use crate::perspective::{hpj_check, random_contraction_pair};
use crate::scalarfn::{jq_upper, Domain, ScalarFn};

pub use map::JointMap;
pub use scan::{scan_regions, scan_to_csv, Classification, ScanCell, ScanFamily, SCAN_CSV_HEADER};

/// Maximum number of counterexamples kept in a report.
pub const MAX_COUNTEREXAMPLES: usize = 10;
/// Every n-th trial uses a forced endpoint or midpoint weight.
pub const FORCED_WEIGHT_PERIOD: u64 = 10;
const FORCED_WEIGHTS: [f64; 3] = [0.0, 0.5, 1.0];
/// Relative outward padding of a confined kernel domain.
pub const CONFINEMENT_PADDING: f64 = 0.1;
pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Convex,
    Concave,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Convex => "convex",
            Direction::Concave => "concave",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Consistent,
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub dim: usize,
    pub trials: u64,
    pub seed: u64,
    pub tol_rel: f64,
    pub spectrum: SpectrumInterval,
    pub ratio: SpectrumInterval,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        let interval = SpectrumInterval::new(0.1, 10.0).expect("valid default interval");
        Self {
            dim: 3,
            trials: 1000,
            seed: 42,
            tol_rel: DEFAULT_TOL_REL,
            spectrum: interval,
            ratio: interval,
        }
    }
}

impl ProbeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(MIN_DIM..=MAX_DIM).contains(&self.dim) {
            return Err(Error::InvalidConfig(format!(
                "dim must lie in {MIN_DIM}..={MAX_DIM}, got {}",
                self.dim
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if !(self.tol_rel >= 0.0 && self.tol_rel.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tol must be finite and nonnegative, got {}",
                self.tol_rel
            )));
        }
        self.spectrum.check_sampleable()?;
        self.ratio.check_sampleable()
    }

    pub fn with_trials(mut self, trials: u64) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Generator for one trial: ChaCha8 keyed by `seed ⊕ trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ trial)
}

/// Draws the trial's convex weight, applying the forced-weight schedule.
pub fn trial_weight<R: Rng + ?Sized>(trial: u64, rng: &mut R) -> f64 {
    let drawn: f64 = rng.random();
    if trial.is_multiple_of(FORCED_WEIGHT_PERIOD) {
        FORCED_WEIGHTS[((trial / FORCED_WEIGHT_PERIOD) % 3) as usize]
    } else {
        drawn
    }
}

/// A violating sample, with the matrices needed to recompute its margin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Trial index, i.e. the offset XOR-ed into the seed.
    pub trial: u64,
    pub c: f64,
    pub dim: usize,
    pub a1: MatrixJson,
    pub a2: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b1: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b2: Option<MatrixJson>,
    /// Normalized Loewner margin.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub claim: String,
    pub direction: Direction,
    pub dim: usize,
    pub seed: u64,
    pub tol_rel: f64,
    pub spectrum: SpectrumInterval,
    pub ratio: SpectrumInterval,
    pub trials: u64,
    pub violations: u64,
    pub grazing: u64,
    /// Violations at `c ∈ {0, 1}`, where the inequality is an equality.
    /// Nonzero values point to a numerical defect, not a counterexample.
    pub endpoint_violations: u64,
    pub worst_margin: f64,
    pub counterexamples: Vec<Counterexample>,
    pub verdict: Verdict,
}

impl ProbeReport {
    pub fn to_json(&self) -> String {
        crate::json::to_string(self)
    }
}

/// Matrices drawn in one trial.
#[derive(Debug, Clone)]
struct Sample {
    a1: HermitianMatrix,
    a2: HermitianMatrix,
    b: Option<(HermitianMatrix, HermitianMatrix)>,
}

struct TrialOutcome {
    c: f64,
    normalized: f64,
    sample: Sample,
}

/// One trial's sampler and inequality check.
trait Trial: Sync {
    fn run(&self, rng: &mut ChaCha8Rng, dim: usize, c: f64, tol: f64) -> Result<(Sample, LoewnerOutcome)>;
}

fn directional_check(
    direction: Direction,
    at_combination: &HermitianMatrix,
    combination_of_values: &HermitianMatrix,
    tol: f64,
) -> Result<LoewnerOutcome> {
    match direction {
        Direction::Convex => loewner_leq(at_combination, combination_of_values, tol),
        Direction::Concave => loewner_leq(combination_of_values, at_combination, tol),
    }
}

struct OperatorTrial<'a> {
    f: &'a ScalarFn,
    direction: Direction,
    spectrum: SpectrumInterval,
}

impl Trial for OperatorTrial<'_> {
    fn run(&self, rng: &mut ChaCha8Rng, dim: usize, c: f64, tol: f64) -> Result<(Sample, LoewnerOutcome)> {
        let a1 = random_spd(dim, &self.spectrum, rng)?;
        let a2 = random_spd(dim, &self.spectrum, rng)?;
        let combined = HermitianMatrix::convex_combination(c, &a1, &a2)?;
        let lhs = apply_spectral(self.f, &combined)?;
        let rhs = HermitianMatrix::convex_combination(c, &apply_spectral(self.f, &a1)?, &apply_spectral(self.f, &a2)?)?;
        let outcome = directional_check(self.direction, &lhs, &rhs, tol)?;
        Ok((Sample { a1, a2, b: None }, outcome))
    }
}

struct JointTrial<'a> {
    map: &'a JointMap,
    direction: Direction,
    spectrum: SpectrumInterval,
    ratio: SpectrumInterval,
}

impl Trial for JointTrial<'_> {
    fn run(&self, rng: &mut ChaCha8Rng, dim: usize, c: f64, tol: f64) -> Result<(Sample, LoewnerOutcome)> {
        let a1 = random_spd(dim, &self.spectrum, rng)?;
        let a2 = random_spd(dim, &self.spectrum, rng)?;
        let b1 = random_spd_dominated(&self.map.weight(&a1)?, &self.ratio, rng)?;
        let b2 = random_spd_dominated(&self.map.weight(&a2)?, &self.ratio, rng)?;
        let a = HermitianMatrix::convex_combination(c, &a1, &a2)?;
        let b = HermitianMatrix::convex_combination(c, &b1, &b2)?;
        let lhs = self.map.evaluate(&a, &b)?;
        let rhs = HermitianMatrix::convex_combination(c, &self.map.evaluate(&a1, &b1)?, &self.map.evaluate(&a2, &b2)?)?;
        let outcome = directional_check(self.direction, &lhs, &rhs, tol)?;
        Ok((
            Sample {
                a1,
                a2,
                b: Some((b1, b2)),
            },
            outcome,
        ))
    }
}

fn run_trial(trial: &dyn Trial, cfg: &ProbeConfig, index: u64, dim: usize) -> Result<TrialOutcome> {
    let mut rng = trial_rng(cfg.seed, index);
    let c = trial_weight(index, &mut rng);
    let (sample, outcome) = trial.run(&mut rng, dim, c, cfg.tol_rel)?;
    Ok(TrialOutcome {
        c,
        normalized: outcome.normalized_margin(),
        sample,
    })
}

fn counterexample(index: u64, dim: usize, outcome: &TrialOutcome) -> Counterexample {
    let (b1, b2) = match &outcome.sample.b {
        Some((b1, b2)) => (Some(MatrixJson::from(b1)), Some(MatrixJson::from(b2))),
        None => (None, None),
    };
    Counterexample {
        trial: index,
        c: outcome.c,
        dim,
        a1: MatrixJson::from(&outcome.sample.a1),
        a2: MatrixJson::from(&outcome.sample.a2),
        b1,
        b2,
        margin: outcome.normalized,
    }
}

fn run_campaign(claim: String, direction: Direction, cfg: &ProbeConfig, trial: &dyn Trial) -> Result<ProbeReport> {
    let outcomes = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(trial, cfg, i, cfg.dim))
        .collect::<Result<Vec<_>>>()?;

    let tol = cfg.tol_rel;
    let mut violations = 0;
    let mut grazing = 0;
    let mut endpoint_violations = 0;
    let mut worst_margin = f64::INFINITY;
    let mut counterexamples = Vec::new();
    for (i, outcome) in (0..cfg.trials).zip(&outcomes) {
        let m = outcome.normalized;
        worst_margin = worst_margin.min(m);
        if m < -tol {
            violations += 1;
            if outcome.c == 0.0 || outcome.c == 1.0 {
                endpoint_violations += 1;
            }
            if counterexamples.len() < MAX_COUNTEREXAMPLES {
                counterexamples.push(minimized_counterexample(trial, cfg, i, outcome)?);
            }
        } else if m < 0.0 {
            grazing += 1;
        }
    }
    Ok(ProbeReport {
        claim,
        direction,
        dim: cfg.dim,
        seed: cfg.seed,
        tol_rel: tol,
        spectrum: cfg.spectrum,
        ratio: cfg.ratio,
        trials: cfg.trials,
        violations,
        grazing,
        endpoint_violations,
        worst_margin,
        verdict: if violations > 0 {
            Verdict::Violated
        } else {
            Verdict::Consistent
        },
        counterexamples,
    })
}

/// Replays the trial's substream at dimension 2 and keeps the smaller
/// witness when it still violates.
fn minimized_counterexample(
    trial: &dyn Trial,
    cfg: &ProbeConfig,
    index: u64,
    outcome: &TrialOutcome,
) -> Result<Counterexample> {
    if cfg.dim > MIN_DIM {
        let small = run_trial(trial, cfg, index, MIN_DIM)?;
        if small.normalized < -cfg.tol_rel {
            return Ok(counterexample(index, MIN_DIM, &small));
        }
    }
    Ok(counterexample(index, cfg.dim, outcome))
}

/// Tests `f(cA₁ + (1−c)A₂) ⪯ c f(A₁) + (1−c) f(A₂)` (reversed for
/// `Concave`) on random strictly positive `A₁, A₂`.
pub fn probe_operator_convexity(f: &ScalarFn, direction: Direction, cfg: &ProbeConfig) -> Result<ProbeReport> {
    cfg.validate()?;
    if !f.domain().contains_interval(&cfg.spectrum) {
        return Err(Error::DomainMismatch {
            sampling: cfg.spectrum.to_string(),
            domain: f.domain().to_string(),
        });
    }
    let trial = OperatorTrial {
        f,
        direction,
        spectrum: cfg.spectrum,
    };
    run_campaign(format!("operator {direction}ity of {f}"), direction, cfg, &trial)
}

/// Tests joint convexity (or concavity) of a two-argument map, with `B`
/// dominated by the map's weight `h(A)` so that the inner argument
/// `h(A)^{-1/2} B h(A)^{-1/2}` has spectrum in `cfg.ratio`.
pub fn probe_joint(map: &JointMap, direction: Direction, cfg: &ProbeConfig) -> Result<ProbeReport> {
    probe_joint_labeled(map, direction, cfg, format!("joint {direction}ity of {map}"))
}

fn probe_joint_labeled(map: &JointMap, direction: Direction, cfg: &ProbeConfig, claim: String) -> Result<ProbeReport> {
    cfg.validate()?;
    let kernel = map.kernel()?;
    if !kernel.domain().contains_interval(&cfg.ratio) {
        return Err(Error::DomainMismatch {
            sampling: cfg.ratio.to_string(),
            domain: kernel.domain().to_string(),
        });
    }
    let trial = JointTrial {
        map,
        direction,
        spectrum: cfg.spectrum,
        ratio: cfg.ratio,
    };
    run_campaign(claim, direction, cfg, &trial)
}

/// Joint convexity of `S_q` with spectra and inner ratios confined to
/// `(0, jq_upper(q)]`.
pub fn probe_sq_with_domain(q: f64, cfg: &ProbeConfig) -> Result<ProbeReport> {
    probe_confined(q, 1.0, cfg, format!("joint convexity of Sq:{q} on (0, J_q]"))
}

/// Joint convexity of `S_{α,β}` with spectra and inner ratios confined to
/// `(0, jq_upper(α)]`; `B` is dominated against `A^β`.
pub fn probe_sab_with_domain(alpha: f64, beta: f64, cfg: &ProbeConfig) -> Result<ProbeReport> {
    probe_confined(
        alpha,
        beta,
        cfg,
        format!("joint convexity of Sab:{alpha},{beta} on (0, J_alpha]"),
    )
}

fn probe_confined(alpha: f64, beta: f64, cfg: &ProbeConfig, claim: String) -> Result<ProbeReport> {
    let upper = jq_upper(alpha)?;
    if !beta.is_finite() {
        return Err(Error::ParameterOutOfRange {
            name: "beta",
            value: beta,
            reason: "must be finite".into(),
        });
    }
    let confinement = Domain::new(0.0, false, upper, true);
    for interval in [&cfg.spectrum, &cfg.ratio] {
        if !confinement.contains_interval(interval) {
            return Err(Error::DomainMismatch {
                sampling: interval.to_string(),
                domain: confinement.to_string(),
            });
        }
    }
    let padded = Domain::new(0.0, false, upper * (1.0 + CONFINEMENT_PADDING), true);
    let kernel = ScalarFn::power_log(alpha)?.restrict(&padded)?;
    let map = if beta == 1.0 {
        JointMap::Perspective(kernel)
    } else {
        JointMap::GeneralizedPerspective {
            f: kernel,
            h: ScalarFn::power(beta),
        }
    };
    probe_joint_labeled(&map, Direction::Convex, cfg, claim)
}

struct HpjTrial<'a> {
    f: &'a ScalarFn,
    spectrum: SpectrumInterval,
}

impl Trial for HpjTrial<'_> {
    fn run(&self, rng: &mut ChaCha8Rng, dim: usize, _c: f64, tol: f64) -> Result<(Sample, LoewnerOutcome)> {
        let x1 = random_spd(dim, &self.spectrum, rng)?;
        let x2 = random_spd(dim, &self.spectrum, rng)?;
        let (t1, t2) = random_contraction_pair(dim, rng);
        let outcome = hpj_check(self.f, &x1, &x2, &t1, &t2, tol)?;
        Ok((
            Sample {
                a1: x1,
                a2: x2,
                b: None,
            },
            outcome,
        ))
    }
}

/// Random-contraction campaign for the Jensen-type inequality checked by
/// [`hpj_check`]. The reported `c` is unused by the check.
pub fn probe_hpj(f: &ScalarFn, cfg: &ProbeConfig) -> Result<ProbeReport> {
    cfg.validate()?;
    if !f.domain().contains(0.0) || !f.domain().contains_interval(&cfg.spectrum) {
        return Err(Error::DomainMismatch {
            sampling: format!("{} and 0", cfg.spectrum),
            domain: f.domain().to_string(),
        });
    }
    let trial = HpjTrial {
        f,
        spectrum: cfg.spectrum,
    };
    run_campaign(
        format!("contractive Jensen inequality for {f}"),
        Direction::Convex,
        cfg,
        &trial,
    )
}
