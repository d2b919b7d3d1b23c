//! Command-line front end. Exit codes: 0 pass, 1 violation, 2 usage or
//! domain error.

pub mod registry;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::entropy::{superoperator_identity, EntropySpec};
use crate::error::{Error, Result};
use crate::matfun::{matrix_from_json, HermitianMatrix, SpectrumInterval};
use crate::probe::{scan_regions, scan_to_csv, JointMap, ProbeConfig, ScanFamily, Verdict};

pub use registry::{lookup, registry, Claim, ClaimTarget, Expectation};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
/// Relative residual accepted by `check-identity`.
pub const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "opentropy",
    version,
    about = "Relative operator entropies and seeded convexity probes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate an entropy (S, Sq:q, Sab:a,b, T:lam, Tab:a,b) on two matrix files.
    Compute {
        spec: String,
        a: PathBuf,
        b: PathBuf,
        /// Divide each input by its trace first.
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a probe campaign for a claim id and write its JSON report.
    Probe {
        claim: String,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify an (alpha, beta) grid of Tab or Sab and write CSV.
    Scan {
        family: String,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        alpha: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        beta: Vec<f64>,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare -<S(L_rho|R_sigma)(I), I> with the Umegaki relative entropy.
    CheckIdentity { rho: PathBuf, sigma: PathBuf },
    /// Run every registered claim at reduced trials.
    Selftest {
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct SamplingArgs {
    /// Matrix dimension; defaults to the claim's registered dimension (3 for most).
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = crate::matfun::DEFAULT_TOL_REL)]
    tol: f64,
    #[arg(long, allow_negative_numbers = true)]
    spec_lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    spec_hi: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    ratio_lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    ratio_hi: Option<f64>,
}

impl SamplingArgs {
    fn apply(&self, base: ProbeConfig) -> Result<ProbeConfig> {
        let override_interval = |b: SpectrumInterval, lo: Option<f64>, hi: Option<f64>| {
            SpectrumInterval::new(lo.unwrap_or(b.lo()), hi.unwrap_or(b.hi()))
        };
        let cfg = ProbeConfig {
            dim: self.dim.unwrap_or(base.dim),
            trials: self.trials,
            seed: self.seed,
            tol_rel: self.tol,
            spectrum: override_interval(base.spectrum, self.spec_lo, self.spec_hi)?,
            ratio: override_interval(base.ratio, self.ratio_lo, self.ratio_hi)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Compute {
            spec,
            a,
            b,
            normalize,
            out,
        } => cmd_compute(&spec, &a, &b, normalize, out.as_deref(), stdout),
        Command::Probe { claim, sampling, out } => cmd_probe(&claim, &sampling, out.as_deref(), stdout),
        Command::Scan {
            family,
            alpha,
            beta,
            sampling,
            out,
        } => cmd_scan(&family, &alpha, &beta, &sampling, out.as_deref(), stdout),
        Command::CheckIdentity { rho, sigma } => cmd_check_identity(&rho, &sigma, stdout),
        Command::Selftest { trials, seed } => cmd_selftest(trials, seed, stdout),
    }
}

fn read_matrix(path: &Path) -> Result<HermitianMatrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    matrix_from_json(&text)
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Error::InvalidConfig(format!("cannot write {}: {e}", path.display())))
        }
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::InvalidConfig(format!("cannot write to stdout: {e}"))),
    }
}

fn line(mut text: String) -> String {
    text.push('\n');
    text
}

#[derive(Serialize)]
struct ComputeOutput {
    matrix: Vec<Vec<f64>>,
    trace: f64,
    min_eigenvalue: f64,
}

fn trace_normalized(m: HermitianMatrix) -> Result<HermitianMatrix> {
    let t = m.trace();
    if !(t > 0.0) {
        return Err(Error::DomainViolation {
            value: t,
            domain: "positive trace required by --normalize".into(),
        });
    }
    Ok(m.scale(1.0 / t))
}

fn cmd_compute(
    spec: &str,
    a: &Path,
    b: &Path,
    normalize: bool,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let spec: EntropySpec = spec.parse()?;
    registry::check_cli_beta(&JointMap::Entropy(spec))?;
    let (mut a, mut b) = (read_matrix(a)?, read_matrix(b)?);
    if normalize {
        a = trace_normalized(a)?;
        b = trace_normalized(b)?;
    }
    let m = spec.evaluate(&a, &b)?;
    let output = ComputeOutput {
        matrix: m.rows(),
        trace: m.trace(),
        min_eigenvalue: m.min_eigenvalue(),
    };
    emit(out, &line(crate::json::to_string(&output)), stdout)?;
    Ok(EXIT_PASS)
}

fn cmd_probe(id: &str, sampling: &SamplingArgs, out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32> {
    let claim = lookup(id)?;
    let cfg = sampling.apply(claim.config(sampling.trials, sampling.seed))?;
    let report = claim.run(&cfg)?;
    emit(out, &line(report.to_json()), stdout)?;
    Ok(match report.verdict {
        Verdict::Consistent => EXIT_PASS,
        Verdict::Violated => EXIT_VIOLATION,
    })
}

fn cmd_scan(
    family: &str,
    alphas: &[f64],
    betas: &[f64],
    sampling: &SamplingArgs,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let family: ScanFamily = family.parse()?;
    if let Some(&beta) = betas.iter().find(|b| b.abs() > registry::MAX_ABS_BETA) {
        return Err(Error::ParameterOutOfRange {
            name: "beta",
            value: beta,
            reason: format!("command-line beta must lie in [-{0}, {0}]", registry::MAX_ABS_BETA),
        });
    }
    let cfg = sampling.apply(ProbeConfig::default())?;
    let cells = scan_regions(family, alphas, betas, &cfg)?;
    emit(out, &scan_to_csv(&cells), stdout)?;
    Ok(EXIT_PASS)
}

fn cmd_check_identity(rho: &Path, sigma: &Path, stdout: &mut dyn Write) -> Result<i32> {
    let check = superoperator_identity(&read_matrix(rho)?, &read_matrix(sigma)?)?;
    emit(None, &line(crate::json::to_string(&check)), stdout)?;
    Ok(if check.residual <= IDENTITY_TOL * check.rhs.abs().max(1.0) {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    })
}

fn cmd_selftest(trials: u64, seed: u64, stdout: &mut dyn Write) -> Result<i32> {
    let mut failures = 0;
    let claims = registry();
    for claim in &claims {
        let text = match claim.run(&claim.config(trials, seed)) {
            Ok(report) => {
                let status = match claim.expectation.matches(report.verdict) {
                    Some(true) => "PASS",
                    Some(false) => {
                        failures += 1;
                        "FAIL"
                    }
                    None => "INFO",
                };
                format!(
                    "{status} {} expected={} verdict={:?} violations={}/{} worst_margin={}",
                    claim.id,
                    claim.expectation,
                    report.verdict,
                    report.violations,
                    report.trials,
                    crate::json::format_f64(report.worst_margin)
                )
            }
            Err(e) => {
                failures += 1;
                format!("FAIL {} error: {e}", claim.id)
            }
        };
        emit(None, &line(text), stdout)?;
    }
    emit(
        None,
        &line(format!("selftest: {} claims, {failures} failed", claims.len())),
        stdout,
    )?;
    Ok(if failures == 0 { EXIT_PASS } else { EXIT_VIOLATION })
}
