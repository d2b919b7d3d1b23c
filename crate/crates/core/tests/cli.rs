use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nalgebra::{DMatrix, SymmetricEigen};
use opentropy::matfun::{matrix_to_json, random_spd, MatrixJson};
use opentropy::probe::ProbeReport;
use opentropy::{HermitianMatrix, SpectrumInterval};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tempfile::TempDir;

fn opentropy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opentropy"))
        .args(args)
        .output()
        .unwrap()
}

fn write_matrix(dir: &TempDir, name: &str, m: &HermitianMatrix) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, matrix_to_json(m)).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn matrix_of(output: &Value) -> Vec<Vec<f64>> {
    serde_json::from_value(output["matrix"].clone()).unwrap()
}

fn pair(seed: u64, dim: usize) -> (HermitianMatrix, HermitianMatrix) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spectrum = SpectrumInterval::new(0.2, 5.0).unwrap();
    (
        random_spd(dim, &spectrum, &mut rng).unwrap(),
        random_spd(dim, &spectrum, &mut rng).unwrap(),
    )
}

fn compute(dir: &TempDir, spec: &str, a: &HermitianMatrix, b: &HermitianMatrix) -> Value {
    let (pa, pb) = (write_matrix(dir, "a.json", a), write_matrix(dir, "b.json", b));
    let out = opentropy(&["compute", spec, s(&pa), s(&pb)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn compute_on_identity_is_zero() {
    let dir = TempDir::new().unwrap();
    let id = HermitianMatrix::identity(2);
    let v = compute(&dir, "S", &id, &id);
    assert!(matrix_of(&v).iter().flatten().all(|&x| x == 0.0));
    assert_eq!(v["trace"].as_f64(), Some(0.0));
}

#[test]
fn tsallis_one_is_difference() {
    let dir = TempDir::new().unwrap();
    let (a, b) = pair(3, 3);
    let got = matrix_of(&compute(&dir, "T:1", &a, &b));
    for (i, row) in got.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            assert!((x - (b.get(i, j) - a.get(i, j))).abs() <= 1e-12);
        }
    }
}

#[test]
fn sq_zero_matches_s() {
    let dir = TempDir::new().unwrap();
    let (a, b) = pair(4, 3);
    assert_eq!(compute(&dir, "Sq:0", &a, &b), compute(&dir, "S", &a, &b));
}

#[test]
fn compute_output_round_trips_bit_exactly() {
    let dir = TempDir::new().unwrap();
    let (a, b) = pair(5, 4);
    let (pa, pb) = (write_matrix(&dir, "a.json", &a), write_matrix(&dir, "b.json", &b));
    let out_path = dir.path().join("out.json");
    let out = opentropy(&["compute", "Tab:1.5,0.5", s(&pa), s(&pb), "--out", s(&out_path)]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let rows = matrix_of(&v);
    let expected = "Tab:1.5,0.5"
        .parse::<opentropy::entropy::EntropySpec>()
        .unwrap()
        .evaluate(&a, &b)
        .unwrap();
    for (row, want) in rows.iter().zip(expected.rows()) {
        for (x, y) in row.iter().zip(want) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
    let reparsed = MatrixJson { dim: rows.len(), rows }.to_matrix().unwrap();
    assert_eq!(matrix_to_json(&reparsed), matrix_to_json(&expected));
}

#[test]
fn normalize_divides_by_trace() {
    let dir = TempDir::new().unwrap();
    let (a, b) = pair(6, 2);
    let (pa, pb) = (
        write_matrix(&dir, "a.json", &a.scale(3.0)),
        write_matrix(&dir, "b.json", &b.scale(7.0)),
    );
    let out = opentropy(&["compute", "S", s(&pa), s(&pb), "--normalize"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let direct = compute(&dir, "S", &a.scale(1.0 / a.trace()), &b.scale(1.0 / b.trace()));
    let (x, y) = (v["trace"].as_f64().unwrap(), direct["trace"].as_f64().unwrap());
    assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
}

#[test]
fn compute_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let (a, _) = pair(7, 2);
    let (b3, _) = pair(7, 3);
    let (pa, pb) = (write_matrix(&dir, "a.json", &a), write_matrix(&dir, "b.json", &b3));
    assert_eq!(opentropy(&["compute", "S", s(&pa), s(&pb)]).status.code(), Some(2));
    assert_eq!(
        opentropy(&["compute", "Sab:0.5,3", s(&pa), s(&pa)]).status.code(),
        Some(2)
    );
    assert_eq!(opentropy(&["compute", "nope", s(&pa), s(&pa)]).status.code(), Some(2));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dim":2,"rows":[[1,5],[0,1]]}"#).unwrap();
    assert_eq!(opentropy(&["compute", "S", s(&bad), s(&pa)]).status.code(), Some(2));
    assert_eq!(
        opentropy(&["compute", "S", "/nonexistent.json", s(&pa)]).status.code(),
        Some(2)
    );
}

#[test]
fn probe_exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        opentropy(&["probe", "thm2.6-fujii:S:concave", "--trials", "1000"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(opentropy(&["probe", "lem2.1:dlog:1.5:opconvex"]).status.code(), Some(0));
    let report = dir.path().join("report.json");
    let out = opentropy(&[
        "probe",
        "adhoc:pow:3:opconvex",
        "--spec-lo",
        "0.1",
        "--spec-hi",
        "10",
        "--out",
        s(&report),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r: ProbeReport = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(r.violations > 0 && !r.counterexamples.is_empty());
    assert_eq!(opentropy(&["probe", "thm9.9:S:concave"]).status.code(), Some(2));
    assert_eq!(
        opentropy(&["probe", "thm2.6-fujii:S:concave", "--dim", "12"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        opentropy(&["probe", "cor3.8:Sq:0.5:convex", "--ratio-hi", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        opentropy(&["probe", "thm2.6-fujii:S:concave", "--spec-lo", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(opentropy(&["frobnicate"]).status.code(), Some(2));
}

fn scan(args: &[&str]) -> (Option<i32>, Vec<Vec<String>>) {
    let mut full = vec!["scan"];
    full.extend_from_slice(args);
    let out = opentropy(&full);
    let rows = String::from_utf8_lossy(&out.stdout)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (out.status.code(), rows)
}

#[test]
fn scan_classifies_grid() {
    let (code, rows) = scan(&["Tab", "--alpha", "1,1.5,2", "--beta", "0,0.5,1", "--trials", "500"]);
    assert_eq!(code, Some(0));
    assert_eq!(rows.len(), 9);
    for row in &rows {
        // Cells where the map is affine in (A, B) hold in both directions.
        let affine = row[0] == "1" && (row[1] == "0" || row[1] == "1");
        let want = if affine { "Both" } else { "ConvexConsistent" };
        assert_eq!(row[2], want, "{row:?}");
    }
    let (code, rows) = scan(&["Tab", "--alpha", "0.5", "--beta", "1", "--trials", "500"]);
    assert_eq!(code, Some(0));
    assert_eq!(rows[0][2], "ConcaveConsistent");
}

#[test]
fn scan_rejects_bad_grids() {
    assert_eq!(scan(&["Tab", "--beta", "0.5"]).0, Some(2));
    assert_eq!(scan(&["Tab", "--alpha", "", "--beta", "0.5"]).0, Some(2));
    assert_eq!(scan(&["Tab", "--alpha", "0", "--beta", "0.5"]).0, Some(2));
    assert_eq!(scan(&["Tab", "--alpha", "1", "--beta", "2.5"]).0, Some(2));
    assert_eq!(scan(&["Qab", "--alpha", "1", "--beta", "0.5"]).0, Some(2));
}

/// `Σ_ij p_i |⟨u_i, v_j⟩|² (log p_i − log q_j)` from both eigenbases.
fn relative_entropy_oracle(rho: &HermitianMatrix, sigma: &HermitianMatrix) -> f64 {
    let (er, es) = (
        SymmetricEigen::new(rho.as_matrix().clone()),
        SymmetricEigen::new(sigma.as_matrix().clone()),
    );
    let overlap: DMatrix<f64> = er.eigenvectors.transpose() * &es.eigenvectors;
    let mut h = 0.0;
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            let (p, q) = (er.eigenvalues[i], es.eigenvalues[j]);
            h += p * overlap[(i, j)].powi(2) * (p.ln() - q.ln());
        }
    }
    h
}

fn check_identity(dir: &TempDir, rho: &HermitianMatrix, sigma: &HermitianMatrix) -> (Option<i32>, Value) {
    let (pr, ps) = (
        write_matrix(dir, "rho.json", rho),
        write_matrix(dir, "sigma.json", sigma),
    );
    let out = opentropy(&["check-identity", s(&pr), s(&ps)]);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code(), v)
}

#[test]
fn identity_holds_for_equal_states() {
    let dir = TempDir::new().unwrap();
    let rho = HermitianMatrix::diagonal(&[0.7, 0.2, 0.1]);
    let (code, v) = check_identity(&dir, &rho, &rho);
    assert_eq!(code, Some(0));
    assert!(v["residual"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn identity_matches_scalar_kl_for_diagonal_pair() {
    let dir = TempDir::new().unwrap();
    let (p, q) = ([0.6, 0.4], [0.3, 0.7]);
    let (code, v) = check_identity(&dir, &HermitianMatrix::diagonal(&p), &HermitianMatrix::diagonal(&q));
    assert_eq!(code, Some(0));
    let kl: f64 = p.iter().zip(&q).map(|(a, b)| a * (a / b).ln()).sum();
    assert!((v["rhs"].as_f64().unwrap() - kl).abs() < 1e-14);
}

#[test]
fn identity_matches_eigenbasis_oracle_for_random_pair() {
    let dir = TempDir::new().unwrap();
    let (a, b) = pair(2024, 3);
    let (rho, sigma) = (a.scale(1.0 / a.trace()), b.scale(1.0 / b.trace()));
    let (code, v) = check_identity(&dir, &rho, &sigma);
    assert_eq!(code, Some(0));
    let oracle = relative_entropy_oracle(&rho, &sigma);
    assert!((v["lhs"].as_f64().unwrap() - oracle).abs() <= 1e-10 * oracle.abs().max(1.0));
}

#[test]
fn identity_rejects_non_positive_input() {
    let dir = TempDir::new().unwrap();
    let singular = HermitianMatrix::diagonal(&[1.0, 0.0]);
    let (code, _) = check_identity(&dir, &singular, &HermitianMatrix::identity(2));
    assert_eq!(code, Some(2));
}

#[test]
fn help_exits_zero() {
    let out = opentropy(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("selftest"));
}
