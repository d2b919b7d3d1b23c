//! Noncommutative perspectives
//!
//! ```text
//! Π_f(A, B)    = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}
//! Π_{fΔh}(A, B) = h(A)^{1/2} f(h(A)^{-1/2} B h(A)^{-1/2}) h(A)^{1/2}
//! ```
//!
//! For commuting `A`, `B` these reduce to `a·f(b/a)` and `h(a)·f(b/h(a))`
//! per shared eigenvector.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matfun::{apply_spectral, loewner_leq, HermitianMatrix, LoewnerOutcome};
use crate::scalarfn::ScalarFn;

/// Π_f with the first argument given as `weight` (already strictly positive).
fn perspective_with_weight(f: &ScalarFn, weight: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    weight.check_dim(b)?;
    let decomposition = weight.require_strictly_positive()?;
    let sqrt_w = decomposition.map(f64::sqrt);
    let inv_sqrt_w = decomposition.map(|t| 1.0 / t.sqrt());
    let inner = inv_sqrt_w.sandwich(b)?;
    let inner_eigen = inner.decompose();
    // The inner argument is congruent to B, so its inertia is B's.
    if !f.domain().contains(0.0) && f.domain().lo() >= 0.0 && inner_eigen.min() <= 0.0 {
        return Err(Error::NotStrictlyPositive {
            min_eigenvalue: inner_eigen.min(),
        });
    }
    let f_inner = inner_eigen.try_map(|t| f.eval(t))?;
    sqrt_w.sandwich(&f_inner)
}

/// `Π_f(A, B)`. Requires `A` strictly positive and the spectrum of
/// `A^{-1/2} B A^{-1/2}` inside `f`'s domain.
pub fn perspective(f: &ScalarFn, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    perspective_with_weight(f, a, b)
}

/// `Π_{fΔh}(A, B)`. Requires `A` and `h(A)` strictly positive.
pub fn generalized_perspective(
    f: &ScalarFn,
    h: &ScalarFn,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    a.check_dim(b)?;
    a.require_strictly_positive()?;
    let weight = apply_spectral(h, a)?;
    perspective_with_weight(f, &weight, b)
}

/// Checks the Jensen-type operator inequality
///
/// ```text
/// f(T1ᵀ X1 T1 + T2ᵀ X2 T2) ⪯ T1ᵀ f(X1) T1 + T2ᵀ f(X2) T2
/// ```
///
/// for a contraction pair, `T1ᵀT1 + T2ᵀT2 ⪯ I`.
pub fn hpj_check(
    f: &ScalarFn,
    x1: &HermitianMatrix,
    x2: &HermitianMatrix,
    t1: &DMatrix<f64>,
    t2: &DMatrix<f64>,
    tol_rel: f64,
) -> Result<LoewnerOutcome> {
    x1.check_dim(x2)?;
    let n = x1.dim();
    for t in [t1, t2] {
        if t.nrows() != n || t.ncols() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: if t.nrows() != n { t.nrows() } else { t.ncols() },
            });
        }
    }
    let gram = HermitianMatrix::new(t1.transpose() * t1 + t2.transpose() * t2)?;
    let contraction = loewner_leq(&gram, &HermitianMatrix::identity(n), tol_rel)?;
    if !contraction.holds {
        return Err(Error::ContractionViolation {
            margin: contraction.margin,
        });
    }
    let combined = x1.congruence(t1)?.checked_add(&x2.congruence(t2)?)?;
    let lhs = apply_spectral(f, &combined)?;
    let rhs = apply_spectral(f, x1)?
        .congruence(t1)?
        .checked_add(&apply_spectral(f, x2)?.congruence(t2)?)?;
    loewner_leq(&lhs, &rhs, tol_rel)
}

/// Gaussian pair scaled so that `λ_max(T1ᵀT1 + T2ᵀT2) = u`, `u` uniform on `(0, 1]`.
pub fn random_contraction_pair<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut gaussian = || DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let g1 = gaussian();
    let g2 = gaussian();
    let gram = HermitianMatrix::new(g1.transpose() * &g1 + g2.transpose() * &g2).expect("square Gram matrix");
    let top = gram.decompose().max();
    let u = 1.0 - rng.random::<f64>();
    let s = (u / top).sqrt();
    (g1 * s, g2 * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matfun::{random_spd, random_spd_dominated, SpectrumInterval};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn interval(lo: f64, hi: f64) -> SpectrumInterval {
        SpectrumInterval::new(lo, hi).unwrap()
    }

    fn max_diff(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
        (a - b).max_abs_entry()
    }

    fn scale(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
        1f64.max(a.spectral_norm()).max(b.spectral_norm())
    }

    #[test]
    fn identity_first_argument_gives_f_of_b() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = random_spd(3, &interval(0.1, 10.0), &mut rng).unwrap();
        for f in [
            ScalarFn::log(),
            ScalarFn::power(2.0),
            ScalarFn::deformed_log(-0.5).unwrap(),
        ] {
            let p = perspective(&f, &HermitianMatrix::identity(3), &b).unwrap();
            let expected = apply_spectral(&f, &b).unwrap();
            assert!(max_diff(&p, &expected) <= 1e-10 * scale(&p, &expected));
        }
    }

    #[test]
    fn equal_arguments_give_f_of_one_times_a() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_spd(3, &interval(0.1, 10.0), &mut rng).unwrap();
        let f = ScalarFn::affine(2.0, 3.0).unwrap();
        let p = perspective(&f, &a, &a).unwrap();
        assert!(max_diff(&p, &a.scale(5.0)) <= 1e-10 * scale(&p, &a));
        let p = perspective(&ScalarFn::log(), &a, &a).unwrap();
        assert!(p.max_abs_entry() <= 1e-12 * a.spectral_norm());
    }

    #[test]
    fn commuting_pair_matches_scalar_perspective() {
        let a = [0.5, 2.0, 3.0];
        let b = [1.5, 0.25, 3.0];
        let f = ScalarFn::power_log(0.3).unwrap();
        let p = perspective(&f, &HermitianMatrix::diagonal(&a), &HermitianMatrix::diagonal(&b)).unwrap();
        let expected: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * f.eval(y / x).unwrap()).collect();
        assert!(max_diff(&p, &HermitianMatrix::diagonal(&expected)) <= 1e-12);
    }

    #[test]
    fn rejects_non_positive_first_argument() {
        let a = HermitianMatrix::diagonal(&[1.0, 0.0]);
        let err = perspective(&ScalarFn::log(), &a, &HermitianMatrix::identity(2)).unwrap_err();
        assert!(matches!(err, Error::NotStrictlyPositive { .. }));
    }

    #[test]
    fn log_requires_positive_second_argument() {
        let err = perspective(
            &ScalarFn::log(),
            &HermitianMatrix::identity(2),
            &HermitianMatrix::diagonal(&[1.0, -1.0]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotStrictlyPositive { .. }));
    }

    #[test]
    fn power_accepts_indefinite_second_argument() {
        let b = HermitianMatrix::diagonal(&[1.0, -1.0]);
        let p = perspective(&ScalarFn::power(2.0), &HermitianMatrix::identity(2), &b).unwrap();
        assert!(max_diff(&p, &HermitianMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn output_is_exactly_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_spd(4, &interval(0.1, 10.0), &mut rng).unwrap();
        let b = random_spd(4, &interval(0.1, 10.0), &mut rng).unwrap();
        let p = perspective(&ScalarFn::log(), &a, &b).unwrap();
        let m = p.as_matrix();
        assert_eq!(m, &m.transpose());
    }

    #[test]
    fn generalized_with_identity_weight_is_perspective() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_spd(3, &interval(0.1, 10.0), &mut rng).unwrap();
        let b = random_spd(3, &interval(0.1, 10.0), &mut rng).unwrap();
        let f = ScalarFn::deformed_log(1.5).unwrap();
        let g = generalized_perspective(&f, &ScalarFn::identity(), &a, &b).unwrap();
        let p = perspective(&f, &a, &b).unwrap();
        assert!(max_diff(&g, &p) <= 1e-10 * scale(&g, &p));
    }

    #[test]
    fn generalized_scalar_case() {
        let (a, s) = (2.5, 0.7);
        let f = ScalarFn::log();
        let h = ScalarFn::power(0.5);
        let g =
            generalized_perspective(&f, &h, &HermitianMatrix::scalar(3, a), &HermitianMatrix::scalar(3, s)).unwrap();
        let ha = a.sqrt();
        let expected = HermitianMatrix::scalar(3, ha * (s / ha).ln());
        assert!(max_diff(&g, &expected) <= 1e-14);
    }

    #[test]
    fn generalized_at_identity_is_generalized_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_spd(3, &interval(0.1, 10.0), &mut rng).unwrap();
        let f = ScalarFn::power_log(0.5).unwrap();
        let h = ScalarFn::power(0.75);
        let lhs = generalized_perspective(&f, &h, &a, &HermitianMatrix::identity(3)).unwrap();
        let rhs = apply_spectral(&ScalarFn::generalized_transpose(&f, &h), &a).unwrap();
        assert!(max_diff(&lhs, &rhs) <= 1e-10 * scale(&lhs, &rhs));
    }

    #[test]
    fn weight_must_be_positive() {
        let h = ScalarFn::affine(1.0, -5.0).unwrap();
        let err = generalized_perspective(
            &ScalarFn::log(),
            &h,
            &HermitianMatrix::identity(2),
            &HermitianMatrix::identity(2),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotStrictlyPositive { .. }));
    }

    #[test]
    fn hpj_reduces_to_convex_combination() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let x1 = random_spd(3, &interval(0.1, 10.0), &mut rng).unwrap();
        let x2 = random_spd(3, &interval(0.1, 10.0), &mut rng).unwrap();
        let c: f64 = 0.3;
        let t1 = DMatrix::identity(3, 3) * c.sqrt();
        let t2 = DMatrix::identity(3, 3) * (1.0 - c).sqrt();
        let f = ScalarFn::power(2.0);
        let hpj = hpj_check(&f, &x1, &x2, &t1, &t2, 1e-8).unwrap();
        let comb = HermitianMatrix::convex_combination(c, &x1, &x2).unwrap();
        let lhs = apply_spectral(&f, &comb).unwrap();
        let rhs = HermitianMatrix::convex_combination(
            c,
            &apply_spectral(&f, &x1).unwrap(),
            &apply_spectral(&f, &x2).unwrap(),
        )
        .unwrap();
        let direct = loewner_leq(&lhs, &rhs, 1e-8).unwrap();
        assert!(hpj.holds && direct.holds);
        assert!((hpj.margin - direct.margin).abs() <= 1e-10 * direct.scale);
    }

    #[test]
    fn hpj_trivial_contraction_is_equality() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x1 = random_spd(3, &interval(0.1, 10.0), &mut rng).unwrap();
        let x2 = random_spd(3, &interval(0.1, 10.0), &mut rng).unwrap();
        let out = hpj_check(
            &ScalarFn::deformed_log(1.5).unwrap(),
            &x1,
            &x2,
            &DMatrix::identity(3, 3),
            &DMatrix::zeros(3, 3),
            1e-8,
        )
        .unwrap();
        assert!(out.holds && out.margin.abs() <= 1e-12 * out.scale);
    }

    #[test]
    fn hpj_rejects_expanding_pair() {
        let x = HermitianMatrix::identity(2);
        let t = DMatrix::identity(2, 2);
        let err = hpj_check(&ScalarFn::power(2.0), &x, &x, &t, &t, 1e-8).unwrap_err();
        assert!(matches!(err, Error::ContractionViolation { .. }));
    }

    #[test]
    fn random_contractions_are_sub_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let (t1, t2) = random_contraction_pair(3, &mut rng);
            let gram = HermitianMatrix::new(t1.transpose() * &t1 + t2.transpose() * &t2).unwrap();
            assert!(loewner_leq(&gram, &HermitianMatrix::identity(3), 1e-12).unwrap().holds);
        }
    }

    #[test]
    fn homogeneity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_spd(3, &interval(0.1, 10.0), &mut rng).unwrap();
        let b = random_spd_dominated(&a, &interval(0.2, 5.0), &mut rng).unwrap();
        let f = ScalarFn::log();
        let p = perspective(&f, &a, &b).unwrap();
        for c in [0.5, 2.0, 10.0] {
            let pc = perspective(&f, &a.scale(c), &b.scale(c)).unwrap();
            let expected = p.scale(c);
            assert!(max_diff(&pc, &expected) <= 1e-9 * scale(&pc, &expected));
        }
    }
}
