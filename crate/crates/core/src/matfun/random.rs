use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{HermitianMatrix, SpectralDecomposition, SpectrumInterval};
use crate::error::{Error, Result};

/// Largest admissible `hi / lo` for sampled spectra.
pub const MAX_CONDITION: f64 = 1e4;

/// Haar-distributed orthogonal matrix: QR of a standard Gaussian matrix,
/// with the columns of `Q` flipped so that `R` has a positive diagonal.
pub fn haar_orthogonal<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<f64> {
    let gaussian = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = gaussian.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Samples `Q Λ Qᵀ` with `Q` Haar-orthogonal and the diagonal of `Λ`
/// log-uniform on `spectrum`.
pub fn random_spd<R: Rng + ?Sized>(dim: usize, spectrum: &SpectrumInterval, rng: &mut R) -> Result<HermitianMatrix> {
    if dim == 0 {
        return Err(Error::InvalidConfig("matrix dimension must be at least 1".into()));
    }
    spectrum.check_sampleable()?;
    let (lo, hi) = (spectrum.lo(), spectrum.hi());
    let q = haar_orthogonal(dim, rng);
    if lo == hi {
        return Ok(HermitianMatrix::scalar(dim, lo));
    }
    let (log_lo, log_hi) = (lo.ln(), hi.ln());
    let eigenvalues = (0..dim)
        .map(|_| rng.random_range(log_lo..=log_hi).exp().clamp(lo, hi))
        .collect();
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors: q,
    }
    .reconstruct())
}

/// Samples `B = A^{1/2} C A^{1/2}` with `C = random_spd(dim, ratio)`, so the
/// spectrum of `A^{-1/2} B A^{-1/2}` lies in `ratio`.
pub fn random_spd_dominated<R: Rng + ?Sized>(
    a: &HermitianMatrix,
    ratio: &SpectrumInterval,
    rng: &mut R,
) -> Result<HermitianMatrix> {
    let sqrt_a = a.require_strictly_positive()?.map(f64::sqrt);
    let c = random_spd(a.dim(), ratio, rng)?;
    sqrt_a.sandwich(&c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matfun::loewner_leq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn interval(lo: f64, hi: f64) -> SpectrumInterval {
        SpectrumInterval::new(lo, hi).unwrap()
    }

    #[test]
    fn forced_spectrum_dim_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_spd(1, &interval(2.0, 2.0), &mut rng).unwrap();
        assert_eq!(a.rows(), vec![vec![2.0]]);
    }

    #[test]
    fn spectrum_bounds_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let spec = interval(0.1, 10.0);
        for _ in 0..50 {
            let a = random_spd(3, &spec, &mut rng).unwrap();
            let w = a.eigenvalues();
            assert!(w[0] >= 0.1 * (1.0 - 1e-12) && w[2] <= 10.0 * (1.0 + 1e-12), "{w:?}");
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let spec = interval(0.1, 10.0);
        let a = random_spd(4, &spec, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = random_spd(4, &spec, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn haar_matrix_is_orthogonal() {
        let q = haar_orthogonal(5, &mut ChaCha8Rng::seed_from_u64(1));
        let err = (q.transpose() * &q - DMatrix::identity(5, 5)).amax();
        assert!(err < 1e-13);
    }

    #[test]
    fn rejects_bad_spectra() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            random_spd(2, &interval(0.0, 1.0), &mut rng),
            Err(Error::InvalidSpectrum { .. })
        ));
        assert!(matches!(
            random_spd(2, &interval(1e-3, 100.0), &mut rng),
            Err(Error::InvalidSpectrum { .. })
        ));
    }

    #[test]
    fn dominated_sampling_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let id = HermitianMatrix::identity(3);
        let b = random_spd_dominated(&id, &interval(1.0, 1.0), &mut rng).unwrap();
        assert!((&b - &id).max_abs_entry() < 1e-15);

        let a = HermitianMatrix::diagonal(&[1.0, 4.0]);
        let b = random_spd_dominated(&a, &interval(1.0, 1.0), &mut rng).unwrap();
        assert!((&b - &a).max_abs_entry() < 1e-14);

        let a = random_spd(3, &interval(0.1, 10.0), &mut rng).unwrap();
        let b = random_spd_dominated(&a, &interval(0.5, 2.0), &mut rng).unwrap();
        let inv_sqrt = a.decompose().map(|t| t.powf(-0.5));
        let inner = inv_sqrt.sandwich(&b).unwrap();
        let w = inner.eigenvalues();
        assert!(w[0] >= 0.5 * (1.0 - 1e-10) && w[2] <= 2.0 * (1.0 + 1e-10), "{w:?}");
        assert!(loewner_leq(&a.scale(0.5), &b, 1e-10).unwrap().holds);
    }

    #[test]
    fn dominated_requires_positive_base() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = HermitianMatrix::diagonal(&[1.0, 0.0]);
        assert!(matches!(
            random_spd_dominated(&a, &interval(0.5, 2.0), &mut rng),
            Err(Error::NotStrictlyPositive { .. })
        ));
    }
}
