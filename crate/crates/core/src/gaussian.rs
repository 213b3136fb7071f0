//! Exact Gaussian sampling: fractional Gaussian noise by circulant embedding and
//! the two-parameter fractional Gaussian sheet by Kronecker Cholesky factors.

use std::sync::Arc;

use nalgebra::DMatrix;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{check_hurst_open_unit, domain, Error, Result};
use crate::rng::RngStream;

/// Autocovariance of unit-variance fractional Gaussian noise at integer lag.
pub fn rho_fgn(hurst: f64, lag: u64) -> Result<f64> {
    check_hurst_open_unit(hurst)?;
    Ok(rho_unchecked(hurst, lag as f64))
}

pub(crate) fn rho_unchecked(h: f64, k: f64) -> f64 {
    0.5 * crate::special::quadrature::second_difference_power(2.0 * h, k)
}

/// Cached circulant embedding for a stationary Gaussian sequence.
///
/// Each call to [`FgnGenerator::sample_pair`] costs one FFT of length `2m` and
/// yields two independent exact samples (real and imaginary parts).
#[derive(Clone)]
pub struct FgnGenerator {
    n: usize,
    sqrt_eig: Arc<Vec<f64>>,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FgnGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FgnGenerator")
            .field("n", &self.n)
            .field("embedding_size", &self.sqrt_eig.len())
            .finish()
    }
}

impl FgnGenerator {
    /// Generator for `n` consecutive values of unit-variance fGn.
    pub fn new(hurst: f64, n: usize) -> Result<Self> {
        check_hurst_open_unit(hurst)?;
        if n == 0 {
            return Err(domain("fGn length must be positive"));
        }
        Self::from_fn(n, |k| rho_unchecked(hurst, k as f64))
    }

    /// Generator for `n` values of a stationary sequence with autocovariance
    /// `acv(k)`, embedded at the next power of two.
    pub fn from_fn(n: usize, acv: impl Fn(usize) -> f64) -> Result<Self> {
        if n == 0 {
            return Err(domain("sequence length must be positive"));
        }
        let m = (n.saturating_sub(1)).max(1).next_power_of_two();
        let acv: Vec<f64> = (0..=m).map(acv).collect();
        if acv.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("autocovariance".into()));
        }
        Self::embed(n, &acv)
    }

    /// Generator for a stationary sequence with autocovariance `acv[0..n]`.
    pub fn from_autocovariance(acv: &[f64]) -> Result<Self> {
        if acv.is_empty() {
            return Err(domain("autocovariance must be non-empty"));
        }
        if acv.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("autocovariance".into()));
        }
        let n = acv.len();
        if n == 1 {
            return Self::embed(1, &[acv[0], 0.0]);
        }
        Self::embed(n, acv)
    }

    fn embed(n: usize, acv: &[f64]) -> Result<Self> {
        let m = acv.len() - 1;
        let size = 2 * m;
        let mut row: Vec<Complex<f64>> = vec![Complex::new(0.0, 0.0); size];
        for k in 0..=m {
            row[k].re = acv[k];
        }
        for k in 1..m {
            row[size - k].re = acv[k];
        }
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(size);
        fft.process(&mut row);
        let max = row.iter().map(|c| c.re).fold(f64::MIN, f64::max);
        let tolerance = 1e-10 * max.abs().max(f64::MIN_POSITIVE);
        let min = row.iter().map(|c| c.re).fold(f64::MAX, f64::min);
        if min < -tolerance {
            return Err(Error::EmbeddingFailure {
                value: min,
                tolerance: -tolerance,
            });
        }
        let sqrt_eig = row
            .iter()
            .map(|c| (c.re.max(0.0) / size as f64).sqrt())
            .collect();
        Ok(Self {
            n,
            sqrt_eig: Arc::new(sqrt_eig),
            fft,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Two independent exact samples.
    pub fn sample_pair(&self, rng: &mut RngStream) -> (Vec<f64>, Vec<f64>) {
        let mut buf: Vec<Complex<f64>> = self
            .sqrt_eig
            .iter()
            .map(|&s| {
                let u = rng.normal();
                let v = rng.normal();
                Complex::new(s * u, s * v)
            })
            .collect();
        self.fft.process(&mut buf);
        let re = buf[..self.n].iter().map(|c| c.re).collect();
        let im = buf[..self.n].iter().map(|c| c.im).collect();
        (re, im)
    }

    /// One exact sample.
    pub fn sample(&self, rng: &mut RngStream) -> Vec<f64> {
        self.sample_pair(rng).0
    }
}

/// Exact fGn of length `n` with Hurst index `hurst`.
pub fn sample_fgn(stream: &mut RngStream, hurst: f64, n: usize) -> Result<Vec<f64>> {
    Ok(FgnGenerator::new(hurst, n)?.sample(stream))
}

/// Toeplitz covariance of `n` consecutive unit-variance fGn values.
pub fn fgn_covariance(hurst: f64, n: usize) -> Result<DMatrix<f64>> {
    check_hurst_open_unit(hurst)?;
    let rho: Vec<f64> = (0..n).map(|k| rho_unchecked(hurst, k as f64)).collect();
    Ok(DMatrix::from_fn(n, n, |i, j| rho[i.abs_diff(j)]))
}

pub(crate) fn cholesky_with_jitter(cov: DMatrix<f64>) -> Result<DMatrix<f64>> {
    if let Some(c) = cov.clone().cholesky() {
        return Ok(c.l());
    }
    let n = cov.nrows();
    let jittered = cov + DMatrix::identity(n, n) * 1e-12;
    jittered
        .cholesky()
        .map(|c| c.l())
        .ok_or_else(|| Error::Factorization(format!("covariance of size {n} is not positive definite")))
}

/// Fractional Gaussian sheet increments on an `n1 x n2` grid.
///
/// The covariance is the Kronecker product of the two axis Toeplitz matrices,
/// so a sample is `L1 G L2^T` with `G` an i.i.d. standard normal matrix.
#[derive(Clone, Debug)]
pub struct FgnSheetGenerator {
    l1: DMatrix<f64>,
    l2: DMatrix<f64>,
}

impl FgnSheetGenerator {
    pub fn new(h1: f64, h2: f64, n1: usize, n2: usize) -> Result<Self> {
        check_hurst_open_unit(h1)?;
        check_hurst_open_unit(h2)?;
        if n1 == 0 || n2 == 0 {
            return Err(domain("sheet dimensions must be positive"));
        }
        Self::from_covariances(fgn_covariance(h1, n1)?, fgn_covariance(h2, n2)?)
    }

    /// Separable sheet with axis covariance matrices `c1` and `c2`.
    pub fn from_covariances(c1: DMatrix<f64>, c2: DMatrix<f64>) -> Result<Self> {
        if c1.nrows() == 0 || c2.nrows() == 0 {
            return Err(domain("sheet dimensions must be positive"));
        }
        let l1 = cholesky_with_jitter(c1)?;
        let l2 = cholesky_with_jitter(c2)?;
        Ok(Self { l1, l2 })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.l1.nrows(), self.l2.nrows())
    }

    /// One sample; entry `(i, j)` is the increment over cell `(i, j)`.
    pub fn sample(&self, rng: &mut RngStream) -> DMatrix<f64> {
        let (n1, n2) = self.shape();
        let g = DMatrix::from_fn(n1, n2, |_, _| rng.normal());
        &self.l1 * g * self.l2.transpose()
    }
}

/// One fractional Gaussian sheet increment sample.
pub fn sample_fgn_sheet(
    stream: &mut RngStream,
    h1: f64,
    h2: f64,
    n1: usize,
    n2: usize,
) -> Result<DMatrix<f64>> {
    Ok(FgnSheetGenerator::new(h1, h2, n1, n2)?.sample(stream))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_stream;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn rho_known_value() {
        let expected = 0.5 * (2f64.powf(1.5) - 2.0);
        assert_abs_diff_eq!(rho_fgn(0.75, 1).unwrap(), expected, epsilon = 1e-15);
        assert_abs_diff_eq!(expected, 0.414_213_6, epsilon = 1e-7);
        assert_eq!(rho_fgn(0.3, 0).unwrap(), 1.0);
    }

    #[test]
    fn rho_rejects_bad_hurst() {
        assert!(rho_fgn(1.0, 1).is_err());
        assert!(rho_fgn(0.0, 1).is_err());
        assert!(rho_fgn(f64::NAN, 1).is_err());
    }

    #[test]
    fn white_noise_at_half() {
        for k in 1..10 {
            assert_abs_diff_eq!(rho_fgn(0.5, k).unwrap(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn single_value_is_standard_normal_draw() {
        let g = FgnGenerator::new(0.7, 1).unwrap();
        let mut s = derive_stream(1, 0);
        let mut acc = 0.0;
        let reps = 20_000;
        for _ in 0..reps {
            let x = g.sample(&mut s)[0];
            acc += x * x;
        }
        assert!((acc / reps as f64 - 1.0).abs() < 0.05);
    }

    #[test]
    fn empirical_lag_covariance() {
        let h = 0.8;
        let n = 64;
        let g = FgnGenerator::new(h, n).unwrap();
        let mut s = derive_stream(3, 0);
        let reps = 4000;
        let mut c0 = 0.0;
        let mut c1 = 0.0;
        let mut c5 = 0.0;
        for _ in 0..reps {
            let (a, b) = g.sample_pair(&mut s);
            for x in [a, b] {
                c0 += x[10] * x[10];
                c1 += x[10] * x[11];
                c5 += x[10] * x[15];
            }
        }
        let r = 2.0 * reps as f64;
        assert!((c0 / r - 1.0).abs() < 0.05);
        assert!((c1 / r - rho_unchecked(h, 1.0)).abs() < 0.05);
        assert!((c5 / r - rho_unchecked(h, 5.0)).abs() < 0.05);
    }

    #[test]
    fn indefinite_autocovariance_fails() {
        let acv = [1.0, 0.9, -0.9, 0.9];
        assert!(matches!(
            FgnGenerator::from_autocovariance(&acv),
            Err(Error::EmbeddingFailure { .. })
        ));
    }

    #[test]
    fn sheet_degenerate_row_is_fgn() {
        let gen = FgnSheetGenerator::new(0.7, 0.8, 1, 16).unwrap();
        let mut s = derive_stream(5, 0);
        let reps = 4000;
        let mut c1 = 0.0;
        for _ in 0..reps {
            let x = gen.sample(&mut s);
            c1 += x[(0, 3)] * x[(0, 4)];
        }
        assert!((c1 / reps as f64 - rho_unchecked(0.8, 1.0)).abs() < 0.06);
    }

    #[test]
    fn sheet_separable_covariance() {
        let gen = FgnSheetGenerator::new(0.7, 0.9, 8, 8).unwrap();
        let mut s = derive_stream(6, 0);
        let reps = 6000;
        let mut c = 0.0;
        for _ in 0..reps {
            let x = gen.sample(&mut s);
            c += x[(2, 2)] * x[(3, 4)];
        }
        let expected = rho_unchecked(0.7, 1.0) * rho_unchecked(0.9, 2.0);
        assert!((c / reps as f64 - expected).abs() < 0.05);
    }

    proptest! {
        #[test]
        fn embedding_nonnegative_on_fgn(h in 0.02f64..0.98, n in 2usize..300) {
            prop_assert!(FgnGenerator::new(h, n).is_ok());
        }

        #[test]
        fn rho_symmetric_and_bounded(h in 0.01f64..0.99, k in 0u64..1000) {
            let r = rho_unchecked(h, k as f64);
            prop_assert!((r - rho_unchecked(h, -(k as f64))).abs() < 1e-12);
            prop_assert!(r.abs() <= 1.0 + 1e-12);
        }
    }
}
