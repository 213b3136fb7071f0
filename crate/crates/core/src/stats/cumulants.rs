//! Sample cumulants with delete-one jackknife standard errors.
//!
//! `κ₁..κ₄` are Fisher's k-statistics (unbiased); `κ₅, κ₆` use the moment
//! expressions `m₅ - 10 m₃m₂` and `m₆ - 15 m₄m₂ - 10 m₃² + 30 m₂³`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CumulantEstimates {
    /// `κ₁..κ_pmax`
    pub values: Vec<f64>,
    pub std_errors: Vec<f64>,
}

impl CumulantEstimates {
    /// `κ_p` (1-based order).
    pub fn kappa(&self, p: usize) -> f64 {
        self.values[p - 1]
    }

    pub fn std_error(&self, p: usize) -> f64 {
        self.std_errors[p - 1]
    }
}

/// Cumulants from sample size and central moments `m[r]`, `r = 0..=6`.
fn from_moments(n: f64, mean: f64, m: &[f64; 7], pmax: usize) -> [f64; 6] {
    let (m2, m3, m4, m5, m6) = (m[2], m[3], m[4], m[5], m[6]);
    let mut k = [0.0; 6];
    k[0] = mean;
    if pmax >= 2 {
        k[1] = n / (n - 1.0) * m2;
    }
    if pmax >= 3 {
        k[2] = n * n / ((n - 1.0) * (n - 2.0)) * m3;
    }
    if pmax >= 4 {
        k[3] = n * n * ((n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2)
            / ((n - 1.0) * (n - 2.0) * (n - 3.0));
    }
    if pmax >= 5 {
        k[4] = m5 - 10.0 * m3 * m2;
    }
    if pmax >= 6 {
        k[5] = m6 - 15.0 * m4 * m2 - 10.0 * m3 * m3 + 30.0 * m2 * m2 * m2;
    }
    k
}

const BINOM: [[f64; 7]; 7] = [
    [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 3.0, 3.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 4.0, 6.0, 4.0, 1.0, 0.0, 0.0],
    [1.0, 5.0, 10.0, 10.0, 5.0, 1.0, 0.0],
    [1.0, 6.0, 15.0, 20.0, 15.0, 6.0, 1.0],
];

pub fn empirical_cumulants(samples: &[f64], pmax: usize) -> Result<CumulantEstimates> {
    if !(1..=6).contains(&pmax) {
        return Err(domain(format!("pmax = {pmax} must lie in 1..=6")));
    }
    let needed = (10 * pmax).max(5);
    if samples.len() < needed {
        return Err(Error::InsufficientSamples {
            needed,
            got: samples.len(),
        });
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("sample value".into()));
    }
    let n = samples.len();
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    // Power sums of centred data, S[0] = n, S[1] = 0 up to rounding.
    let mut s = [0.0f64; 7];
    for &x in samples {
        let y = x - mean;
        let mut p = 1.0;
        for r in 0..7 {
            s[r] += p;
            p *= y;
        }
    }
    let mut m = [0.0; 7];
    for r in 0..7 {
        m[r] = s[r] / nf;
    }
    let full = from_moments(nf, mean, &m, pmax);

    // Delete-one replicates in O(1) each from the shifted power sums.
    let n1 = nf - 1.0;
    let mut sum = [0.0f64; 6];
    let mut sum_sq = [0.0f64; 6];
    let mut loo = [0.0f64; 7];
    let mut pw = [0.0f64; 7];
    let mut dpow = [0.0f64; 7];
    for &x in samples {
        let y = x - mean;
        let d = -y / n1;
        pw[0] = 1.0;
        dpow[0] = 1.0;
        for r in 1..7 {
            pw[r] = pw[r - 1] * y;
            dpow[r] = dpow[r - 1] * (-d);
        }
        for r in 0..7 {
            let mut t = 0.0;
            for k in 0..=r {
                t += BINOM[r][k] * dpow[r - k] * (s[k] - pw[k]);
            }
            loo[r] = t / n1;
        }
        let th = from_moments(n1, mean + d, &loo, pmax);
        for p in 0..pmax {
            sum[p] += th[p];
            sum_sq[p] += th[p] * th[p];
        }
    }
    let mut std_errors = Vec::with_capacity(pmax);
    for p in 0..pmax {
        let mean_th = sum[p] / nf;
        let var = (sum_sq[p] / nf - mean_th * mean_th).max(0.0);
        std_errors.push((n1 * var).sqrt());
    }
    Ok(CumulantEstimates {
        values: full[..pmax].to_vec(),
        std_errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_stream;

    #[test]
    fn constant_samples() {
        let c = empirical_cumulants(&[3.5; 100], 6).unwrap();
        assert!((c.kappa(1) - 3.5).abs() < 1e-12);
        for p in 2..=6 {
            assert!(c.kappa(p).abs() < 1e-12);
        }
    }

    #[test]
    fn insufficient() {
        assert!(matches!(
            empirical_cumulants(&[1.0; 30], 4),
            Err(Error::InsufficientSamples { needed: 40, got: 30 })
        ));
    }

    #[test]
    fn jackknife_matches_naive_on_small_sample() {
        let x = derive_stream(3, 0).normals(60);
        let c = empirical_cumulants(&x, 6).unwrap();
        let n = x.len();
        let mut thetas = vec![Vec::new(); 6];
        for i in 0..n {
            let sub: Vec<f64> = x.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
            let nf = sub.len() as f64;
            let mean = sub.iter().sum::<f64>() / nf;
            let mut m = [0.0; 7];
            for v in &sub {
                for r in 0..7 {
                    m[r] += (v - mean).powi(r as i32) / nf;
                }
            }
            let th = from_moments(nf, mean, &m, 6);
            for p in 0..6 {
                thetas[p].push(th[p]);
            }
        }
        for p in 0..6 {
            let mean = thetas[p].iter().sum::<f64>() / n as f64;
            let var: f64 = thetas[p].iter().map(|t| (t - mean).powi(2)).sum::<f64>() * (n as f64 - 1.0) / n as f64;
            assert!((var.sqrt() - c.std_errors[p]).abs() < 1e-8 * (1.0 + var.sqrt()), "p = {}", p + 1);
        }
    }

    #[test]
    fn gaussian_higher_cumulants_vanish() {
        let x = derive_stream(4, 0).normals(200_000);
        let c = empirical_cumulants(&x, 4).unwrap();
        assert!(c.kappa(3).abs() < 3.0 * c.std_error(3));
        assert!(c.kappa(4).abs() < 3.0 * c.std_error(4));
        assert!((c.kappa(2) - 1.0).abs() < 3.0 * c.std_error(2));
    }

    #[test]
    fn centred_chi_square() {
        let x: Vec<f64> = derive_stream(5, 0).normals(400_000).iter().map(|z| z * z - 1.0).collect();
        let c = empirical_cumulants(&x, 4).unwrap();
        for (p, exact) in [(2, 2.0), (3, 8.0), (4, 48.0)] {
            assert!((c.kappa(p) - exact).abs() < 3.0 * c.std_error(p), "p = {p}: {}", c.kappa(p));
        }
    }
}
