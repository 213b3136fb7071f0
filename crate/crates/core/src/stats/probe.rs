//! Empirical CDF of `R₁^H` from the NCLT lattice.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::process::{HermitePathGenerator, LatticeConfig};
use crate::rng::RngStream;
use crate::spec::HermiteSpec;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CdfProbe {
    pub point: f64,
    pub probability: f64,
    /// Binomial standard error `√(p(1-p)/n)`.
    pub std_error: f64,
}

/// Draws of `R₁^H = Z^{2,H}_1`, two per circulant synthesis.
pub fn rosenblatt_terminal_samples(
    stream: &mut RngStream,
    h: f64,
    n_samples: usize,
    cfg: LatticeConfig,
) -> Result<Vec<f64>> {
    let spec = HermiteSpec::scalar(2, h)?;
    let gen = HermitePathGenerator::new(spec, 1.0, 1, cfg)?;
    let sigma = gen.sigma_n_sq().sqrt();
    let mut out = Vec::with_capacity(n_samples + 1);
    while out.len() < n_samples {
        let (a, b) = gen.lattice_sum_pair(stream);
        out.push(a / sigma);
        out.push(b / sigma);
    }
    out.truncate(n_samples);
    Ok(out)
}

pub fn rosenblatt_cdf_probe(
    stream: &mut RngStream,
    h: f64,
    points: &[f64],
    n_samples: usize,
    cfg: LatticeConfig,
) -> Result<Vec<CdfProbe>> {
    let samples = rosenblatt_terminal_samples(stream, h, n_samples, cfg)?;
    Ok(empirical_cdf(&samples, points))
}

/// Empirical CDF with binomial standard errors.
pub fn empirical_cdf(samples: &[f64], points: &[f64]) -> Vec<CdfProbe> {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    points
        .iter()
        .map(|&point| {
            let count = sorted.partition_point(|&v| v <= point) as f64;
            let p = if n > 0.0 { count / n } else { 0.0 };
            CdfProbe {
                point,
                probability: p,
                std_error: if n > 0.0 { (p * (1.0 - p) / n).sqrt() } else { 0.0 },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_stream;

    #[test]
    fn monotone_and_bounded() {
        let mut s = derive_stream(1, 0);
        let pts = [-2.0, -0.6256, 0.0, 1.3552, 1e9];
        let r = rosenblatt_cdf_probe(&mut s, 0.7, &pts, 2000, LatticeConfig::new(1024).unwrap()).unwrap();
        for w in r.windows(2) {
            assert!(w[0].probability <= w[1].probability);
        }
        assert_eq!(r[4].probability, 1.0);
        assert_eq!(r[4].std_error, 0.0);
    }

    #[test]
    fn unit_variance_mean_zero() {
        let mut s = derive_stream(2, 0);
        let x = rosenblatt_terminal_samples(&mut s, 0.7, 4000, LatticeConfig::new(1024).unwrap()).unwrap();
        let m = x.iter().sum::<f64>() / 4000.0;
        let v = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
        assert!(m.abs() < 0.1, "{m}");
        assert!((v - 1.0).abs() < 0.15, "{v}");
    }

    #[test]
    fn rejects_short_memory() {
        let mut s = derive_stream(2, 0);
        assert!(rosenblatt_cdf_probe(&mut s, 0.4, &[0.0], 10, LatticeConfig::default()).is_err());
    }
}
