//! Kolmogorov-Smirnov tests with the asymptotic Kolmogorov p-value.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// `P(K > x)` for the Kolmogorov distribution.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 1.0 {
        // Small-x form converges faster here.
        let c = (2.0 * std::f64::consts::PI).sqrt() / x;
        let q = (-std::f64::consts::PI.powi(2) / (8.0 * x * x)).exp();
        let mut s = 0.0;
        let mut k = 1;
        loop {
            let term = q.powi((2 * k - 1) * (2 * k - 1));
            s += term;
            if term < 1e-17 * s || k > 100 {
                break;
            }
            k += 1;
        }
        return (1.0 - c * s).clamp(0.0, 1.0);
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * x * x).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

fn sorted_finite(x: &[f64], what: &str) -> Result<Vec<f64>> {
    if x.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(what.into()));
    }
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    let a = sorted_finite(a, "first sample")?;
    let b = sorted_finite(b, "second sample")?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = na * nb / (na + nb);
    let sq = ne.sqrt();
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_sf((sq + 0.12 + 0.11 / sq) * d),
    })
}

/// One-sample test against `N(mean, sd²)`.
pub fn ks_normal(x: &[f64], mean: f64, sd: f64) -> Result<KsResult> {
    if !(sd > 0.0 && sd.is_finite() && mean.is_finite()) {
        return Err(crate::error::domain(format!("invalid normal parameters ({mean}, {sd})")));
    }
    let cdf = |v: f64| 0.5 * erfc(-(v - mean) / (sd * std::f64::consts::SQRT_2));
    ks_one_sample(x, cdf)
}

pub fn ks_one_sample(x: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    let v = sorted_finite(x, "sample")?;
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &xi) in v.iter().enumerate() {
        let f = cdf(xi);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    let sq = n.sqrt();
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_sf((sq + 0.12 + 0.11 / sq) * d),
    })
}
