//! Least-squares-free drift estimators for the Hermite–Vasicek model
//!
//! `α_T = (1/T)∫_0^T X_t² dt - ((1/T)∫_0^T X_t dt)²`,
//! `â_T = (α_T / (H Γ(2H)))^{-1/(2H)}`, `b̂_T = (1/T)∫_0^T X_t dt`.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{check_hurst_long_memory, Error, Result};
use crate::process::path::SamplePath;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VasicekEstimate {
    pub a_hat: f64,
    pub b_hat: f64,
    pub alpha: f64,
}

fn trapezoid_mean(values: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let n = values.len() - 1;
    let mut s = 0.5 * (f(values[0]) + f(values[n]));
    for v in &values[1..n] {
        s += f(*v);
    }
    s / n as f64
}

/// `b̂_T`, the time average of the path (trapezoid rule).
pub fn vasicek_mean_estimator(x: &SamplePath) -> f64 {
    trapezoid_mean(x.values(), |v| v)
}

/// `(â_T, b̂_T)`; fails when `α_T <= 0`, where the power map is undefined.
pub fn vasicek_estimators(x: &SamplePath, hurst: f64) -> Result<VasicekEstimate> {
    check_hurst_long_memory(hurst)?;
    let b_hat = vasicek_mean_estimator(x);
    let second = trapezoid_mean(x.values(), |v| v * v);
    let alpha = second - b_hat * b_hat;
    if !(alpha > 0.0) {
        return Err(Error::Estimation(format!(
            "alpha_T = {alpha:e} is not positive"
        )));
    }
    let a_hat = (alpha / (hurst * gamma(2.0 * hurst))).powf(-1.0 / (2.0 * hurst));
    Ok(VasicekEstimate {
        a_hat,
        b_hat,
        alpha,
    })
}
