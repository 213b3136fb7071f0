//! Wiener integrals and stochastic convolutions against a sampled path.

use crate::error::{domain, Result};
use crate::process::path::{Derivation, MovingAverageKernel, SamplePath};
use crate::special::quadrature::convolve;

/// Left-point Riemann–Stieltjes sum `Σ f(t_i) (Z_{i+1} - Z_i)`.
pub fn wiener_integral<F: Fn(f64) -> f64>(f: F, path: &SamplePath) -> f64 {
    let dt = path.dt();
    path.values()
        .windows(2)
        .enumerate()
        .map(|(i, w)| f(i as f64 * dt) * (w[1] - w[0]))
        .sum()
}

const DIRECT_LIMIT: usize = 4096;

/// `X_k = Σ_{i<k} x(t_k - t_i) (Z_{i+1} - Z_i)` on the path grid.
pub fn sample_moving_average(kernel: &MovingAverageKernel, path: &SamplePath) -> Result<SamplePath> {
    let n = path.n();
    let dt = path.dt();
    let dz = path.increments();
    let x: Vec<f64> = (1..=n).map(|j| kernel.eval(j as f64 * dt)).collect();
    if x.iter().any(|v| !v.is_finite()) {
        return Err(domain(format!("kernel {} is not finite on the grid", kernel.name())));
    }
    let mut values = Vec::with_capacity(n + 1);
    values.push(0.0);
    if n <= DIRECT_LIMIT {
        for k in 1..=n {
            let mut s = 0.0;
            for i in 0..k {
                s += x[k - 1 - i] * dz[i];
            }
            values.push(s);
        }
    } else {
        let c = convolve(&x, &dz);
        values.extend_from_slice(&c[..n]);
    }
    Ok(SamplePath::new(path.t_end(), values, path.driver().clone())?
        .with_derivation(Derivation::MovingAverage(kernel.clone())))
}

/// Vasicek path `X_t = b(1 - e^{-at}) + ∫_0^t e^{-a(t-u)} dZ_u` from the explicit
/// solution, with the stochastic convolution as a left-point sum.
pub fn sample_vasicek(a: f64, b: f64, path: &SamplePath) -> Result<SamplePath> {
    if !(a > 0.0 && a.is_finite()) || !b.is_finite() {
        return Err(domain(format!("need a > 0 and finite b, got a = {a}, b = {b}")));
    }
    let dt = path.dt();
    let decay = (-a * dt).exp();
    let mut values = Vec::with_capacity(path.n() + 1);
    values.push(0.0);
    let mut y = 0.0;
    for (k, w) in path.values().windows(2).enumerate() {
        y = decay * (y + (w[1] - w[0]));
        let t = (k + 1) as f64 * dt;
        values.push(b * (1.0 - (-a * t).exp()) + y);
    }
    Ok(SamplePath::new(path.t_end(), values, path.driver().clone())?
        .with_derivation(Derivation::Vasicek { a, b }))
}
