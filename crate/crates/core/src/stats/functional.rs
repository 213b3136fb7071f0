//! The normalized quadratic functional of a Hermite-driven moving average
//!
//! `G_T(t) = T^{-(2H₀-1)} ∫_0^{Tt} (X_s² - E[X_s²]) ds`, `X_s = ∫_0^s x(s-u) dZ_u`.

use crate::error::{domain, Error, Result};
use crate::gaussian::rho_unchecked;
use crate::process::path::{Derivation, MovingAverageKernel, SamplePath};
use crate::spec::HermiteSpec;
use crate::special::quadrature::convolve;

/// `E[X_{t_k}²]` for `k = 0..=n` where `X` is the left-point moving average on
/// a grid of step `dt`.
///
/// The left-point sum integrates the step function `f_k = Σ_i x(t_k - t_i) 1_{[t_i, t_{i+1})}`,
/// so `E[X_{t_k}²] = ‖f_k‖²_H`. With exact cell kernels,
/// `H(2H-1) ∫∫_{cell i × cell j} |u-v|^{2H-2} = dt^{2H} ρ_H(i-j)`, and
/// `‖f_k‖²_H = Σ_{a,b=1}^{k} x_a x_b dt^{2H} ρ_H(a-b)` with `x_a = x(a dt)`, which obeys
/// `E_k = E_{k-1} + 2 x_k Σ_{b<k} x_b γ(k-b) + x_k² γ(0)`.
pub fn moving_average_second_moments(
    kernel: &MovingAverageKernel,
    hurst: f64,
    dt: f64,
    n: usize,
) -> Vec<f64> {
    let x: Vec<f64> = (1..=n).map(|a| kernel.eval(a as f64 * dt)).collect();
    let g0 = dt.powf(2.0 * hurst);
    let gamma: Vec<f64> = (0..=n).map(|k| g0 * rho_unchecked(hurst, k as f64)).collect();
    // cross[k-1] = Σ_{b=1}^{k-1} x_b γ(k-b)
    let cross = convolve(&x, &gamma[1..]);
    let mut e = Vec::with_capacity(n + 1);
    e.push(0.0);
    let mut acc = 0.0;
    for k in 1..=n {
        let c = if k >= 2 { cross[k - 2] } else { 0.0 };
        acc += 2.0 * x[k - 1] * c + x[k - 1] * x[k - 1] * gamma[0];
        e.push(acc);
    }
    e
}

/// Evaluates `G_T(t)` for moving-average paths sharing kernel, grid and driver.
#[derive(Clone, Debug)]
pub struct GtEvaluator {
    h0: f64,
    second_moments: Vec<f64>,
    t_end: f64,
    n: usize,
}

impl GtEvaluator {
    pub fn new(
        kernel: &MovingAverageKernel,
        spec: &HermiteSpec,
        t_end: f64,
        n: usize,
    ) -> Result<Self> {
        if spec.dim() != 1 {
            return Err(domain("G_T needs a one-parameter spec"));
        }
        let dt = t_end / n as f64;
        Ok(Self {
            h0: spec.h0(0),
            second_moments: moving_average_second_moments(kernel, spec.h(), dt, n),
            t_end,
            n,
        })
    }

    pub fn second_moments(&self) -> &[f64] {
        &self.second_moments
    }

    pub fn evaluate(&self, x: &SamplePath, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(domain(format!("t = {t} must lie in (0, 1]")));
        }
        if x.n() != self.n || (x.t_end() - self.t_end).abs() > 1e-12 * self.t_end {
            return Err(Error::Grid("path grid differs from the evaluator grid".into()));
        }
        let k_end = x.index_of(t * self.t_end)?;
        let y: Vec<f64> = x.values()[..=k_end]
            .iter()
            .zip(&self.second_moments)
            .map(|(v, e)| v * v - e)
            .collect();
        let mut integral = 0.0;
        for w in y.windows(2) {
            integral += 0.5 * (w[0] + w[1]);
        }
        integral *= x.dt();
        Ok(self.t_end.powf(-(2.0 * self.h0 - 1.0)) * integral)
    }
}

/// `G_T(t)` for a path produced by `sample_moving_average`.
pub fn quadratic_functional_gt(x: &SamplePath, spec: &HermiteSpec, t: f64) -> Result<f64> {
    let Derivation::MovingAverage(kernel) = x.derivation() else {
        return Err(domain("path carries no moving-average kernel"));
    };
    GtEvaluator::new(kernel, spec, x.t_end(), x.n())?.evaluate(x, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::hermite::sample_fbm;
    use crate::process::integrals::sample_moving_average;
    use crate::rng::derive_stream;
    use crate::special::quadrature::{weighted_norm_h, Interval, QuadratureSpec};

    #[test]
    fn second_moments_match_direct_sum() {
        let k = MovingAverageKernel::exponential(0.5);
        let (h, dt, n) = (0.7, 0.1, 100);
        let e = moving_average_second_moments(&k, h, dt, n);
        for kk in [1usize, 2, 37, 100] {
            let mut direct = 0.0;
            for a in 1..=kk {
                for b in 1..=kk {
                    direct += k.eval(a as f64 * dt) * k.eval(b as f64 * dt)
                        * dt.powf(2.0 * h)
                        * rho_unchecked(h, a.abs_diff(b) as f64);
                }
            }
            assert!((e[kk] - direct).abs() < 1e-10 * direct);
        }
    }

    #[test]
    fn second_moments_approach_continuous_norm() {
        let k = MovingAverageKernel::exponential(1.0);
        let (h, s) = (0.7, 6.0);
        let cont = weighted_norm_h(|u: f64| (-(s - u)).exp(), h, Interval::new(0.0, s).unwrap(), QuadratureSpec::default())
            .unwrap()
            .value;
        let e1 = moving_average_second_moments(&k, h, s / 600.0, 600)[600];
        let e2 = moving_average_second_moments(&k, h, s / 1200.0, 1200)[1200];
        assert!((e2 - cont).abs() < (e1 - cont).abs());
        assert!((e2 - cont).abs() < 1e-2 * cont);
    }

    #[test]
    fn needs_kernel_metadata() {
        let spec = HermiteSpec::scalar(1, 0.8).unwrap();
        let p = sample_fbm(&mut derive_stream(1, 0), 0.8, 10.0, 100).unwrap();
        assert!(quadratic_functional_gt(&p, &spec, 1.0).is_err());
        let x = sample_moving_average(&MovingAverageKernel::exponential(1.0), &p).unwrap();
        assert!(quadratic_functional_gt(&x, &spec, 1.0).unwrap().is_finite());
        assert!(quadratic_functional_gt(&x, &spec, 1.5).is_err());
    }
}
