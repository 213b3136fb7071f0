//! Gauss rules, FFT convolution and the singular double integral
//! `∬ f(u) f(v) |u - v|^γ du dv` with exact per-cell kernel weights.

use nalgebra::{DMatrix, SymmetricEigen};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// A value with an estimated absolute error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Refinement controls for the singular tensor quadrature.
///
/// The first pass uses `points_per_axis` cells per axis; each refinement
/// doubles the cell count until two successive Richardson values agree to
/// `rel_tol` or `max_refinements` is exhausted.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub points_per_axis: usize,
    pub max_refinements: u32,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            points_per_axis: 512,
            max_refinements: 7,
            rel_tol: 1e-7,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.points_per_axis < 8 {
            return Err(domain("points_per_axis must be at least 8"));
        }
        if !(self.rel_tol > 0.0) {
            return Err(domain("rel_tol must be positive"));
        }
        Ok(())
    }
}

/// Closed interval `[lo, hi]`; `hi` may be `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || hi.is_nan() || hi <= lo {
            return Err(domain(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn half_line() -> Self {
        Self { lo: 0.0, hi: f64::INFINITY }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d.is_finite() {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to `[0, 1]`.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    (
        x.iter().map(|v| 0.5 * (v + 1.0)).collect(),
        w.iter().map(|v| 0.5 * v).collect(),
    )
}

/// Gauss–Hermite rule for the standard normal weight (weights sum to 1).
pub fn gauss_hermite_normal(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i.abs_diff(j) == 1 {
            (i.max(j) as f64).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| (eig.eigenvalues[k], eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    (
        pairs.iter().map(|p| p.0).collect(),
        pairs.iter().map(|p| p.1 / total).collect(),
    )
}

/// Composite Gauss–Legendre integral of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (x, w) = gauss_legendre_unit(order);
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            acc += wi * f(lo + h * xi);
        }
    }
    acc * h
}

/// `∫_0^len s^γ g(s) ds` for `γ > -1`, removing the endpoint singularity by
/// the substitution `s = len · r^{1/(γ+1)}`.
pub fn integrate_power_singular<F: Fn(f64) -> f64>(g: F, len: f64, gamma: f64, panels: usize) -> f64 {
    let k = 1.0 / (gamma + 1.0);
    let scale = len.powf(gamma + 1.0) * k;
    scale * integrate(|r| g(len * r.powf(k)), 0.0, 1.0, panels, 24)
}

/// `((k+1)^a - 2 k^a + |k-1|^a)` for integer `k >= 0`, stable for large `k`.
pub fn second_difference_power(a: f64, k: f64) -> f64 {
    let k = k.abs();
    if k < 64.0 {
        return (k + 1.0).powf(a) - 2.0 * k.powf(a) + (k - 1.0).abs().powf(a);
    }
    // k^a Σ_{j even} 2 C(a, j) k^{-j}
    let inv2 = 1.0 / (k * k);
    let mut binom = 1.0;
    let mut sum = 0.0;
    let mut pow = 1.0;
    for j in 1..=12 {
        binom *= (a - (j - 1) as f64) / j as f64;
        if j % 2 == 0 {
            pow *= inv2;
            sum += 2.0 * binom * pow;
        }
    }
    k.powf(a) * sum
}

/// Exact integral of `|u - v|^γ` over two width-`h` cells whose indices differ by `k`.
pub fn cell_kernel_weights(gamma: f64, h: f64, count: usize) -> Vec<f64> {
    let a = gamma + 2.0;
    let scale = h.powf(a) / ((gamma + 1.0) * a);
    (0..count)
        .map(|k| scale * second_difference_power(a, k as f64))
        .collect()
}

/// Full linear convolution of `a` and `b`.
pub fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    if a.len().min(b.len()) <= 64 {
        let mut out = vec![0.0; out_len];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        return out;
    }
    let size = out_len.next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let mut fa: Vec<Complex<f64>> = vec![Complex::new(0.0, 0.0); size];
    let mut fb = fa.clone();
    for (i, v) in a.iter().enumerate() {
        fa[i].re = *v;
    }
    for (i, v) in b.iter().enumerate() {
        fb[i].re = *v;
    }
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inv.process(&mut fa);
    fa[..out_len].iter().map(|c| c.re / size as f64).collect()
}

/// `Σ_{i,j} f_i f_j w_{|i-j|}`.
pub fn toeplitz_quadratic_form(f: &[f64], w: &[f64]) -> f64 {
    let n = f.len();
    let rev: Vec<f64> = f.iter().rev().copied().collect();
    let ac = convolve(f, &rev);
    // ac[n - 1 + k] = Σ_i f_{i+k} f_i
    let mut s = w[0] * ac[n - 1];
    for k in 1..n {
        s += 2.0 * w[k] * ac[n - 1 + k];
    }
    s
}

fn truncate_domain<F: Fn(f64) -> f64>(f: &F, domain: Interval) -> Result<f64> {
    if domain.hi.is_finite() {
        return Ok(domain.hi);
    }
    let lo = domain.lo;
    let probe = |a: f64, b: f64| -> f64 {
        (0..=256)
            .map(|i| f(a + (b - a) * i as f64 / 256.0).abs())
            .fold(0.0, f64::max)
    };
    let mut width = 1.0;
    let scale = probe(lo, lo + width).max(f64::MIN_POSITIVE);
    for _ in 0..30 {
        let tail = probe(lo + width, lo + 8.0 * width);
        if tail <= 1e-12 * scale {
            return Ok(lo + width);
        }
        width *= 2.0;
    }
    Err(Error::Quadrature(
        "integrand does not decay on the half-line".into(),
    ))
}

/// `∬_{D²} f(u) f(v) |u - v|^γ du dv` for `γ ∈ (-1, 0]`.
///
/// `f` is replaced by its midpoint values on uniform cells and the kernel is
/// integrated exactly over each pair of cells, so the diagonal singularity
/// never meets a quadrature node. Cell counts are doubled with Richardson
/// extrapolation (order 2) until the extrapolated values settle.
pub fn singular_double_integral<F: Fn(f64) -> f64>(
    f: F,
    gamma: f64,
    domain: Interval,
    quad: QuadratureSpec,
) -> Result<Estimate> {
    quad.validate()?;
    if !(gamma > -1.0 && gamma <= 0.0) {
        return Err(domain_err(gamma));
    }
    let hi = truncate_domain(&f, domain)?;
    let lo = domain.lo;
    let level = |cells: usize| -> Result<f64> {
        let h = (hi - lo) / cells as f64;
        let vals: Vec<f64> = (0..cells).map(|i| f(lo + (i as f64 + 0.5) * h)).collect();
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("integrand at a quadrature node".into()));
        }
        let w = cell_kernel_weights(gamma, h, cells);
        Ok(toeplitz_quadratic_form(&vals, &w))
    };
    let mut cells = quad.points_per_axis;
    let mut prev = level(cells)?;
    let mut prev_extrap: Option<f64> = None;
    for _ in 0..quad.max_refinements {
        cells *= 2;
        let cur = level(cells)?;
        let extrap = (4.0 * cur - prev) / 3.0;
        let change = match prev_extrap {
            Some(p) => (extrap - p).abs(),
            None => (cur - prev).abs(),
        };
        let scale = extrap.abs().max(1e-300);
        if change <= quad.rel_tol * scale || change == 0.0 {
            return Ok(Estimate {
                value: extrap,
                error: change,
            });
        }
        prev = cur;
        prev_extrap = Some(extrap);
    }
    let value = prev_extrap.unwrap_or(prev);
    Err(Error::Quadrature(format!(
        "singular double integral did not reach rel_tol {} (last value {value})",
        quad.rel_tol
    )))
}

fn domain_err(gamma: f64) -> Error {
    domain(format!("kernel exponent {gamma} must lie in (-1, 0]"))
}

/// `‖f‖²_H = H(2H-1) ∬ f(u) f(v) |u - v|^{2H-2} du dv` over `domain²`.
pub fn weighted_norm_h<F: Fn(f64) -> f64>(
    f: F,
    hurst: f64,
    domain: Interval,
    quad: QuadratureSpec,
) -> Result<Estimate> {
    crate::error::check_hurst_long_memory(hurst)?;
    let c = hurst * (2.0 * hurst - 1.0);
    let e = singular_double_integral(f, 2.0 * hurst - 2.0, domain, quad)?;
    Ok(Estimate {
        value: c * e.value,
        error: c * e.error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert_relative_eq!(s, 2.0 / 19.0, max_relative = 1e-13);
        assert_relative_eq!(w.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn hermite_rule_moments() {
        let (x, w) = gauss_hermite_normal(40);
        let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
        let m6: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(6)).sum();
        assert_relative_eq!(m4, 3.0, max_relative = 1e-10);
        assert_relative_eq!(m6, 15.0, max_relative = 1e-10);
    }

    #[test]
    fn power_singular_rule() {
        // ∫_0^2 s^{-0.4} ds = 2^{0.6} / 0.6
        let v = integrate_power_singular(|_| 1.0, 2.0, -0.4, 4);
        assert_relative_eq!(v, 2f64.powf(0.6) / 0.6, max_relative = 1e-12);
    }

    #[test]
    fn second_difference_series_matches_direct() {
        for a in [1.2, 1.5, 1.9] {
            let k: f64 = 64.0;
            let direct = (k + 1.0).powf(a) - 2.0 * k.powf(a) + (k - 1.0).powf(a);
            assert_relative_eq!(second_difference_power(a, k), direct, max_relative = 1e-8);
        }
    }

    #[test]
    fn convolution_fft_matches_direct() {
        let a: Vec<f64> = (0..300).map(|i| (i as f64 * 0.1).sin()).collect();
        let b: Vec<f64> = (0..200).map(|i| (i as f64 * 0.07).cos()).collect();
        let fast = convolve(&a, &b);
        for k in [0, 17, 250, 498] {
            let direct: f64 = (0..a.len())
                .filter(|&i| k >= i && k - i < b.len())
                .map(|i| a[i] * b[k - i])
                .sum();
            assert!((fast[k] - direct).abs() < 1e-9);
        }
    }

    #[test]
    fn norm_of_indicator_is_self_similar() {
        for t in [0.5, 1.0, 2.0] {
            let h = 0.7;
            let v = weighted_norm_h(|_| 1.0, h, Interval::new(0.0, t).unwrap(), QuadratureSpec::default())
                .unwrap();
            assert_relative_eq!(v.value, t.powf(2.0 * h), max_relative = 1e-10);
        }
    }

    #[test]
    fn norm_of_exponential() {
        let v = weighted_norm_h(
            |u: f64| (-u).exp(),
            0.75,
            Interval::half_line(),
            QuadratureSpec::default(),
        )
        .unwrap();
        let expected = 0.75 * statrs::function::gamma::gamma(1.5);
        assert_relative_eq!(v.value, expected, max_relative = 1e-6);
        assert_relative_eq!(expected, 0.664_670, max_relative = 1e-6);
    }

    #[test]
    fn norm_of_zero() {
        let v = weighted_norm_h(|_| 0.0, 0.6, Interval::new(0.0, 1.0).unwrap(), QuadratureSpec::default())
            .unwrap();
        assert_eq!(v.value, 0.0);
    }

    #[test]
    fn slow_tail_is_reported() {
        let r = weighted_norm_h(|_| 1.0, 0.6, Interval::half_line(), QuadratureSpec::default());
        assert!(r.is_err());
    }

    proptest! {
        #[test]
        fn quadratic_form_matches_direct(f in proptest::collection::vec(-1.0f64..1.0, 1..150)) {
            let w: Vec<f64> = (0..f.len()).map(|k| 1.0 / (1.0 + k as f64)).collect();
            let mut direct = 0.0;
            for i in 0..f.len() {
                for j in 0..f.len() {
                    direct += f[i] * f[j] * w[i.abs_diff(j)];
                }
            }
            prop_assert!((toeplitz_quadratic_form(&f, &w) - direct).abs() < 1e-9);
        }
    }
}
