//! Probabilists' Hermite polynomials and Hermite expansions.

use crate::error::{domain, Error, Result};
use crate::special::quadrature::gauss_hermite_normal;

/// `H_k(x)` with `H_0 = 1`, `H_1 = x`, `H_{k+1} = x H_k - k H_{k-1}`.
pub fn hermite_poly(k: u32, x: f64) -> f64 {
    let mut p0 = 1.0;
    if k == 0 {
        return p0;
    }
    let mut p1 = x;
    for j in 1..k {
        let p2 = x * p1 - j as f64 * p0;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `H_0(x), …, H_kmax(x)`.
pub fn hermite_all(kmax: u32, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax as usize + 1);
    out.push(1.0);
    if kmax >= 1 {
        out.push(x);
    }
    for j in 1..kmax as usize {
        let next = x * out[j] - j as f64 * out[j - 1];
        out.push(next);
    }
    out
}

/// Expansion coefficients `c_1..c_kmax` of `g = Σ c_k H_k`, i.e.
/// `c_k = E[g(N) H_k(N)] / k!`, by Gauss–Hermite quadrature.
pub fn hermite_coefficients<G: Fn(f64) -> f64>(g: G, kmax: u32, nodes: usize) -> Result<Vec<f64>> {
    if kmax == 0 {
        return Err(domain("kmax must be at least 1"));
    }
    if nodes < 2 * kmax as usize {
        return Err(domain(format!(
            "need at least {} quadrature nodes for kmax = {kmax}",
            2 * kmax
        )));
    }
    let (x, w) = gauss_hermite_normal(nodes);
    let mut c = vec![0.0; kmax as usize];
    for (xi, wi) in x.iter().zip(&w) {
        let gv = g(*xi);
        if !gv.is_finite() {
            return Err(Error::NonFinite(format!("g({xi})")));
        }
        let h = hermite_all(kmax, *xi);
        for k in 1..=kmax as usize {
            c[k - 1] += wi * gv * h[k];
        }
    }
    let mut fact = 1.0;
    for k in 1..=kmax as usize {
        fact *= k as f64;
        c[k - 1] /= fact;
    }
    Ok(c)
}

pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Smallest `k >= 1` with `|c_k| > tol`.
pub fn hermite_rank<G: Fn(f64) -> f64>(g: G, kmax: u32, tol: f64) -> Result<u32> {
    let nodes = (2 * kmax as usize).max(64);
    let c = hermite_coefficients(g, kmax, nodes)?;
    c.iter()
        .position(|v| v.abs() > tol)
        .map(|i| i as u32 + 1)
        .ok_or(Error::RankUndetermined {
            kmax: kmax as usize,
            tol,
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn low_order_values() {
        assert_eq!(hermite_poly(2, 0.0), -1.0);
        assert_eq!(hermite_poly(3, 2.0), 2.0);
        for x in [-1.0, 0.0, 3.5] {
            assert_eq!(hermite_poly(1, x), x);
        }
    }

    #[test]
    fn orthogonality_under_gauss_hermite() {
        let (x, w) = gauss_hermite_normal(64);
        let mut fact = [1.0f64; 9];
        for k in 1..9 {
            fact[k] = fact[k - 1] * k as f64;
        }
        for j in 0..=8u32 {
            for k in 0..=8u32 {
                let s: f64 = x
                    .iter()
                    .zip(&w)
                    .map(|(x, w)| w * hermite_poly(j, *x) * hermite_poly(k, *x))
                    .sum();
                let expected = if j == k { fact[j as usize] } else { 0.0 };
                assert_abs_diff_eq!(s, expected, epsilon = 1e-8 * fact[j.max(k) as usize]);
            }
        }
    }

    #[test]
    fn coefficients_of_polynomials() {
        let c = hermite_coefficients(|x| x * x - 1.0, 3, 64).unwrap();
        assert_abs_diff_eq!(c[0], 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(c[1], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(c[2], 0.0, epsilon = 1e-10);
        let c = hermite_coefficients(|x| x.powi(3), 3, 64).unwrap();
        assert_abs_diff_eq!(c[0], 3.0, epsilon = 1e-10);
        assert_abs_diff_eq!(c[2], 1.0, epsilon = 1e-10);
    }

    #[test]
    fn coefficient_of_absolute_value() {
        // c_2 = E[|N| (N² - 1)] / 2 = (2√(2/π) - √(2/π)) / 2, computed here by
        // the closed-form half-normal moments E|N| = √(2/π), E|N|³ = 2√(2/π).
        let oracle = 0.5 * (2.0 * (2.0 / std::f64::consts::PI).sqrt() - (2.0 / std::f64::consts::PI).sqrt());
        let target = (2.0 / std::f64::consts::PI).sqrt();
        for nodes in [120, 200] {
            let c = hermite_coefficients(|x: f64| x.abs() - target, 2, nodes).unwrap();
            assert_abs_diff_eq!(c[0], 0.0, epsilon = 1e-10);
            assert_abs_diff_eq!(c[1], oracle, epsilon = 2e-3);
        }
        assert_abs_diff_eq!(oracle, 1.0 / (2.0 * std::f64::consts::PI).sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn ranks() {
        assert_eq!(hermite_rank(|x| x * x - 1.0, 8, DEFAULT_RANK_TOL).unwrap(), 2);
        assert_eq!(hermite_rank(|x| x.powi(3) - 3.0 * x, 8, DEFAULT_RANK_TOL).unwrap(), 3);
        let e = (-0.5f64).exp();
        assert_eq!(hermite_rank(|x: f64| x.cos() - e, 8, DEFAULT_RANK_TOL).unwrap(), 2);
        assert!(matches!(
            hermite_rank(|_| 0.0, 6, DEFAULT_RANK_TOL),
            Err(Error::RankUndetermined { .. })
        ));
    }

    #[test]
    fn cosine_second_coefficient() {
        // E[cos(N) H_2(N)] = -e^{-1/2}, so c_2 = -e^{-1/2} / 2.
        let e = (-0.5f64).exp();
        let c = hermite_coefficients(|x: f64| x.cos() - e, 4, 64).unwrap();
        assert_abs_diff_eq!(c[1], -0.5 * e, epsilon = 1e-12);
        assert_abs_diff_eq!(c[0], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn non_finite_input_rejected() {
        assert!(hermite_coefficients(|x: f64| 1.0 / x.abs().min(0.0), 2, 64).is_err());
    }

    proptest! {
        #[test]
        fn parity(k in 0u32..12, x in -5.0f64..5.0) {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let a = hermite_poly(k, -x);
            let b = sign * hermite_poly(k, x);
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }

        #[test]
        fn derivative_identity(k in 1u32..10, x in -3.0f64..3.0) {
            // H_k' = k H_{k-1}
            let h = 1e-6;
            let d = (hermite_poly(k, x + h) - hermite_poly(k, x - h)) / (2.0 * h);
            let e = k as f64 * hermite_poly(k - 1, x);
            prop_assert!((d - e).abs() <= 1e-4 * (1.0 + e.abs()));
        }
    }
}
