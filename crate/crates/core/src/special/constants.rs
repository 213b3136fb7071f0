//! Normalization and limit constants built from Gamma and Beta functions.

use statrs::function::beta::ln_beta;
use statrs::function::gamma::{gamma, gamma_ur, ln_gamma};

use crate::error::{check_hurst_long_memory, domain, Error, Result};
use crate::spec::{underlying_hurst, HermiteSpec};
use crate::special::quadrature::{
    integrate, integrate_power_singular, singular_double_integral, Estimate, Interval,
    QuadratureSpec,
};

pub fn factorial(q: u32) -> f64 {
    (1..=q).map(|k| k as f64).product()
}

/// `β(a, b)` through log-gamma.
pub fn beta_fn(a: f64, b: f64) -> f64 {
    ln_beta(a, b).exp()
}

/// `c(H, q)` making `E[(Z_1^{q,H})²] = 1` in the time-domain representation:
/// `c² = H(2H-1) / (q! β(H₀-½, 2-2H₀)^q)`.
pub fn const_c_hermite(h: f64, q: u32) -> Result<f64> {
    check_hurst_long_memory(h)?;
    if q == 0 {
        return Err(domain("q must be at least 1"));
    }
    let h0 = underlying_hurst(h, q);
    let log_c2 = (h * (2.0 * h - 1.0)).ln()
        - factorial(q).ln()
        - q as f64 * ln_beta(h0 - 0.5, 2.0 - 2.0 * h0);
    Ok((0.5 * log_c2).exp())
}

/// `b_H = (1/(H+1)) √(2(2H-1)/H)`, the constant of the Rosenblatt kernel on an interval.
pub fn const_b_rosenblatt(h: f64) -> Result<f64> {
    check_hurst_long_memory(h)?;
    Ok((2.0 * (2.0 * h - 1.0) / h).sqrt() / (h + 1.0))
}

fn chaos_prefactor(h: f64, q: u32) -> Result<f64> {
    let h0 = underlying_hurst(h, q);
    let d = 4.0 * h0 - 3.0;
    if d <= 0.0 {
        return Err(domain(format!(
            "4H0 - 3 = {d} must be positive (H = {h}, q = {q})"
        )));
    }
    Ok(h * (2.0 * h - 1.0) / ((h0 - 0.5) * d).sqrt())
}

/// `B_{H,q}`, the Rosenblatt scale in the Hermite–Vasicek fluctuation limit.
pub fn const_vasicek_b(h: f64, q: u32) -> Result<f64> {
    check_hurst_long_memory(h)?;
    if q == 0 {
        return Err(domain("q must be at least 1"));
    }
    let pre = chaos_prefactor(h, q)?;
    let e = 2.0 * h + 2.0 * (1.0 - h) / q as f64;
    Ok(pre * gamma(e) / (e - 1.0))
}

/// `I(x) = ∫ ½ e^{-|w|} |w - x|^γ dw` for `x >= 0`, `γ ∈ (-1, 0)`.
fn laplace_power_mean(gamma_exp: f64, x: f64) -> f64 {
    let a = gamma_exp + 1.0;
    let g = gamma(a);
    if x > 40.0 {
        let c2 = gamma_exp * (gamma_exp - 1.0) / 2.0;
        let c4 = c2 * (gamma_exp - 2.0) * (gamma_exp - 3.0) / 12.0;
        return x.powf(gamma_exp) * (1.0 + 2.0 * c2 / (x * x) + 24.0 * c4 / x.powi(4));
    }
    // w > x, w < 0 and 0 < w < x.
    let right = g * (-x).exp();
    let left = if x == 0.0 { g } else { g * x.exp() * gamma_ur(a, x) };
    let middle = if x == 0.0 {
        0.0
    } else {
        integrate_power_singular(|s| (-(x - s)).exp(), x, gamma_exp, 8)
    };
    0.5 * (right + left + middle)
}

fn sigma_outer(gamma_exp: f64, panels: usize) -> f64 {
    let cut = 40.0;
    let body = integrate(
        |x| laplace_power_mean(gamma_exp, x).powi(2),
        0.0,
        cut,
        panels,
        16,
    );
    // ∫_X^∞ x^{2γ} (1 + a/x² + b/x⁴)² dx, truncated after 1/x⁴.
    let c2 = gamma_exp * (gamma_exp - 1.0) / 2.0;
    let c4 = c2 * (gamma_exp - 2.0) * (gamma_exp - 3.0) / 12.0;
    let a = 2.0 * c2;
    let b = 24.0 * c4;
    let tail_term = |p: f64, coef: f64| coef * cut.powf(p + 1.0) / -(p + 1.0);
    let e = 2.0 * gamma_exp;
    let tail = tail_term(e, 1.0) + tail_term(e - 2.0, 2.0 * a) + tail_term(e - 4.0, a * a + 2.0 * b);
    2.0 * (body + tail)
}

/// `σ_H = (2H-1)/(H Γ(2H)²) · √(∫_R (∬_{R+²} e^{-(u+v)} |u-v-x|^{2H-2} du dv)² dx)`
/// for `H ∈ (½, ¾)`.
///
/// The inner double integral is the mean of `|W - x|^{2H-2}` for a standard
/// Laplace variable `W`, evaluated in closed form up to one regular integral.
pub fn const_sigma_h(h: f64, quad: QuadratureSpec) -> Result<Estimate> {
    quad.validate()?;
    if !(h > 0.5 && h < 0.75) {
        return Err(domain(format!("H = {h} must lie in (0.5, 0.75)")));
    }
    let gamma_exp = 2.0 * h - 2.0;
    let pre = (2.0 * h - 1.0) / (h * gamma(2.0 * h).powi(2));
    let mut panels = (quad.points_per_axis / 8).max(8);
    let mut prev = sigma_outer(gamma_exp, panels);
    for _ in 0..quad.max_refinements {
        panels *= 2;
        let cur = sigma_outer(gamma_exp, panels);
        let change = (cur - prev).abs();
        if change <= 1e-4 * cur.abs() {
            let value = pre * cur.sqrt();
            let error = pre * 0.5 * change / cur.sqrt();
            return Ok(Estimate { value, error });
        }
        prev = cur;
    }
    Err(Error::Quadrature(format!(
        "sigma_H refinement did not settle for H = {h}"
    )))
}

/// `b(H, q)`, the scale of the second-chaos limit of the quadratic functional
/// of a Hermite-driven moving average with kernel `x`.
pub fn const_b_mavg<F: Fn(f64) -> f64>(
    h: f64,
    q: u32,
    x: F,
    quad: QuadratureSpec,
) -> Result<Estimate> {
    check_hurst_long_memory(h)?;
    if q < 1 {
        return Err(domain("q must be at least 1"));
    }
    let pre = chaos_prefactor(h, q)?;
    let h0 = underlying_hurst(h, q);
    let s = (q as f64 - 1.0) * (2.0 * h0 - 2.0);
    let e = singular_double_integral(x, s, Interval::half_line(), quad)?;
    Ok(Estimate {
        value: pre * e.value,
        error: pre * e.error,
    })
}

/// `b_{q,H}`: normalization of the Hermite sheet with `H′_j = 1 + (H_j - 1)/q`.
pub fn const_b_sheet(spec: &HermiteSpec) -> f64 {
    let q = spec.q();
    let qf = factorial(q);
    let mut b = qf.sqrt().powi(spec.dim() as i32 - 1);
    for (j, &h) in spec.hurst().iter().enumerate() {
        let hp = spec.h0(j);
        b *= (h * (2.0 * h - 1.0)).sqrt() / (qf * (hp * (2.0 * hp - 1.0)).powi(q as i32)).sqrt();
    }
    b
}

/// `c_{1,H}`, the limiting variance scale of the renormalized quadratic
/// variation of a Hermite sheet, with `H′_j = 1 + (H_j - 1)/q` on every axis.
pub fn const_c1_sheet(spec: &HermiteSpec) -> Result<f64> {
    let q = spec.q() as f64;
    let b = const_b_sheet(spec);
    let mut c = 2.0 * 2f64.powi(spec.dim() as i32) * b.powi(4);
    for j in 0..spec.dim() {
        let hp = spec.h0(j);
        let d = 4.0 * hp - 3.0;
        if d <= 0.0 {
            return Err(domain(format!(
                "4H' - 3 = {d} must be positive on axis {j}"
            )));
        }
        let num = (hp * (2.0 * hp - 1.0)).powf(2.0 * q);
        let den = d
            * (4.0 * hp - 2.0)
            * ((2.0 * hp - 2.0) * (q - 1.0) + 1.0).powi(2)
            * ((hp - 1.0) * (q - 1.0) + 1.0).powi(2);
        c *= num / den;
    }
    Ok(c)
}

/// `H Γ(2H)`, the stationary variance of the fractional Ornstein–Uhlenbeck
/// process with unit mean reversion.
pub fn ou_stationary_variance(h: f64) -> f64 {
    h * gamma(2.0 * h)
}

pub fn ln_gamma_fn(x: f64) -> f64 {
    ln_gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn beta_by_quadrature(a: f64, b: f64) -> f64 {
        // ∫_0^1 t^{a-1} (1-t)^{b-1} dt split at ½, each half with its own endpoint substitution.
        let left = integrate_power_singular(|t| (1.0 - t).powf(b - 1.0), 0.5, a - 1.0, 16);
        let right = integrate_power_singular(|s| (1.0 - s).powf(a - 1.0), 0.5, b - 1.0, 16);
        left + right
    }

    #[test]
    fn c_hermite_identity_with_independent_beta() {
        for (h, q) in [(0.7, 1u32), (0.6, 2)] {
            let c = const_c_hermite(h, q).unwrap();
            let h0 = underlying_hurst(h, q);
            let b = beta_by_quadrature(h0 - 0.5, 2.0 - 2.0 * h0);
            assert_relative_eq!(
                c * c * factorial(q) * b.powi(q as i32),
                h * (2.0 * h - 1.0),
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn c_hermite_beta_identity_tight() {
        for q in 1..=4 {
            for k in 0..9 {
                let h = 0.55 + 0.05 * k as f64;
                let c = const_c_hermite(h, q).unwrap();
                assert!(c > 0.0);
                let h0 = underlying_hurst(h, q);
                let lhs = c * c * factorial(q) * beta_fn(h0 - 0.5, 2.0 - 2.0 * h0).powi(q as i32);
                assert_relative_eq!(lhs, h * (2.0 * h - 1.0), max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn b_rosenblatt_values() {
        let v = const_b_rosenblatt(0.75).unwrap();
        assert_relative_eq!(v, 4.0 / 7.0 * (4.0f64 / 3.0).sqrt(), max_relative = 1e-14);
        assert!(const_b_rosenblatt(0.5 + 1e-9).unwrap() < 1e-4);
        assert!(const_b_rosenblatt(0.9).unwrap().is_finite());
    }

    #[test]
    fn vasicek_constant() {
        let h: f64 = 0.8;
        let h0: f64 = 0.9;
        let e = 2.0 * h + (1.0 - h);
        let oracle = h * (2.0 * h - 1.0) / ((h0 - 0.5) * (4.0 * h0 - 3.0)).sqrt()
            * ln_gamma(e).exp()
            / (e - 1.0);
        assert_relative_eq!(const_vasicek_b(0.8, 2).unwrap(), oracle, max_relative = 1e-12);
        assert!(const_vasicek_b(0.6, 1).is_err());
        assert!(const_vasicek_b(0.9, 1).is_ok());
        assert_relative_eq!(const_vasicek_b(0.7, 2).unwrap(), 0.971, max_relative = 2e-3);
    }

    #[test]
    fn sigma_h_is_finite_and_converged() {
        let quad = QuadratureSpec::default();
        let s = const_sigma_h(0.6, quad).unwrap();
        assert!(s.value > 0.0 && s.value.is_finite());
        assert!(s.error < 1e-3 * s.value);
        let s74 = const_sigma_h(0.74, quad).unwrap();
        assert!(s74.value.is_finite() && s74.value > s.value);
        assert!(const_sigma_h(0.75, quad).is_err());
    }

    #[test]
    fn laplace_mean_matches_full_line_quadrature() {
        // Oracle: direct quadrature of ½ e^{-|w|} |w - x|^γ over the whole line,
        // split at the singular point and at the kink of the density.
        let g = -0.6;
        for x in [0.3, 2.0, 7.5] {
            let f = |w: f64| 0.5 * (-w.abs()).exp();
            let left = integrate_power_singular(|s| f(x - s), x, g, 32)
                + integrate_power_singular(|s| f(-s) * (x + s).powf(g) / s.max(1e-300).powf(0.0), 60.0, 0.0, 64);
            let right = integrate_power_singular(|s| f(x + s), 60.0, g, 256);
            assert_relative_eq!(laplace_power_mean(g, x), left + right, max_relative = 1e-6);
        }
    }

    #[test]
    fn sigma_integrand_is_even() {
        // The inner integral depends on x only through the law of u - v, which is symmetric.
        let g = 2.0 * 0.65 - 2.0;
        let full = integrate(|x: f64| laplace_power_mean(g, x.abs()).powi(2), -20.0, 20.0, 400, 16);
        let half = integrate(|x| laplace_power_mean(g, x).powi(2), 0.0, 20.0, 200, 16);
        assert_relative_eq!(full, 2.0 * half, max_relative = 1e-10);
    }

    #[test]
    fn b_mavg_against_laplace_reduction() {
        // ∬ e^{-u} e^{-v} |u - v|^s du dv = E|W|^s = Γ(s + 1) for a standard Laplace W.
        let (h, q) = (0.7, 2u32);
        let h0 = underlying_hurst(h, q);
        let s = (q as f64 - 1.0) * (2.0 * h0 - 2.0);
        let oracle = h * (2.0 * h - 1.0) / ((h0 - 0.5) * (4.0 * h0 - 3.0)).sqrt() * gamma(s + 1.0);
        let b = const_b_mavg(h, q, |u: f64| (-u).exp(), QuadratureSpec::default()).unwrap();
        assert_relative_eq!(b.value, oracle, max_relative = 1e-5);
        let b2 = const_b_mavg(h, q, |u: f64| 2.0 * (-u).exp(), QuadratureSpec::default()).unwrap();
        assert_relative_eq!(b2.value, 4.0 * b.value, max_relative = 1e-9);
        let z = const_b_mavg(h, q, |_| 0.0, QuadratureSpec::default()).unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn sheet_constants() {
        let one = HermiteSpec::scalar(1, 0.7).unwrap();
        assert_relative_eq!(const_b_sheet(&one), 1.0, max_relative = 1e-14);

        let s1 = HermiteSpec::scalar(2, 0.8).unwrap();
        let s2 = HermiteSpec::new(2, vec![0.8, 0.8]).unwrap();
        let b1 = const_b_sheet(&s1);
        assert_relative_eq!(const_b_sheet(&s2), b1 * b1 * 2f64.sqrt(), max_relative = 1e-14);

        // Second implementation of c_{1,H} for d = 1 written from the expanded formula.
        let hp: f64 = 0.9;
        let q = 2.0;
        let b4 = (0.8 * 0.6 / (2.0 * (hp * (2.0 * hp - 1.0)).powi(2))).powi(2);
        let oracle = 2.0 * 2.0 * b4 * (hp * (2.0 * hp - 1.0)).powi(4)
            / ((4.0 * hp - 3.0) * (4.0 * hp - 2.0) * ((2.0 * hp - 2.0) * (q - 1.0) + 1.0).powi(2)
                * ((hp - 1.0) * (q - 1.0) + 1.0).powi(2));
        let c1 = const_c1_sheet(&s1).unwrap();
        assert_relative_eq!(c1, oracle, max_relative = 1e-12);

        // d = 2 with equal axes: factor 2 from 2^d, and per-axis structure squared.
        let c2 = const_c1_sheet(&s2).unwrap();
        let per_axis = c1 / (2.0 * 2.0 * b1.powi(4));
        assert_relative_eq!(c2, 2.0 * 4.0 * const_b_sheet(&s2).powi(4) * per_axis * per_axis, max_relative = 1e-12);

        // q = 1 requires H > 3/4.
        assert!(const_c1_sheet(&HermiteSpec::scalar(1, 0.7).unwrap()).is_err());
        assert!(const_c1_sheet(&HermiteSpec::scalar(1, 0.8).unwrap()).is_ok());
    }

    #[test]
    fn ou_variance_value() {
        assert_relative_eq!(ou_stationary_variance(0.7), 0.7 * gamma(1.4), max_relative = 1e-15);
        assert_relative_eq!(ou_stationary_variance(0.7), 0.6211, max_relative = 1e-3);
    }
}
