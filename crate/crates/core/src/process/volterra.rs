//! The Volterra kernel `K^H` of fractional Brownian motion and its cell integrals.

use statrs::function::beta::{beta_reg, ln_beta};

use crate::error::{check_hurst_long_memory, domain, Result};
use crate::special::quadrature::integrate_power_singular;

/// `c_H = √(H(2H-1) / β(2-2H, H-½))`.
///
/// This is the only place the constant is defined. The form `H(H-1)` under
/// the square root would be negative on `(½, 1)`; the `H(2H-1)` form is the
/// one for which `∫_0^{u∧v} ∂₁K(u,a) ∂₁K(v,a) da = H(2H-1)|u-v|^{2H-2}`.
pub fn volterra_constant(h: f64) -> f64 {
    (h * (2.0 * h - 1.0) / ln_beta(2.0 - 2.0 * h, h - 0.5).exp()).sqrt()
}

fn partial1_unchecked(h: f64, c: f64, t: f64, s: f64) -> f64 {
    c * (t / s).powf(h - 0.5) * (t - s).powf(h - 1.5)
}

/// `∂₁K^H(t, s) = c_H (t/s)^{H-½} (t-s)^{H-3/2}` for `0 < s < t`.
pub fn partial1_kh(h: f64, t: f64, s: f64) -> Result<f64> {
    check_hurst_long_memory(h)?;
    if !(s > 0.0 && s < t) {
        return Err(domain(format!("need 0 < s < t, got s = {s}, t = {t}")));
    }
    Ok(partial1_unchecked(h, volterra_constant(h), t, s))
}

/// `K^H(t, s) = ∫_s^t ∂₁K^H(u, s) du` for `0 < s < t`.
pub fn volterra_kernel(h: f64, t: f64, s: f64) -> Result<f64> {
    check_hurst_long_memory(h)?;
    if !(s > 0.0 && s < t) {
        return Err(domain(format!("need 0 < s < t, got s = {s}, t = {t}")));
    }
    let c = volterra_constant(h);
    let v = integrate_power_singular(|w| (1.0 + w / s).powf(h - 0.5), t - s, h - 1.5, 16);
    Ok(c * v)
}

/// Integrals of `y ↦ ∂₁K^{h}(u, y)` over cells, evaluated through the
/// regularized incomplete beta function.
///
/// For `y = u x`, `∫_a^b ∂₁K(u,y) dy = c u^{h-½} B(p,r) [I_{b/u}(p,r) - I_{a/u}(p,r)]`
/// with `p = 3/2 - h`, `r = h - ½`.
#[derive(Clone, Debug)]
pub(crate) struct VolterraCells {
    p: f64,
    r: f64,
    scale: f64,
    h: f64,
}

impl VolterraCells {
    pub(crate) fn new(h: f64) -> Self {
        let p = 1.5 - h;
        let r = h - 0.5;
        let scale = volterra_constant(h) * ln_beta(p, r).exp();
        Self { p, r, scale, h }
    }

    /// `Φ_i(u) = ∫_{edges[i]}^{edges[i+1] ∧ u} ∂₁K(u, y) dy` for every cell, written into `out`.
    /// `edges` must be increasing and start at 0.
    pub(crate) fn values_into(&self, edges: &[f64], u: f64, out: &mut [f64]) {
        let cells = edges.len() - 1;
        let pre = self.scale * u.powf(self.h - 0.5);
        // lower[k] = I_{edge_k / u}(p, r), upper[k] = 1 - lower[k], each computed directly.
        let mut prev_lower = 0.0;
        let mut prev_upper = 1.0;
        let mut prev_x = edges[0] / u;
        for i in 0..cells {
            if edges[i] >= u {
                out[i] = 0.0;
                continue;
            }
            let hi = edges[i + 1];
            if hi >= u {
                out[i] = pre * prev_upper;
                continue;
            }
            let x = hi / u;
            let (lower, upper) = if x <= 0.5 {
                let l = beta_reg(self.p, self.r, x);
                (l, 1.0 - l)
            } else {
                let up = beta_reg(self.r, self.p, 1.0 - x);
                (1.0 - up, up)
            };
            out[i] = if prev_x > 0.5 {
                pre * (prev_upper - upper)
            } else {
                pre * (lower - prev_lower)
            };
            prev_lower = lower;
            prev_upper = upper;
            prev_x = x;
        }
    }
}

/// Cell integrals of `y ↦ (u - y)_+^{r-1}`: `[(u-lo)^r - (u-min(hi,u))^r] / r`.
pub(crate) fn power_cell_values_into(r: f64, edges: &[f64], u: f64, out: &mut [f64]) {
    for i in 0..edges.len() - 1 {
        let lo = edges[i];
        if lo >= u {
            out[i] = 0.0;
            continue;
        }
        let hi = edges[i + 1].min(u);
        out[i] = ((u - lo).powf(r) - (u - hi).powf(r)) / r;
    }
}
