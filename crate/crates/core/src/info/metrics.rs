//! Entropy, relative entropy, Fisher information, total variation, the de
//! Bruijn identity and the inequality chain relating them.

use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::info::density::{integrate_pieces, DensityModel, ProductDensityModel};
use crate::special::quadrature::{gauss_legendre_unit, QuadratureSpec};

/// Mass of `f` outside the support of `g` above which `D(f‖g) = ∞`.
const SUPPORT_MASS_TOL: f64 = 1e-10;

/// Relative entropy, possibly infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Divergence {
    Finite(f64),
    Infinite,
}

impl Divergence {
    pub fn value(&self) -> f64 {
        match self {
            Divergence::Finite(v) => *v,
            Divergence::Infinite => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Divergence::Finite(_))
    }
}

fn merged_breaks(a: &[f64], b: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let mut v: Vec<f64> = a.iter().chain(b).copied().filter(|x| *x >= lo && *x <= hi).collect();
    v.push(lo);
    v.push(hi);
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// `-∫ f log f`, with `0 log 0 = 0`.
pub fn entropy(f: &DensityModel, quad: &QuadratureSpec) -> Result<f64> {
    let g = |x: f64| {
        let l = f.ln_pdf(x);
        if l == f64::NEG_INFINITY {
            0.0
        } else {
            -l.exp() * l
        }
    };
    integrate_pieces(&g, &f.breaks(), quad)
}

/// `D(f‖g) = ∫ f log(f/g)`; infinite when `f` puts mass outside `supp(g)`.
pub fn relative_entropy(f: &DensityModel, g: &DensityModel, quad: &QuadratureSpec) -> Result<Divergence> {
    let (flo, fhi) = f.range();
    let (glo, ghi) = (g.support().lo, g.support().hi);
    let lo = flo.max(glo);
    let hi = fhi.min(ghi);
    let mut outside = 0.0;
    if glo > flo {
        outside += integrate_pieces(&|x| f.pdf(x), &[flo, glo.min(fhi)], quad)?;
    }
    if ghi < fhi {
        outside += integrate_pieces(&|x| f.pdf(x), &[ghi.max(flo), fhi], quad)?;
    }
    if outside > SUPPORT_MASS_TOL || lo >= hi {
        return Ok(Divergence::Infinite);
    }
    let breaks = merged_breaks(&f.breaks(), &g.breaks(), lo, hi);
    let integrand = |x: f64| {
        let lf = f.ln_pdf(x);
        if lf == f64::NEG_INFINITY {
            0.0
        } else {
            lf.exp() * (lf - g.ln_pdf(x))
        }
    };
    Ok(Divergence::Finite(integrate_pieces(&integrand, &breaks, quad)?))
}

/// `J(F) = ∫ ρ² f`.
pub fn fisher_information(f: &DensityModel, quad: &QuadratureSpec) -> Result<f64> {
    if !f.is_smooth() {
        return Err(domain(format!("{}: Fisher information needs a smooth density", f.name())));
    }
    integrate_pieces(&|x| f.score(x).powi(2) * f.pdf(x), &f.breaks(), quad)
}

/// `J_st(F) = σ² J(F) - 1`.
pub fn standardized_fisher(f: &DensityModel, quad: &QuadratureSpec) -> Result<f64> {
    Ok(f.variance() * fisher_information(f, quad)? - 1.0)
}

/// Roots of `f - g` on a scan of the common range, located by bisection.
fn crossings(f: &DensityModel, g: &DensityModel, lo: f64, hi: f64) -> Vec<f64> {
    let d = |x: f64| f.pdf(x) - g.pdf(x);
    let n = 8192;
    let h = (hi - lo) / n as f64;
    let mut out = Vec::new();
    let mut x0 = lo;
    let mut d0 = d(x0);
    for i in 1..=n {
        let x1 = lo + i as f64 * h;
        let d1 = d(x1);
        if d0 * d1 < 0.0 {
            let (mut a, mut b, mut da) = (x0, x1, d0);
            for _ in 0..100 {
                let m = 0.5 * (a + b);
                let dm = d(m);
                if dm * da <= 0.0 {
                    b = m;
                } else {
                    a = m;
                    da = dm;
                }
                if b - a < 1e-14 * (1.0 + m.abs()) {
                    break;
                }
            }
            out.push(0.5 * (a + b));
        }
        x0 = x1;
        d0 = d1;
    }
    out
}

/// `½ ∫ |f - g|`
pub fn total_variation(f: &DensityModel, g: &DensityModel, quad: &QuadratureSpec) -> Result<f64> {
    let (flo, fhi) = f.range();
    let (glo, ghi) = g.range();
    let lo = flo.min(glo);
    let hi = fhi.max(ghi);
    let mut extra = crossings(f, g, lo, hi);
    extra.extend([f.support().lo, f.support().hi, g.support().lo, g.support().hi]);
    let breaks = merged_breaks(&extra, &[flo, fhi, glo, ghi], lo, hi);
    let v = integrate_pieces(&|x| (f.pdf(x) - g.pdf(x)).abs(), &breaks, quad)?;
    Ok((0.5 * v).clamp(0.0, 1.0))
}

/// `sup_x |f(x) - g(x)|` on a fine scan of the common range.
pub fn sup_distance(f: &DensityModel, g: &DensityModel) -> f64 {
    let lo = f.range().0.min(g.range().0);
    let hi = f.range().1.max(g.range().1);
    let n = 1 << 16;
    (0..=n)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / n as f64;
            (f.pdf(x) - g.pdf(x)).abs()
        })
        .fold(0.0, f64::max)
}

fn check_standardized(f: &DensityModel) -> Result<()> {
    if f.mean().abs() > 1e-6 || (f.variance() - 1.0).abs() > 1e-6 {
        return Err(domain(format!(
            "{} is not standardized: mean {}, variance {}",
            f.name(),
            f.mean(),
            f.variance()
        )));
    }
    Ok(())
}

/// Both sides of the de Bruijn identity
/// `D(F‖Z) = ∫_0^1 (J(√t F + √(1-t) Z) - 1)/(2t) dt`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeBruijn {
    pub lhs: f64,
    pub rhs: f64,
}

impl DeBruijn {
    pub fn gap(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// Shared convolution grid: `2^13` points on `[-L, L]`.
const CONV_POINTS: usize = 1 << 13;
const CONV_HALF_WIDTH: f64 = 10.0;
const CONV_TAIL_MASS: f64 = 1e-9;
/// Lower end of the `log t` integration range; the integrand in `log t` is
/// `(J - 1)/2 → 0`, so the omitted part is below `1e-8 · J(F)`.
const T_MIN: f64 = 1e-8;

/// `J(√t F + √(1-t) Z)` for each `t`.
///
/// When `√t F` is resolved by the grid (`√t >= 0.2`) its density is sampled
/// and transformed; otherwise its characteristic function is summed over a
/// fine quadrature of `f`. The Gaussian convolution and the derivative are
/// applied exactly in Fourier space.
fn fisher_along_heat_flow(f: &DensityModel, ts: &[f64], quad: &QuadratureSpec) -> Result<Vec<f64>> {
    let n = CONV_POINTS;
    let l = CONV_HALF_WIDTH;
    let dx = 2.0 * l / n as f64;
    let (flo, fhi) = f.range();
    let mut tail = 0.0;
    if flo < -l {
        tail += integrate_pieces(&|x| f.pdf(x), &[flo, -l], quad)?;
    }
    if fhi > l {
        tail += integrate_pieces(&|x| f.pdf(x), &[l, fhi], quad)?;
    }
    if tail > CONV_TAIL_MASS {
        return Err(Error::Grid(format!(
            "convolution grid overflow: mass {tail:e} outside [-{l}, {l}]"
        )));
    }
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let omega: Vec<f64> = (0..n)
        .map(|k| {
            let kk = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
            2.0 * std::f64::consts::PI * kk / (n as f64 * dx)
        })
        .collect();
    // Fine quadrature of f for the binned case.
    let (gx, gw) = gauss_legendre_unit(16);
    let lo = flo.max(-l);
    let hi = fhi.min(l);
    let panels = 2048;
    let ph = (hi - lo) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * 16);
    for p in 0..panels {
        for (xi, wi) in gx.iter().zip(&gw) {
            let y = lo + ph * (p as f64 + xi);
            nodes.push((y, wi * ph * f.pdf(y)));
        }
    }
    let mut out = Vec::with_capacity(ts.len());
    for &t in ts {
        let a = t.sqrt();
        let s2 = 1.0 - t;
        let mut m = vec![Complex::new(0.0, 0.0); n];
        if a >= 0.2 {
            for (k, mk) in m.iter_mut().enumerate() {
                let x = -l + k as f64 * dx;
                mk.re = f.pdf(x / a) / a * dx;
            }
            fwd.process(&mut m);
            for k in 0..n {
                m[k] *= (-0.5 * s2 * omega[k] * omega[k]).exp();
            }
        } else {
            // Narrow case: characteristic function of f at a·ω from the
            // quadrature nodes, kept where the Gaussian factor is visible.
            let wmax = (2.0 * 41.5 / s2).sqrt();
            for k in 0..n {
                let w = omega[k];
                if w.abs() > wmax {
                    continue;
                }
                let (mut re, mut im) = (0.0, 0.0);
                for &(y, wt) in &nodes {
                    let (sn, cs) = (a * w * y).sin_cos();
                    re += wt * cs;
                    im -= wt * sn;
                }
                // Grid index 0 sits at x = -L.
                let phase = Complex::from_polar((-0.5 * s2 * w * w).exp(), -w * l);
                m[k] = Complex::new(re, im) * phase;
            }
        }
        let d: Vec<Complex<f64>> = m.iter().zip(&omega).map(|(c, w)| c * Complex::new(0.0, *w)).collect();
        let mut d = d;
        inv.process(&mut m);
        inv.process(&mut d);
        let scale = 1.0 / (n as f64 * dx);
        let pmax = m.iter().map(|c| c.re * scale).fold(0.0, f64::max);
        let mut j = 0.0;
        for k in 0..n {
            let p = m[k].re * scale;
            if p > 1e-13 * pmax {
                let dp = d[k].re * scale;
                j += dp * dp / p * dx;
            }
        }
        out.push(j);
    }
    Ok(out)
}

/// `lhs = D(f‖N(0,1))`, `rhs` the heat-flow integral with `t_grid`
/// Gauss–Legendre nodes in `log t` over `[1e-8, 1]`.
pub fn de_bruijn_gap(f: &DensityModel, quad: &QuadratureSpec, t_grid: usize) -> Result<DeBruijn> {
    check_standardized(f)?;
    if !f.is_smooth() {
        return Err(domain(format!("{}: de Bruijn needs a smooth density", f.name())));
    }
    if t_grid < 2 {
        return Err(domain("t_grid must be at least 2"));
    }
    let z = DensityModel::gaussian(0.0, 1.0)?;
    let lhs = relative_entropy(f, &z, quad)?.value();
    let (x, w) = gauss_legendre_unit(t_grid);
    let (ulo, uhi) = (T_MIN.ln(), 0.0);
    let ts: Vec<f64> = x.iter().map(|xi| (ulo + (uhi - ulo) * xi).exp()).collect();
    let js = fisher_along_heat_flow(f, &ts, quad)?;
    // dt/(2t) = du/2 with u = log t.
    let rhs = w
        .iter()
        .zip(&js)
        .map(|(wi, j)| wi * (uhi - ulo) * 0.5 * (j - 1.0))
        .sum();
    Ok(DeBruijn { lhs, rhs })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

impl InequalityCheck {
    fn new(name: &str, lhs: f64, rhs: f64, slack: f64) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            satisfied: lhs <= rhs + slack,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub model: String,
    pub total_variation: f64,
    pub relative_entropy: f64,
    pub fisher: f64,
    pub fisher_standardized: f64,
    pub sup_distance: f64,
    /// Orderings that must hold: `2 d_TV² <= D` and `D <= ½(J - 1)`.
    pub asserted: Vec<InequalityCheck>,
    /// Shimizu bounds under the `√J` and `√J_st` readings; reported only.
    pub reported: Vec<InequalityCheck>,
}

impl InequalityReport {
    pub fn holds(&self) -> bool {
        self.asserted.iter().all(|c| c.satisfied)
    }
}

/// Slack for orderings that hold with equality at the Gaussian.
const ORDER_SLACK: f64 = 1e-9;

pub fn inequality_suite(f: &DensityModel, quad: &QuadratureSpec) -> Result<InequalityReport> {
    check_standardized(f)?;
    let z = DensityModel::gaussian(0.0, 1.0)?;
    let tv = total_variation(f, &z, quad)?;
    let d = relative_entropy(f, &z, quad)?.value();
    let j = fisher_information(f, quad)?;
    let jst = f.variance() * j - 1.0;
    let sup = sup_distance(f, &z);
    let asserted = vec![
        InequalityCheck::new("2 d_TV^2 <= D", 2.0 * tv * tv, d, ORDER_SLACK),
        InequalityCheck::new("D <= (J - 1)/2", d, 0.5 * (j - 1.0), ORDER_SLACK),
    ];
    let reported = vec![
        InequalityCheck::new("sup|f - phi| <= sqrt(J)", sup, j.sqrt(), 0.0),
        InequalityCheck::new("sup|f - phi| <= sqrt(J_st)", sup, jst.max(0.0).sqrt(), 0.0),
        InequalityCheck::new("d_TV <= sqrt(J/2)", tv, (0.5 * j).sqrt(), 0.0),
        InequalityCheck::new("d_TV <= sqrt(J_st/2)", tv, (0.5 * jst.max(0.0)).sqrt(), 0.0),
    ];
    Ok(InequalityReport {
        model: f.name().to_string(),
        total_variation: tv,
        relative_entropy: d,
        fisher: j,
        fisher_standardized: jst,
        sup_distance: sup,
        asserted,
        reported,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceBoundReport {
    pub dim: usize,
    pub covariance_op_norm: f64,
    pub relative_entropy: f64,
    /// `tr(C^{-1} J_st(F)) = tr J(F) - tr C^{-1}`
    pub trace_standardized_fisher: f64,
    pub total_variation: f64,
    /// `D <= ‖C‖ · ½ tr(C^{-1} J_st)` and `4 d_TV² <= 2D <= ‖C‖ tr(C^{-1} J_st)`.
    pub checks: Vec<InequalityCheck>,
}

impl TraceBoundReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.satisfied)
    }
}

/// `d_TV` between a product density and the product Gaussian with matching
/// means and variances, by tensor Gauss–Legendre quadrature (`d <= 3`).
fn product_total_variation(f: &ProductDensityModel, z: &[DensityModel]) -> Result<f64> {
    let d = f.dim();
    if d > 3 {
        return Err(domain("total variation of product models is limited to d <= 3"));
    }
    let per_axis = if d == 1 { 4096 } else if d == 2 { 512 } else { 96 };
    let (x, w) = gauss_legendre_unit(16);
    let axes: Vec<Vec<(f64, f64, f64)>> = f
        .components()
        .iter()
        .zip(z)
        .map(|(c, g)| {
            let lo = c.range().0.min(g.range().0).max(c.mean() - 20.0 * c.sd());
            let hi = c.range().1.max(g.range().1).min(c.mean() + 20.0 * c.sd());
            let panels = per_axis / 16;
            let h = (hi - lo) / panels as f64;
            let mut v = Vec::with_capacity(per_axis);
            for p in 0..panels {
                for (xi, wi) in x.iter().zip(&w) {
                    let y = lo + h * (p as f64 + xi);
                    v.push((wi * h, c.pdf(y), g.pdf(y)));
                }
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    let mut idx = vec![0usize; d];
    let total: usize = axes.iter().map(|a| a.len()).product();
    let mut acc = 0.0;
    for _ in 0..total {
        let (mut wt, mut pf, mut pg) = (1.0, 1.0, 1.0);
        for j in 0..d {
            let (a, b, c) = axes[j][idx[j]];
            wt *= a;
            pf *= b;
            pg *= c;
        }
        acc += wt * (pf - pg).abs();
        for j in (0..d).rev() {
            idx[j] += 1;
            if idx[j] < axes[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
    Ok((0.5 * acc).clamp(0.0, 1.0))
}

/// Evaluates the multivariate chain for a product density against
/// `N(μ, C)` with `C = diag(σ_i²)`.
pub fn multivariate_trace_bound(f: &ProductDensityModel, quad: &QuadratureSpec) -> Result<TraceBoundReport> {
    let z: Vec<DensityModel> = f
        .components()
        .iter()
        .map(|c| DensityModel::gaussian(c.mean(), c.sd()))
        .collect::<Result<_>>()?;
    let mut d = 0.0;
    let mut tr = 0.0;
    for (c, g) in f.components().iter().zip(&z) {
        d += relative_entropy(c, g, quad)?.value();
        tr += fisher_information(c, quad)? - 1.0 / c.variance();
    }
    let op = f.variances().into_iter().fold(0.0, f64::max);
    let tv = product_total_variation(f, &z)?;
    let checks = vec![
        InequalityCheck::new("D <= |C| tr(C^-1 J_st)/2", d, 0.5 * op * tr, ORDER_SLACK),
        InequalityCheck::new("4 d_TV^2 <= 2 D", 4.0 * tv * tv, 2.0 * d, ORDER_SLACK),
        InequalityCheck::new("2 D <= |C| tr(C^-1 J_st)", 2.0 * d, op * tr, ORDER_SLACK),
    ];
    Ok(TraceBoundReport {
        dim: f.dim(),
        covariance_op_norm: op,
        relative_entropy: d,
        trace_standardized_fisher: tr,
        total_variation: tv,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::density::Bandwidth;
    use crate::rng::derive_stream;
    use statrs::function::erf::erf;

    fn q() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn gaussian_entropy_and_fisher() {
        let g = DensityModel::gaussian(0.0, 1.0).unwrap();
        let h = entropy(&g, &q()).unwrap();
        assert!((h - 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln()).abs() < 1e-8);
        for s2 in [1.0f64, 4.0] {
            let g = DensityModel::gaussian(0.0, s2.sqrt()).unwrap();
            assert!((fisher_information(&g, &q()).unwrap() - 1.0 / s2).abs() < 1e-6);
            assert!(standardized_fisher(&g, &q()).unwrap().abs() < 1e-6);
        }
    }

    #[test]
    fn uniform_entropy() {
        let u = DensityModel::uniform(0.0, 2.0).unwrap();
        assert!((entropy(&u, &q()).unwrap() - 2f64.ln()).abs() < 1e-10);
        assert!(fisher_information(&u, &q()).is_err());
    }

    #[test]
    fn mixture_entropy_matches_fine_grid() {
        let m = DensityModel::standardized_mixture().unwrap();
        let h = entropy(&m, &q()).unwrap();
        // Independent oracle: fine trapezoid grid.
        let n = 400_000;
        let (lo, hi) = (-12.0, 12.0);
        let dx = (hi - lo) / n as f64;
        let oracle: f64 = (0..=n)
            .map(|i| {
                let x = lo + i as f64 * dx;
                let p = m.pdf(x);
                let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                if p > 0.0 { -w * p * p.ln() * dx } else { 0.0 }
            })
            .sum();
        assert!((h - oracle).abs() < 1e-5, "{h} vs {oracle}");
    }

    #[test]
    fn gaussian_kl_closed_form() {
        let a = DensityModel::gaussian(0.0, 1.0).unwrap();
        let b = DensityModel::gaussian(0.0, 2.0).unwrap();
        let d = relative_entropy(&a, &b, &q()).unwrap().value();
        assert!((d - 0.5 * (0.25 + 4f64.ln() - 1.0)).abs() < 1e-9);
        assert!(relative_entropy(&a, &a, &q()).unwrap().value().abs() < 1e-8);
    }

    #[test]
    fn support_rule() {
        let u = DensityModel::uniform(0.0, 1.0).unwrap();
        let z = DensityModel::gaussian(0.0, 1.0).unwrap();
        let half = DensityModel::uniform(0.0, 0.5).unwrap();
        assert!(relative_entropy(&u, &z, &q()).unwrap().is_finite());
        assert_eq!(relative_entropy(&u, &half, &q()).unwrap(), Divergence::Infinite);
        // Uniform(0, 0.5) inside Uniform(0, 1): D = log 2.
        let d = relative_entropy(&half, &u, &q()).unwrap().value();
        assert!((d - 2f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn total_variation_cases() {
        let a = DensityModel::gaussian(0.0, 1.0).unwrap();
        let b = DensityModel::gaussian(0.5, 1.0).unwrap();
        let exact = erf(0.25 / std::f64::consts::SQRT_2);
        assert!((total_variation(&a, &b, &q()).unwrap() - exact).abs() < 1e-8);
        assert!(total_variation(&a, &a, &q()).unwrap() < 1e-12);
        let u1 = DensityModel::uniform(0.0, 1.0).unwrap();
        let u2 = DensityModel::uniform(2.0, 3.0).unwrap();
        assert!((total_variation(&u1, &u2, &q()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn de_bruijn_gaussian_and_mixture() {
        let z = DensityModel::gaussian(0.0, 1.0).unwrap();
        let r = de_bruijn_gap(&z, &q(), 64).unwrap();
        assert!(r.lhs.abs() < 1e-8 && r.rhs.abs() < 1e-8, "{r:?}");
        let m = DensityModel::standardized_mixture().unwrap();
        let r = de_bruijn_gap(&m, &q(), 64).unwrap();
        assert!(r.gap() < 1e-8, "{r:?}");
        // Independent value of D for the mixture.
        assert!((r.lhs - 0.171_998_762_480).abs() < 1e-10);
        let j = fisher_information(&m, &q()).unwrap();
        assert!(r.lhs <= 0.5 * (j - 1.0) + 1e-9);
    }

    #[test]
    fn de_bruijn_rejects_unstandardized() {
        let g = DensityModel::gaussian(0.0, 2.0).unwrap();
        assert!(de_bruijn_gap(&g, &q(), 64).is_err());
    }

    #[test]
    fn suite_on_fixtures() {
        let z = DensityModel::gaussian(0.0, 1.0).unwrap();
        let r = inequality_suite(&z, &q()).unwrap();
        assert!(r.holds());
        assert!(r.total_variation < 1e-10 && r.relative_entropy.abs() < 1e-10);
        assert!((r.fisher - 1.0).abs() < 1e-8);
        for m in [DensityModel::standardized_mixture().unwrap(), DensityModel::student_t(10.0).unwrap()] {
            let r = inequality_suite(&m, &q()).unwrap();
            assert!(r.holds(), "{r:?}");
            assert!(2.0 * r.total_variation.powi(2) < r.relative_entropy);
            assert!(r.relative_entropy < 0.5 * (r.fisher - 1.0));
        }
    }

    #[test]
    fn trace_bound_products() {
        let g1 = DensityModel::gaussian(0.0, 1.0).unwrap();
        let g2 = DensityModel::gaussian(0.0, 2.0).unwrap();
        let r = multivariate_trace_bound(&ProductDensityModel::new(vec![g1.clone(), g2]).unwrap(), &q()).unwrap();
        assert!(r.relative_entropy.abs() < 1e-9 && r.trace_standardized_fisher.abs() < 1e-6);
        assert!((r.covariance_op_norm - 4.0).abs() < 1e-8);
        assert!(r.holds());

        let m = DensityModel::standardized_mixture().unwrap();
        let r = multivariate_trace_bound(&ProductDensityModel::new(vec![m.clone(), g1.clone()]).unwrap(), &q()).unwrap();
        let d1 = relative_entropy(&m, &g1, &q()).unwrap().value();
        let j1 = standardized_fisher(&m, &q()).unwrap();
        assert!((r.relative_entropy - d1).abs() < 1e-9);
        assert!((r.trace_standardized_fisher - j1).abs() < 1e-6);
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn kde_recovers_gaussian() {
        let x = derive_stream(2, 0).normals(100_000);
        let k = DensityModel::kde(&x, Bandwidth::Silverman).unwrap();
        let z = DensityModel::gaussian(0.0, 1.0).unwrap();
        assert!(total_variation(&k, &z, &QuadratureSpec { rel_tol: 1e-6, ..q() }).unwrap() < 0.02);
    }
}
