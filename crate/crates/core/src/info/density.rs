//! One-dimensional density models with analytic scores.
//!
//! Every model is checked on construction: `∫ f = 1` to 1e-6 and, for smooth
//! models, the Stein identity `E[ρ(F) g(F)] = -E[g′(F)]` for `g ∈ {1, x, x²}`
//! to 1e-4.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::special::quadrature::{gauss_legendre_unit, QuadratureSpec};
use crate::special::constants::ln_gamma_fn;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

const GL_ORDER: usize = 16;
/// Absolute agreement accepted for integrals that vanish up to rounding.
const ABS_FLOOR: f64 = 1e-15;
/// Half-width of the quadrature range of unbounded models, in standard deviations.
const TAIL_SDS: f64 = 40.0;

/// Closed support `[lo, hi]`; either end may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
}

impl Support {
    pub fn real_line() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// Bandwidth choice for [`DensityModel::kde`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bandwidth {
    /// `1.06 · sd · n^{-1/5}`
    Silverman,
    Fixed(f64),
}

#[derive(Clone)]
pub struct DensityModel {
    name: String,
    ln_pdf: ScalarFn,
    score: ScalarFn,
    support: Support,
    /// Finite quadrature range covering the model's mass.
    range: (f64, f64),
    mean: f64,
    variance: f64,
    smooth: bool,
}

impl fmt::Debug for DensityModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityModel")
            .field("name", &self.name)
            .field("support", &self.support)
            .field("mean", &self.mean)
            .field("variance", &self.variance)
            .field("smooth", &self.smooth)
            .finish()
    }
}

/// `∫ g` over consecutive pieces of `breaks`, refining by panel doubling until
/// the change is below `rel_tol · ∫|g|`.
pub(crate) fn integrate_pieces(g: &dyn Fn(f64) -> f64, breaks: &[f64], quad: &QuadratureSpec) -> Result<f64> {
    quad.validate()?;
    let (x, w) = gauss_legendre_unit(GL_ORDER);
    let total = breaks[breaks.len() - 1] - breaks[0];
    if !(total > 0.0 && total.is_finite()) {
        return Err(domain("integration range must be finite and non-empty"));
    }
    let base = (quad.points_per_axis / GL_ORDER).max(1);
    let eval = |mult: usize| -> (f64, f64) {
        let mut s = 0.0;
        let mut a = 0.0;
        for piece in breaks.windows(2) {
            let len = piece[1] - piece[0];
            if len <= 0.0 {
                continue;
            }
            let panels = ((base as f64 * len / total).ceil() as usize).max(1) * mult;
            let h = len / panels as f64;
            for p in 0..panels {
                let lo = piece[0] + p as f64 * h;
                for (xi, wi) in x.iter().zip(&w) {
                    let v = g(lo + h * xi);
                    s += wi * h * v;
                    a += wi * h * v.abs();
                }
            }
        }
        (s, a)
    };
    let (mut prev, _) = eval(1);
    let mut mult = 1;
    for _ in 0..quad.max_refinements {
        mult *= 2;
        let (cur, abs) = eval(mult);
        if !cur.is_finite() {
            return Err(Error::NonFinite("integrand".into()));
        }
        if (cur - prev).abs() <= quad.rel_tol * abs + ABS_FLOOR {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Quadrature(format!(
        "no convergence to {} after {} refinements",
        quad.rel_tol, quad.max_refinements
    )))
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

impl DensityModel {
    /// Builds and validates a model from its log-density and score.
    ///
    /// `range` must carry all but a negligible part of the mass; mean and
    /// variance are computed by quadrature over it.
    pub fn new(
        name: impl Into<String>,
        support: Support,
        range: (f64, f64),
        ln_pdf: ScalarFn,
        score: ScalarFn,
        smooth: bool,
    ) -> Result<Self> {
        let name = name.into();
        if !(range.0.is_finite() && range.1.is_finite() && range.0 < range.1) {
            return Err(domain(format!("{name}: invalid quadrature range")));
        }
        let mut model = Self {
            name,
            ln_pdf,
            score,
            support,
            range,
            mean: 0.0,
            variance: 1.0,
            smooth,
        };
        let quad = QuadratureSpec::default();
        let breaks = model.breaks();
        let mass = integrate_pieces(&|x| model.pdf(x), &breaks, &quad)?;
        if (mass - 1.0).abs() > 1e-6 {
            return Err(domain(format!("{}: density integrates to {mass}", model.name)));
        }
        let mean = integrate_pieces(&|x| x * model.pdf(x), &breaks, &quad)?;
        let variance = integrate_pieces(&|x| (x - mean).powi(2) * model.pdf(x), &breaks, &quad)?;
        if !(variance > 0.0) {
            return Err(domain(format!("{}: variance must be positive", model.name)));
        }
        model.mean = mean;
        model.variance = variance;
        if smooth {
            model.check_stein(&quad)?;
        }
        Ok(model)
    }

    fn check_stein(&self, quad: &QuadratureSpec) -> Result<()> {
        let breaks = self.breaks();
        let tests: [(&str, fn(f64) -> f64, fn(f64) -> f64); 3] = [
            ("1", |_| 1.0, |_| 0.0),
            ("x", |x| x, |_| 1.0),
            ("x^2", |x| x * x, |x| 2.0 * x),
        ];
        for (label, g, dg) in tests {
            let lhs = integrate_pieces(&|x| self.score(x) * g(x) * self.pdf(x), &breaks, quad)?;
            let rhs = -integrate_pieces(&|x| dg(x) * self.pdf(x), &breaks, quad)?;
            // Only a magnitude is needed; the integrand has kinks.
            let rough = QuadratureSpec { rel_tol: 1e-3, ..*quad };
            let scale = integrate_pieces(&|x| (self.score(x) * g(x)).abs() * self.pdf(x), &breaks, &rough)?;
            if (lhs - rhs).abs() > 1e-4 * scale.max(1.0) {
                return Err(domain(format!(
                    "{}: Stein identity fails for g = {label}: {lhs} vs {rhs}",
                    self.name
                )));
            }
        }
        Ok(())
    }

    pub fn gaussian(mean: f64, sd: f64) -> Result<Self> {
        if !(sd > 0.0 && sd.is_finite() && mean.is_finite()) {
            return Err(domain(format!("invalid normal parameters ({mean}, {sd})")));
        }
        let c = -sd.ln() - 0.5 * (2.0 * PI).ln();
        let v = sd * sd;
        Self::new(
            format!("normal({mean}, {sd})"),
            Support::real_line(),
            (mean - TAIL_SDS * sd, mean + TAIL_SDS * sd),
            Arc::new(move |x| c - (x - mean).powi(2) / (2.0 * v)),
            Arc::new(move |x| -(x - mean) / v),
            true,
        )
    }

    /// Uniform on `[a, b]`; not smooth, so the Stein check is skipped.
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(domain(format!("invalid uniform support [{a}, {b}]")));
        }
        let c = -(b - a).ln();
        Self::new(
            format!("uniform({a}, {b})"),
            Support { lo: a, hi: b },
            (a, b),
            Arc::new(move |x| if (a..=b).contains(&x) { c } else { f64::NEG_INFINITY }),
            Arc::new(|_| 0.0),
            false,
        )
    }

    pub fn gaussian_mixture(weights: &[f64], means: &[f64], sds: &[f64]) -> Result<Self> {
        let k = weights.len();
        if k == 0 || means.len() != k || sds.len() != k {
            return Err(domain("mixture parameter vectors must be non-empty and of equal length"));
        }
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|w| !(*w > 0.0)) || (total - 1.0).abs() > 1e-12 {
            return Err(domain("mixture weights must be positive and sum to 1"));
        }
        if sds.iter().any(|s| !(*s > 0.0 && s.is_finite())) || means.iter().any(|m| !m.is_finite()) {
            return Err(domain("mixture components need finite means and positive sds"));
        }
        let logc: Vec<f64> = weights
            .iter()
            .zip(sds)
            .map(|(w, s)| w.ln() - s.ln() - 0.5 * (2.0 * PI).ln())
            .collect();
        let (m1, s1) = (means.to_vec(), sds.to_vec());
        let (m2, s2, c2) = (means.to_vec(), sds.to_vec(), logc.clone());
        let ln_pdf = move |x: f64| {
            let t: Vec<f64> = (0..logc.len())
                .map(|i| logc[i] - (x - m1[i]).powi(2) / (2.0 * s1[i] * s1[i]))
                .collect();
            log_sum_exp(&t)
        };
        let score = move |x: f64| {
            let t: Vec<f64> = (0..c2.len())
                .map(|i| c2[i] - (x - m2[i]).powi(2) / (2.0 * s2[i] * s2[i]))
                .collect();
            let m = t.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let (mut num, mut den) = (0.0, 0.0);
            for i in 0..t.len() {
                let r = (t[i] - m).exp();
                num += r * (-(x - m2[i]) / (s2[i] * s2[i]));
                den += r;
            }
            num / den
        };
        let lo = (0..k).map(|i| means[i] - TAIL_SDS * sds[i]).fold(f64::INFINITY, f64::min);
        let hi = (0..k).map(|i| means[i] + TAIL_SDS * sds[i]).fold(f64::NEG_INFINITY, f64::max);
        Self::new(
            format!("mixture({k})"),
            Support::real_line(),
            (lo, hi),
            Arc::new(ln_pdf),
            Arc::new(score),
            true,
        )
    }

    /// `½N(-1, 0.25) + ½N(1, 0.25)` scaled by `1/√1.25` to unit variance.
    pub fn standardized_mixture() -> Result<Self> {
        let s = 1.25f64.sqrt();
        let mut m = Self::gaussian_mixture(&[0.5, 0.5], &[-1.0 / s, 1.0 / s], &[0.5 / s, 0.5 / s])?;
        m.name = "standardized-mixture".into();
        Ok(m)
    }

    /// Student t with `nu > 2` degrees of freedom, scaled to unit variance.
    pub fn student_t(nu: f64) -> Result<Self> {
        if !(nu > 2.0 && nu.is_finite()) {
            return Err(domain(format!("nu = {nu} must exceed 2")));
        }
        let s2 = (nu - 2.0) / nu;
        let c = ln_gamma_fn(0.5 * (nu + 1.0)) - ln_gamma_fn(0.5 * nu) - 0.5 * (nu * PI).ln() - 0.5 * s2.ln();
        let range = 400.0f64.max(TAIL_SDS);
        Self::new(
            format!("student-t({nu})"),
            Support::real_line(),
            (-range, range),
            Arc::new(move |x| c - 0.5 * (nu + 1.0) * (x * x / (nu * s2)).ln_1p()),
            Arc::new(move |x| -(nu + 1.0) * x / (nu * s2 + x * x)),
            true,
        )
    }

    /// Gaussian kernel density estimate with analytic score.
    pub fn kde(samples: &[f64], bandwidth: Bandwidth) -> Result<Self> {
        if samples.len() < 100 {
            return Err(Error::InsufficientSamples {
                needed: 100,
                got: samples.len(),
            });
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("kde sample".into()));
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let sd = (samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        if !(sd > 0.0) {
            return Err(domain("kde samples are degenerate (zero variance)"));
        }
        let h = match bandwidth {
            Bandwidth::Silverman => silverman_bandwidth(sd, samples.len()),
            Bandwidth::Fixed(h) if h > 0.0 && h.is_finite() => h,
            Bandwidth::Fixed(h) => return Err(domain(format!("bandwidth {h} must be positive"))),
        };
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let kde = Arc::new(Kde { x: sorted, h });
        let (k1, k2) = (kde.clone(), kde.clone());
        let range = (kde.x[0] - 12.0 * h, kde.x[kde.x.len() - 1] + 12.0 * h);
        Self::new(
            format!("kde(n={}, h={h:.6})", samples.len()),
            Support::real_line(),
            range,
            Arc::new(move |x| k1.ln_pdf_score(x).0),
            Arc::new(move |x| k2.ln_pdf_score(x).1),
            true,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pdf(&self, x: f64) -> f64 {
        (self.ln_pdf)(x).exp()
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        (self.ln_pdf)(x)
    }

    /// `ρ(x) = f′(x)/f(x)`
    pub fn score(&self, x: f64) -> f64 {
        (self.score)(x)
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn sd(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn is_smooth(&self) -> bool {
        self.smooth
    }

    /// Quadrature breakpoints: the range ends plus finite support ends.
    pub fn breaks(&self) -> Vec<f64> {
        vec![self.range.0, self.range.1]
    }
}

pub fn silverman_bandwidth(sd: f64, n: usize) -> f64 {
    1.06 * sd * (n as f64).powf(-0.2)
}

struct Kde {
    /// Sorted samples.
    x: Vec<f64>,
    h: f64,
}

impl Kde {
    /// Kernels beyond this many bandwidths contribute below 1e-17 relative.
    const CUT: f64 = 9.0;

    fn ln_pdf_score(&self, x: f64) -> (f64, f64) {
        let h = self.h;
        let n = self.x.len() as f64;
        let lo = self.x.partition_point(|&v| v < x - Self::CUT * h);
        let hi = self.x.partition_point(|&v| v <= x + Self::CUT * h);
        let norm = -(n * h).ln() - 0.5 * (2.0 * PI).ln();
        if lo == hi {
            // Far tail: the nearest sample dominates.
            let i = self.x.partition_point(|&v| v < x);
            let near = if i == 0 {
                self.x[0]
            } else if i == self.x.len() {
                self.x[i - 1]
            } else if x - self.x[i - 1] < self.x[i] - x {
                self.x[i - 1]
            } else {
                self.x[i]
            };
            let z = (x - near) / h;
            return (norm - 0.5 * z * z, -z / h);
        }
        let zmin = self.x[lo..hi]
            .iter()
            .map(|v| ((x - v) / h).powi(2))
            .fold(f64::INFINITY, f64::min);
        let (mut s, mut d) = (0.0, 0.0);
        for v in &self.x[lo..hi] {
            let z = (x - v) / h;
            let k = (-0.5 * (z * z - zmin)).exp();
            s += k;
            d += -z / h * k;
        }
        (norm - 0.5 * zmin + s.ln(), d / s)
    }
}

/// Independent product of one-dimensional models.
#[derive(Clone, Debug)]
pub struct ProductDensityModel {
    components: Vec<DensityModel>,
}

impl ProductDensityModel {
    pub fn new(components: Vec<DensityModel>) -> Result<Self> {
        if components.is_empty() {
            return Err(domain("product model needs at least one component"));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[DensityModel] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// Diagonal of the covariance matrix.
    pub fn variances(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.variance()).collect()
    }
}
