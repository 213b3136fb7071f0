use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::spec::HermiteSpec;

/// The process a path was drawn from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Driver {
    /// Fractional Brownian motion of the given Hurst index.
    GaussianDriver { hurst: f64 },
    /// Hermite process.
    Hermite { spec: HermiteSpec },
    /// Observed data of unknown origin.
    External,
}

/// A deterministic kernel `x` on `[0, ∞)` used in moving averages.
#[derive(Clone)]
pub struct MovingAverageKernel {
    name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl MovingAverageKernel {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    /// `x(u) = e^{-rate u}`.
    pub fn exponential(rate: f64) -> Self {
        Self::new(format!("exp(-{rate}u)"), move |u| (-rate * u).exp())
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("const({c})"), move |_| c)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        (self.f)(u)
    }
}

impl fmt::Debug for MovingAverageKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MovingAverageKernel").field("name", &self.name).finish()
    }
}

/// How a path was obtained from its driver.
#[derive(Clone, Debug)]
pub enum Derivation {
    Direct,
    MovingAverage(MovingAverageKernel),
    Vasicek { a: f64, b: f64 },
}

/// Values of a process on the uniform grid `t_i = i t_end / n`, `i = 0..=n`.
#[derive(Clone, Debug)]
pub struct SamplePath {
    t_end: f64,
    values: Vec<f64>,
    driver: Driver,
    derivation: Derivation,
}

impl SamplePath {
    pub fn new(t_end: f64, values: Vec<f64>, driver: Driver) -> Result<Self> {
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(domain(format!("t_end = {t_end} must be positive and finite")));
        }
        if values.len() < 2 {
            return Err(domain("a path needs at least two grid values"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("path value".into()));
        }
        Ok(Self {
            t_end,
            values,
            driver,
            derivation: Derivation::Direct,
        })
    }

    pub(crate) fn with_derivation(mut self, derivation: Derivation) -> Self {
        self.derivation = derivation;
        self
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Number of grid intervals.
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn dt(&self) -> f64 {
        self.t_end / self.n() as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.dt()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.n()).map(|i| self.time(i)).collect()
    }

    pub fn terminal(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn driver(&self) -> &Driver {
        &self.driver
    }

    pub fn derivation(&self) -> &Derivation {
        &self.derivation
    }

    pub fn hermite_spec(&self) -> Option<&HermiteSpec> {
        match &self.driver {
            Driver::Hermite { spec } => Some(spec),
            _ => None,
        }
    }

    /// Increments `Z_{i+1} - Z_i`.
    pub fn increments(&self) -> Vec<f64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Grid index of time `t`, if `t` is a grid point (to relative tolerance 1e-9).
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let x = t / self.dt();
        let k = x.round();
        if (x - k).abs() > 1e-9 * x.abs().max(1.0) || k < 0.0 || k as usize > self.n() {
            return Err(Error::Grid(format!("time {t} is not a grid point")));
        }
        Ok(k as usize)
    }
}

/// Values of a `d`-parameter field on the lattice `Π {0, …, dims[j]}` with
/// spacing `extents[j] / dims[j]`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSample {
    extents: Vec<f64>,
    dims: Vec<usize>,
    values: Vec<f64>,
    spec: Option<HermiteSpec>,
}

impl FieldSample {
    pub fn new(
        extents: Vec<f64>,
        dims: Vec<usize>,
        values: Vec<f64>,
        spec: Option<HermiteSpec>,
    ) -> Result<Self> {
        if extents.len() != dims.len() || dims.is_empty() {
            return Err(domain("extents and dims must have the same positive length"));
        }
        if extents.iter().any(|e| !(*e > 0.0)) || dims.iter().any(|d| *d == 0) {
            return Err(domain("extents and dims must be positive"));
        }
        let size: usize = dims.iter().map(|d| d + 1).product();
        if values.len() != size {
            return Err(domain(format!(
                "field needs {size} values, got {}",
                values.len()
            )));
        }
        Ok(Self {
            extents,
            dims,
            values,
            spec,
        })
    }

    pub fn from_path(path: &SamplePath) -> Self {
        Self {
            extents: vec![path.t_end()],
            dims: vec![path.n()],
            values: path.values().to_vec(),
            spec: path.hermite_spec().cloned(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn extents(&self) -> &[f64] {
        &self.extents
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spec(&self) -> Option<&HermiteSpec> {
        self.spec.as_ref()
    }

    fn offset(&self, idx: &[usize]) -> usize {
        let mut off = 0;
        for (j, &i) in idx.iter().enumerate() {
            off = off * (self.dims[j] + 1) + i;
        }
        off
    }

    /// Value at lattice index `idx`.
    pub fn get(&self, idx: &[usize]) -> f64 {
        self.values[self.offset(idx)]
    }

    /// Lattice index of the point `t`, if it lies on the lattice.
    pub fn index_of(&self, t: &[f64]) -> Result<Vec<usize>> {
        if t.len() != self.dim() {
            return Err(Error::Grid("point dimension differs from field dimension".into()));
        }
        t.iter()
            .enumerate()
            .map(|(j, &x)| {
                let y = x * self.dims[j] as f64 / self.extents[j];
                let k = y.round();
                if (y - k).abs() > 1e-9 * y.abs().max(1.0) || k < 0.0 || k as usize > self.dims[j] {
                    Err(Error::Grid(format!("coordinate {x} on axis {j} is off the lattice")))
                } else {
                    Ok(k as usize)
                }
            })
            .collect()
    }
}

/// Gaussian sequence fed to `H_q` in the non-central limit construction.
///
/// Both have autocovariance `~ c k^{2H₀-2}` and so share the Hermite limit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeSequence {
    /// Fractional Gaussian noise with `H₀ = 1 + (H-1)/q`.
    #[default]
    Fgn,
    /// Autocovariance `ρ_H(k)^{1/q}`, so `Cov(H_q(X_i), H_q(X_j)) = q! ρ_H(i-j)`
    /// and lattice partial sums have the fBm covariance at every scale.
    Matched,
}

/// Inner lattice of the non-central limit approximation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub lattice_n: usize,
    #[serde(default)]
    pub sequence: LatticeSequence,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self {
            lattice_n: 16384,
            sequence: LatticeSequence::Fgn,
        }
    }
}

impl LatticeConfig {
    pub fn new(lattice_n: usize) -> Result<Self> {
        if lattice_n < 8 {
            return Err(domain(format!("lattice_n = {lattice_n} must be at least 8")));
        }
        Ok(Self {
            lattice_n,
            sequence: LatticeSequence::Fgn,
        })
    }

    pub fn with_sequence(mut self, sequence: LatticeSequence) -> Self {
        self.sequence = sequence;
        self
    }

    /// Lattice size actually used for an output grid of `n` intervals: the
    /// smallest multiple of `n` that is at least `lattice_n`, so output times
    /// fall on lattice points.
    pub fn effective(&self, n: usize) -> usize {
        let n = n.max(1);
        self.lattice_n.max(n).div_ceil(n) * n
    }
}
