//! Hermite processes as exactly normalized partial sums of `H_q` applied to
//! long-memory fractional Gaussian noise (non-central limit construction).

use crate::error::{check_hurst_open_unit, domain, Result};
use nalgebra::DMatrix;

use crate::gaussian::{rho_unchecked, FgnGenerator, FgnSheetGenerator};
use crate::process::path::{Driver, FieldSample, LatticeConfig, LatticeSequence, SamplePath};
use crate::rng::RngStream;
use crate::spec::HermiteSpec;
use crate::special::constants::factorial;
use crate::special::hermite::hermite_poly;

/// Fractional Brownian motion on `n` intervals of `[0, t_end]`.
pub fn sample_fbm(stream: &mut RngStream, hurst: f64, t_end: f64, n: usize) -> Result<SamplePath> {
    check_hurst_open_unit(hurst)?;
    let gen = FgnGenerator::new(hurst, n)?;
    let scale = (t_end / n as f64).powf(hurst);
    let x = gen.sample(stream);
    let mut values = Vec::with_capacity(n + 1);
    values.push(0.0);
    let mut acc = 0.0;
    for v in x {
        acc += v;
        values.push(acc * scale);
    }
    SamplePath::new(t_end, values, Driver::GaussianDriver { hurst })
}

/// `Σ_{i,j<n} ρ_{h0}(|i-j|)^q`.
pub fn chaos_sum(h0: f64, q: u32, n: usize) -> f64 {
    let mut s = n as f64;
    for k in 1..n {
        s += 2.0 * (n - k) as f64 * rho_unchecked(h0, k as f64).powi(q as i32);
    }
    s
}

/// `σ_N² = q! Σ_{i,j=1}^{N} ρ_{H₀}(|i-j|)^q`, the exact variance of `Σ_{i<=N} H_q(X_i)`.
pub fn lattice_variance(spec: &HermiteSpec, axis: usize, n: usize) -> f64 {
    factorial(spec.q()) * chaos_sum(spec.h0(axis), spec.q(), n)
}

/// Autocovariance at lag `k` of the lattice sequence on `axis`.
pub fn lattice_autocovariance(spec: &HermiteSpec, axis: usize, seq: LatticeSequence, k: usize) -> f64 {
    match seq {
        LatticeSequence::Fgn => rho_unchecked(spec.h0(axis), k as f64),
        LatticeSequence::Matched => {
            rho_unchecked(spec.hurst()[axis], k as f64).powf(1.0 / spec.q() as f64)
        }
    }
}

/// `Σ_{i,j<n} r(|i-j|)^q` for the lattice sequence on `axis`.
fn sequence_chaos_sum(spec: &HermiteSpec, axis: usize, seq: LatticeSequence, n: usize) -> f64 {
    match seq {
        LatticeSequence::Fgn => chaos_sum(spec.h0(axis), spec.q(), n),
        // r^q = ρ_H sums to the fBm variance n^{2H}.
        LatticeSequence::Matched => (n as f64).powf(2.0 * spec.hurst()[axis]),
    }
}

fn sequence_covariance(spec: &HermiteSpec, axis: usize, seq: LatticeSequence, n: usize) -> DMatrix<f64> {
    let r: Vec<f64> = (0..n).map(|k| lattice_autocovariance(spec, axis, seq, k)).collect();
    DMatrix::from_fn(n, n, |i, j| r[i.abs_diff(j)])
}

/// Cached generator of Hermite paths with a fixed grid and lattice.
#[derive(Clone, Debug)]
pub struct HermitePathGenerator {
    spec: HermiteSpec,
    t_end: f64,
    n: usize,
    lattice: usize,
    fgn: FgnGenerator,
    sigma: f64,
}

impl HermitePathGenerator {
    pub fn new(spec: HermiteSpec, t_end: f64, n: usize, cfg: LatticeConfig) -> Result<Self> {
        if spec.dim() != 1 {
            return Err(domain("path generator needs a one-parameter spec"));
        }
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(domain(format!("t_end = {t_end} must be positive and finite")));
        }
        if n == 0 {
            return Err(domain("n must be positive"));
        }
        let lattice = cfg.effective(n);
        check_hurst_open_unit(spec.h0(0))?;
        let seq = cfg.sequence;
        let fgn = FgnGenerator::from_fn(lattice, |k| lattice_autocovariance(&spec, 0, seq, k))?;
        let sigma = (factorial(spec.q()) * sequence_chaos_sum(&spec, 0, seq, lattice)).sqrt();
        Ok(Self {
            spec,
            t_end,
            n,
            lattice,
            fgn,
            sigma,
        })
    }

    pub fn spec(&self) -> &HermiteSpec {
        &self.spec
    }

    pub fn lattice_size(&self) -> usize {
        self.lattice
    }

    /// `σ_N²` for the lattice in use.
    pub fn sigma_n_sq(&self) -> f64 {
        self.sigma * self.sigma
    }

    fn path_from_noise(&self, x: &[f64]) -> SamplePath {
        let q = self.spec.q();
        let step = self.lattice / self.n;
        let scale = self.t_end.powf(self.spec.h()) / self.sigma;
        let mut values = Vec::with_capacity(self.n + 1);
        values.push(0.0);
        let mut acc = 0.0;
        for chunk in x.chunks(step) {
            for &v in chunk {
                acc += hermite_poly(q, v);
            }
            values.push(acc * scale);
        }
        SamplePath::new(
            self.t_end,
            values,
            Driver::Hermite {
                spec: self.spec.clone(),
            },
        )
        .expect("generated path is finite")
    }

    pub fn sample(&self, rng: &mut RngStream) -> SamplePath {
        self.path_from_noise(&self.fgn.sample(rng))
    }

    /// Two independent paths from one circulant synthesis.
    pub fn sample_pair(&self, rng: &mut RngStream) -> (SamplePath, SamplePath) {
        let (a, b) = self.fgn.sample_pair(rng);
        (self.path_from_noise(&a), self.path_from_noise(&b))
    }

    /// Two independent draws of the unnormalized lattice sum `Σ_{i<=N} H_q(X_i)`.
    pub fn lattice_sum_pair(&self, rng: &mut RngStream) -> (f64, f64) {
        let q = self.spec.q();
        let (a, b) = self.fgn.sample_pair(rng);
        (
            a.iter().map(|&v| hermite_poly(q, v)).sum(),
            b.iter().map(|&v| hermite_poly(q, v)).sum(),
        )
    }
}

/// One Hermite path; see [`HermitePathGenerator`] for repeated sampling.
pub fn sample_hermite_path(
    stream: &mut RngStream,
    spec: &HermiteSpec,
    t_end: f64,
    n: usize,
    cfg: LatticeConfig,
) -> Result<SamplePath> {
    Ok(HermitePathGenerator::new(spec.clone(), t_end, n, cfg)?.sample(stream))
}

/// Cached generator of two-parameter Hermite sheets.
#[derive(Clone, Debug)]
pub struct HermiteSheetGenerator {
    spec: HermiteSpec,
    extents: [f64; 2],
    dims: [usize; 2],
    lattice: [usize; 2],
    gen: FgnSheetGenerator,
    sigma: f64,
}

impl HermiteSheetGenerator {
    pub fn new(spec: HermiteSpec, extents: [f64; 2], dims: [usize; 2], cfg: LatticeConfig) -> Result<Self> {
        if spec.dim() != 2 {
            return Err(domain("sheet generator needs a two-parameter spec"));
        }
        if extents.iter().any(|e| !(*e > 0.0)) || dims.iter().any(|d| *d == 0) {
            return Err(domain("extents and dims must be positive"));
        }
        let lattice = [cfg.effective(dims[0]), cfg.effective(dims[1])];
        check_hurst_open_unit(spec.h0(0))?;
        check_hurst_open_unit(spec.h0(1))?;
        let seq = cfg.sequence;
        let gen = FgnSheetGenerator::from_covariances(
            sequence_covariance(&spec, 0, seq, lattice[0]),
            sequence_covariance(&spec, 1, seq, lattice[1]),
        )?;
        let sigma = (factorial(spec.q())
            * sequence_chaos_sum(&spec, 0, seq, lattice[0])
            * sequence_chaos_sum(&spec, 1, seq, lattice[1]))
        .sqrt();
        Ok(Self {
            spec,
            extents,
            dims,
            lattice,
            gen,
            sigma,
        })
    }

    pub fn lattice_size(&self) -> [usize; 2] {
        self.lattice
    }

    pub fn sample(&self, rng: &mut RngStream) -> FieldSample {
        let q = self.spec.q();
        let x = self.gen.sample(rng);
        let [n1, n2] = self.dims;
        let [l1, l2] = self.lattice;
        let (s1, s2) = (l1 / n1, l2 / n2);
        // Block sums of H_q(X) over lattice blocks, then 2-d prefix sums.
        let mut block = vec![0.0; n1 * n2];
        for j in 0..l2 {
            let bj = j / s2;
            for i in 0..l1 {
                block[(i / s1) * n2 + bj] += hermite_poly(q, x[(i, j)]);
            }
        }
        let scale = self.extents[0].powf(self.spec.hurst()[0]) * self.extents[1].powf(self.spec.hurst()[1])
            / self.sigma;
        let mut values = vec![0.0; (n1 + 1) * (n2 + 1)];
        for i in 1..=n1 {
            let mut row = 0.0;
            for j in 1..=n2 {
                row += block[(i - 1) * n2 + (j - 1)];
                values[i * (n2 + 1) + j] = values[(i - 1) * (n2 + 1) + j] + row * scale;
            }
        }
        FieldSample::new(
            self.extents.to_vec(),
            self.dims.to_vec(),
            values,
            Some(self.spec.clone()),
        )
        .expect("consistent sheet shape")
    }
}

/// One Hermite sheet on `dims[0] x dims[1]` cells of `[0, extents[0]] x [0, extents[1]]`.
pub fn sample_hermite_sheet(
    stream: &mut RngStream,
    spec: &HermiteSpec,
    extents: [f64; 2],
    dims: [usize; 2],
    cfg: LatticeConfig,
) -> Result<FieldSample> {
    Ok(HermiteSheetGenerator::new(spec.clone(), extents, dims, cfg)?.sample(stream))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_stream;
    use crate::gaussian::fgn_covariance;

    #[test]
    fn chaos_sum_matches_dense_covariance() {
        let h0 = 0.85;
        let n = 40;
        let c = fgn_covariance(h0, n).unwrap();
        let dense: f64 = c.iter().map(|v| v * v).sum();
        assert!((chaos_sum(h0, 2, n) - dense).abs() < 1e-10 * dense);
    }

    #[test]
    fn fbm_starts_at_zero_and_scales() {
        let mut s = derive_stream(1, 0);
        let p = sample_fbm(&mut s, 0.5, 1.0, 64).unwrap();
        assert_eq!(p.values()[0], 0.0);
        assert_eq!(p.n(), 64);
        assert!(sample_fbm(&mut s, 1.2, 1.0, 64).is_err());
    }

    #[test]
    fn hermite_path_starts_at_zero() {
        let spec = HermiteSpec::scalar(2, 0.7).unwrap();
        let g = HermitePathGenerator::new(spec, 1.0, 10, LatticeConfig::new(64).unwrap()).unwrap();
        assert_eq!(g.lattice_size(), 70);
        let mut s = derive_stream(2, 0);
        let p = g.sample(&mut s);
        assert_eq!(p.values()[0], 0.0);
        assert_eq!(p.n(), 10);
    }

    #[test]
    fn sheet_vanishes_on_axes() {
        let spec = HermiteSpec::new(2, vec![0.7, 0.8]).unwrap();
        let mut s = derive_stream(3, 0);
        let f = sample_hermite_sheet(&mut s, &spec, [1.0, 1.0], [4, 8], LatticeConfig::new(16).unwrap())
            .unwrap();
        for i in 0..=4 {
            assert_eq!(f.get(&[i, 0]), 0.0);
        }
        for j in 0..=8 {
            assert_eq!(f.get(&[0, j]), 0.0);
        }
        assert!(f.get(&[4, 8]) != 0.0);
    }
}
