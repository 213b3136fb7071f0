//! Rosenblatt paths from the finite-interval double Wiener–Itô representation
//!
//! `R_t = b_H ∫∫_{[0,t]²} (∫_{y₁∨y₂}^t ∂₁K^{H₀}(u,y₁) ∂₁K^{H₀}(u,y₂) du) dB_{y₁} dB_{y₂}`,
//! `H₀ = (H+1)/2`.
//!
//! With `η(u) = ∫_0^u ∂₁K^{H₀}(u,y) dB_y` this is `b_H ∫_0^t (η(u)² - E η(u)²) du`.
//! The Brownian motion is replaced by independent cell increments `ξ_i √δ_i`
//! and `dB_y` by its cell average, so `η(u) ≈ Σ_i Φ_i(u) ξ_i / √δ_i` where
//! `Φ_i(u)` is the exact integral of `∂₁K^{H₀}(u,·)` over cell `i`.

use nalgebra::{DMatrix, DVector};

use crate::chaos::{graded_nodes, volterra_edges, U_ORDER};
use crate::error::{check_hurst_long_memory, domain, Error, Result};
use crate::process::path::{Driver, SamplePath};
use crate::process::volterra::VolterraCells;
use crate::rng::RngStream;
use crate::spec::HermiteSpec;
use crate::special::constants::const_b_rosenblatt;

#[derive(Clone, Debug)]
pub struct RosenblattGridGenerator {
    hurst: f64,
    t_end: f64,
    n: usize,
    /// `phi[(l, i)] = Φ_i(u_l) √w_l / √δ_i`
    phi: DMatrix<f64>,
    /// `Σ_i phi[(l, i)]²`
    centering: Vec<f64>,
    /// Node index where each output interval ends.
    node_ends: Vec<usize>,
    scale: f64,
}

impl RosenblattGridGenerator {
    pub fn new(hurst: f64, t_end: f64, n: usize, inner_m: usize) -> Result<Self> {
        check_hurst_long_memory(hurst)?;
        if inner_m < 32 {
            return Err(domain(format!("inner_m = {inner_m} must be at least 32")));
        }
        if n == 0 || inner_m % n != 0 {
            return Err(Error::Grid(format!(
                "inner_m = {inner_m} must be a positive multiple of n = {n}"
            )));
        }
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(domain(format!("t_end = {t_end} must be positive and finite")));
        }
        let h0 = 0.5 * (hurst + 1.0);
        let edges = volterra_edges(h0, t_end, inner_m);
        let widths: Vec<f64> = edges.windows(2).map(|w| w[1] - w[0]).collect();
        let (nodes, weights) = graded_nodes(&edges, U_ORDER);
        let cells = widths.len();
        let vc = VolterraCells::new(h0);
        let mut phi = DMatrix::zeros(nodes.len(), cells);
        let mut buf = vec![0.0; cells];
        for (l, (&u, &w)) in nodes.iter().zip(&weights).enumerate() {
            vc.values_into(&edges, u, &mut buf);
            let sw = w.sqrt();
            for i in 0..cells {
                phi[(l, i)] = buf[i] * sw / widths[i].sqrt();
            }
        }
        let centering = (0..nodes.len())
            .map(|l| phi.row(l).iter().map(|v| v * v).sum())
            .collect();
        let dt = t_end / n as f64;
        let node_ends = (1..=n)
            .map(|k| {
                let tk = k as f64 * dt;
                nodes.partition_point(|&u| u < tk * (1.0 - 1e-12))
            })
            .collect();
        Ok(Self {
            hurst,
            t_end,
            n,
            phi,
            centering,
            node_ends,
            scale: const_b_rosenblatt(hurst)?,
        })
    }

    /// Exact `Var(R_{t_k})` of the discretized process at each output time.
    pub fn exact_variances(&self) -> Vec<f64> {
        let m = self.phi.ncols();
        let mut gram = DMatrix::<f64>::zeros(m, m);
        let mut out = Vec::with_capacity(self.n);
        let mut l = 0;
        for &end in &self.node_ends {
            while l < end {
                let row = self.phi.row(l).transpose();
                gram.ger(1.0, &row, &row, 1.0);
                l += 1;
            }
            out.push(2.0 * self.scale * self.scale * gram.norm_squared());
        }
        out
    }

    pub fn sample(&self, rng: &mut RngStream) -> SamplePath {
        let xi = DVector::from_iterator(self.phi.ncols(), (0..self.phi.ncols()).map(|_| rng.normal()));
        let eta = &self.phi * xi;
        let mut values = Vec::with_capacity(self.n + 1);
        values.push(0.0);
        let mut acc = 0.0;
        let mut l = 0;
        for &end in &self.node_ends {
            while l < end {
                acc += eta[l] * eta[l] - self.centering[l];
                l += 1;
            }
            values.push(self.scale * acc);
        }
        SamplePath::new(
            self.t_end,
            values,
            Driver::Hermite {
                spec: HermiteSpec::scalar(2, self.hurst).expect("validated Hurst index"),
            },
        )
        .expect("generated path is finite")
    }
}

/// One Rosenblatt path from the Volterra representation with `inner_m` Brownian cells.
pub fn sample_rosenblatt_grid(
    stream: &mut RngStream,
    hurst: f64,
    t_end: f64,
    n: usize,
    inner_m: usize,
) -> Result<SamplePath> {
    Ok(RosenblattGridGenerator::new(hurst, t_end, n, inner_m)?.sample(stream))
}
