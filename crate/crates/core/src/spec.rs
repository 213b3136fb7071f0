use serde::{Deserialize, Serialize};

use crate::error::{check_hurst_long_memory, domain, Result};

/// Parameters of a (possibly multi-parameter) Hermite process.
///
/// `q` is the chaos order and `hurst[i]` the self-similarity index along axis `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermiteSpec {
    q: u32,
    hurst: Vec<f64>,
}

impl HermiteSpec {
    pub fn new(q: u32, hurst: Vec<f64>) -> Result<Self> {
        if q < 1 {
            return Err(domain("Hermite order q must be at least 1"));
        }
        if hurst.is_empty() {
            return Err(domain("at least one Hurst index is required"));
        }
        for &h in &hurst {
            check_hurst_long_memory(h)?;
        }
        Ok(Self { q, hurst })
    }

    pub fn scalar(q: u32, hurst: f64) -> Result<Self> {
        Self::new(q, vec![hurst])
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn hurst(&self) -> &[f64] {
        &self.hurst
    }

    pub fn dim(&self) -> usize {
        self.hurst.len()
    }

    /// Hurst index along axis 0.
    pub fn h(&self) -> f64 {
        self.hurst[0]
    }

    /// Hurst index of the underlying fGn: `1 + (H - 1) / q`.
    pub fn h0(&self, axis: usize) -> f64 {
        underlying_hurst(self.hurst[axis], self.q)
    }

    pub fn h0s(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.h0(i)).collect()
    }

    /// `1 + 2 (H - 1) / q`, the self-similarity index of the squared fluctuation.
    pub fn h_prime(&self, axis: usize) -> f64 {
        1.0 + 2.0 * (self.hurst[axis] - 1.0) / self.q as f64
    }
}

pub fn underlying_hurst(h: f64, q: u32) -> f64 {
    1.0 + (h - 1.0) / q as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_indices() {
        let s = HermiteSpec::scalar(2, 0.8).unwrap();
        assert!((s.h0(0) - 0.9).abs() < 1e-15);
        assert!((s.h_prime(0) - 0.8).abs() < 1e-15);
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn rejects_short_memory() {
        assert!(HermiteSpec::scalar(2, 0.5).is_err());
        assert!(HermiteSpec::scalar(2, 1.0).is_err());
        assert!(HermiteSpec::scalar(0, 0.7).is_err());
        assert!(HermiteSpec::new(2, vec![]).is_err());
    }
}
